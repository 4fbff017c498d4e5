//! Shared numeric kernel: adaptive Gauss–Kronrod quadrature, a bracketing
//! root finder, the special functions behind the built-in weights, and the
//! tanh-sinh reference integrator used by verification.

pub mod oracle;
pub mod quad;
pub mod root;
pub mod special;

pub use quad::{integrate, integrate_pieces, integrate_value, QuadConfig, Quadrature};
pub use root::{find_root, RootConfig};
