//! Certified two-sided error bounds for one-point weighted quadrature rules.
//!
//! For a weight `w` on `[a, b]`, an evaluation point `x` and a parameter
//! `c`, the crate evaluates
//!
//! ```text
//! L_{w,c}(f)(x) = f(x) − (1/m(a,b)) ∫ f w − c·(f(b) − f(a))/(b − a)·(x − σ(a,b))
//! ```
//!
//! and bounds it through derivative ranges ([`weighted`]), the least concave
//! majorant of the modulus of continuity ([`majorant`]) and the classical
//! unweighted closed forms ([`classical`]). [`verify`] holds an independent
//! brute-force oracle, a randomized battery over all inequalities, and the
//! Beta(1/2, 1/2) reference table with its erratum analysis.

// NaN-rejecting guards are written as `!(a <= b)` on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod error;
pub mod function;
pub mod interval;
pub mod majorant;
pub mod numerics;
pub mod verify;
pub mod weighted;
pub mod weights;

pub use error::{Error, Result};
pub use function::FunctionSpec;
pub use interval::Interval;
pub use weighted::{BoundReport, KernelPoint, ReportOptions};
pub use weights::{Weight, WeightKind};
