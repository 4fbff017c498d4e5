use thiserror::Error;

/// Errors raised by the bound computations and their numeric kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("argument {value} outside the domain: {reason}")]
    Domain { value: f64, reason: String },

    #[error("quadrature did not converge: value {value}, error estimate {estimate}")]
    NonConvergence { value: f64, estimate: f64 },

    #[error("root not bracketed: g({lo}) = {g_lo}, g({hi}) = {g_hi}")]
    NoBracket {
        lo: f64,
        hi: f64,
        g_lo: f64,
        g_hi: f64,
    },

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
