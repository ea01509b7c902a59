use num_complex::Complex64;
use thiserror::Error;

use crate::cutplane::ComponentSignature;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// A coordinate lies on (or numerically on) the real axis.
    #[error("invalid point: coordinate {index} has imaginary part {imag:e}")]
    InvalidPoint { index: usize, imag: f64 },

    #[error("pole: evaluation point {0} lies on the real axis")]
    Pole(f64),

    /// Adaptive quadrature ran out of subdivisions. The best estimate is kept.
    #[error(
        "quadrature tolerance not met after {subdivisions} subdivisions \
         (estimate {estimate}, error {error:e})"
    )]
    Accuracy {
        estimate: Complex64,
        error: f64,
        subdivisions: usize,
    },

    #[error("integrand does not decay: partial integrals fail to converge ({0})")]
    Divergence(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid test function: {0}")]
    InvalidTestFunction(String),

    #[error("no branch defined for component {0}")]
    NoBranch(ComponentSignature),

    #[error("function is only defined on the poly upper half-plane")]
    OutsideDomain,

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
