use thiserror::Error;

/// Errors produced by the half-line spectral toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("function provides derivatives up to order {available}, order {required} is required")]
    InsufficientDerivatives { required: usize, available: usize },

    #[error("quadrature rule has {available} nodes, at least {required} are required")]
    InsufficientRule { required: usize, available: usize },

    #[error("coercivity failure: diagonal entry {index} is {value:e}")]
    Coercivity { index: usize, value: f64 },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("{what} did not converge within {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },
}

impl Error {
    /// True for failures caused by the arithmetic rather than by the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Coercivity { .. } | Error::NotPositiveDefinite | Error::NoConvergence { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
