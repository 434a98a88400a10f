use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A matrix or Bloch vector failed an input check; `residual` is the size of the violation.
    #[error("validation failed: {property} (residual {residual:e}, tolerance {tolerance:e})")]
    Validation {
        property: &'static str,
        residual: f64,
        tolerance: f64,
    },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("positivity verdict {coefficients} from S_k disagrees with eigenvalue verdict {eigen}")]
    OracleDisagreement {
        coefficients: &'static str,
        eigen: &'static str,
    },

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
