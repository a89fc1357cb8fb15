//! Crate-wide error type.

/// Errors reported by the estimation toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A distribution or model parameter is outside its valid range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An argument violates an operation's domain (empty interval, probability
    /// outside (0,1), ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A mixture or tilt was requested from an empty chain sample.
    #[error("empty chain sample")]
    EmptyChain,

    /// Vector length does not match the model dimension.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The requested operation is not implemented for this configuration.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
