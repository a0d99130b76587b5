use thiserror::Error;

/// Errors raised by tensor and matrix operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("mode {mode} out of range for a tensor of order {order}")]
    Mode { mode: usize, order: usize },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("index out of range: {0}")]
    Range(String),

    #[error("matrix is singular (pivot {pivot:e} below threshold {threshold:e})")]
    Singular { pivot: f64, threshold: f64 },

    #[error("tensor is not rank-1: {0}")]
    Rank(String),

    #[error("tensor is not symmetric: {0}")]
    Symmetry(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
