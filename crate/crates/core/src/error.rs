use thiserror::Error;

/// Errors raised while building or analysing kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid state space: {0}")]
    InvalidSpace(String),

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("numerical error: {message} (residual {residual:e})")]
    Numerical { message: String, residual: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("ordering violated at index {index}: {message}")]
    Ordering { index: usize, message: String },

    #[error("truncation mass {mass:e} exceeds limit {limit:e}: {message}")]
    Truncation {
        mass: f64,
        limit: f64,
        message: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
