use thiserror::Error;

/// Errors raised by library operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("outside domain: {0}")]
    Domain(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("search failed after {tries} tries (best bias {best_bias})")]
    SearchFailure { tries: usize, best_bias: f64 },
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
