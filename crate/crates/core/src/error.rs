use thiserror::Error;

/// Errors raised by the evaluators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input violates a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// An iterative method or adaptive quadrature did not reach tolerance.
    #[error("no convergence: {0}")]
    NonConvergence(String),
    /// A value left the representable or validated range.
    #[error("overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
