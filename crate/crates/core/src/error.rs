use thiserror::Error;

/// Errors produced by the invariant computations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input violates a documented precondition.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// An exhaustive computation was refused because its size bound was exceeded.
    #[error("size limit exceeded: {what} is {value}, limit is {limit}")]
    LimitExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("root finder did not converge after {0} iterations")]
    NoConvergence(usize),

    /// Exact arithmetic produced a value that must be integral but is not.
    #[error("arithmetic invariant violated: {0}")]
    Arithmetic(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}
