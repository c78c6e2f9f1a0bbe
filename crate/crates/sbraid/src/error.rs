use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A configuration document could not be parsed or validated.
    #[error("parse error: {0}")]
    Parse(String),

    /// An operation was called with arguments violating its preconditions.
    #[error("usage error: {0}")]
    Usage(String),

    /// An internal invariant failed. These indicate a bug, never a bad input.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
