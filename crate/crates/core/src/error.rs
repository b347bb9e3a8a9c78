use thiserror::Error;

/// Errors raised by the model, engine and analysis layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An operation was called with arguments outside its domain
    /// (non-adjacent vertices, level out of range, `j = 0`, ...).
    #[error("usage error: {0}")]
    Usage(String),
    /// A simulator or experiment was assembled from inconsistent parameters.
    #[error("configuration error: {0}")]
    Config(String),
    /// An engine-internal precondition was violated.
    #[error("internal error: {0}")]
    Internal(String),
    /// Malformed serialized input.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}

pub(crate) fn config<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}
