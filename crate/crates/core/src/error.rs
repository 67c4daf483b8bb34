use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or inconsistent input (dimension mismatch, off-grid value, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// The instance is larger than the enumeration routines support.
    #[error("unsupported size: {0}")]
    Unsupported(String),
    /// A serialized artifact could not be decoded.
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
