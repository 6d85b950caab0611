use thiserror::Error;

/// Errors shared by every kernel in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("structural error at '{pointer}': {message}")]
    Structure { pointer: String, message: String },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("unsupported fan: {0}")]
    UnsupportedFan(String),

    #[error("undefined value: {0}")]
    Undefined(String),

    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
