use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("descriptor mismatch: {0}")]
    DescriptorMismatch(String),
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("invalid value: {0}")]
    InvalidValue(String),
    #[error("brute-force cap exceeded: {needed} elements required, cap is {cap}")]
    CapExceeded { cap: u64, needed: u64 },
    #[error("undecidable: {0}")]
    Undecidable(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn mismatch(msg: impl Into<String>) -> Error {
    Error::DescriptorMismatch(msg.into())
}
