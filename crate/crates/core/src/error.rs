use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("no valid q: {0}")]
    NoValidQ(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    /// A construction produced a sequence that failed self-verification.
    #[error("construction bug: {0}")]
    ConstructionBug(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
