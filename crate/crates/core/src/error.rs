use thiserror::Error;

/// Errors produced by loading, validation and the algorithms.
#[derive(Debug, Error)]
pub enum Error {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid motif: {0}")]
    InvalidMotif(String),

    #[error("unknown vertex id {0}")]
    UnknownVertex(u32),

    #[error("vertex {0} was already removed")]
    AlreadyRemoved(u32),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("input too large for brute force: {0}")]
    TooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
