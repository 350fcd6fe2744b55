use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("width mismatch: {0}")]
    Width(String),
    #[error("orientation: {0}")]
    Orientation(String),
    #[error("resource cap exceeded: {0}")]
    Resource(String),
    #[error("arithmetic: {0}")]
    Arithmetic(String),
    #[error("not implemented: {0}")]
    Unimplemented(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
