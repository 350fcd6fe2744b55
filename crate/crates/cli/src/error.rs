use khtail_core::Error;

/// Exit codes: 1 verification failure, 2 resource cap, 3 input error.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Resource(_)) => 2,
            CliError::Core(Error::Arithmetic(_)) => 1,
            CliError::Core(_) | CliError::Io(_) | CliError::Input(_) => 3,
        }
    }
}
