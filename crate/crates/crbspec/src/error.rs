use thiserror::Error;

/// Failure of a command, mapped onto the process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad configuration or input data (exit 1).
    #[error("{0}")]
    Input(String),
    /// Unreadable or unwritable file (exit 2).
    #[error("{0}")]
    Io(String),
    /// A computed check did not pass (exit 3).
    #[error("{0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Io(_) => 2,
            CliError::Validation(_) => 3,
        }
    }
}

impl From<crbspec_core::Error> for CliError {
    fn from(e: crbspec_core::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
