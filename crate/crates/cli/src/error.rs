use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config values, or instance parameters (exit code 2).
    #[error("{0}")]
    Invalid(String),
    /// Anything else (exit code 1).
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl From<shuffle_blanket_core::Error> for CliError {
    fn from(err: shuffle_blanket_core::Error) -> Self {
        CliError::Invalid(err.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Internal(err.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
