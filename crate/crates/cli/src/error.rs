use thiserror::Error;

/// Failure of a CLI run, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    NotFound(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Domain(_) => 2,
            CliError::NotFound(_) => 3,
            CliError::Io(_) => 74,
        }
    }
}

impl From<bazykin::Error> for CliError {
    fn from(e: bazykin::Error) -> Self {
        match e {
            bazykin::Error::NotFound(_) => CliError::NotFound(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
