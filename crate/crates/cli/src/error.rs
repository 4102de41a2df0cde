use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    /// Process exit code: 1 for usage and i/o problems, 2 for numerical ones.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl From<mintime_core::Error> for CliError {
    fn from(e: mintime_core::Error) -> Self {
        match e {
            mintime_core::Error::Parameter { .. } | mintime_core::Error::Resolution { .. } => {
                CliError::Usage(e.to_string())
            }
            mintime_core::Error::FockTruncation { .. } => CliError::Usage(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
