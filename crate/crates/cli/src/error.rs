use thiserror::Error;

/// Failure of a command, split by the exit status it maps to.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    /// Bad configuration, arguments or domain (exit status 2).
    #[error("{0}")]
    Config(String),
    /// Numerical or convergence failure (exit status 3).
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<qcbound::Error> for CliError {
    fn from(e: qcbound::Error) -> Self {
        if e.is_numeric() || matches!(e, qcbound::Error::Mesh(_)) {
            CliError::Numeric(e.to_string())
        } else {
            CliError::Config(e.to_string())
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
