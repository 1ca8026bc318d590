use thiserror::Error;

/// Failures of a CLI run, each mapped to a fixed exit status.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Capacity(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<toroidal::Error> for CliError {
    fn from(e: toroidal::Error) -> Self {
        use toroidal::Error as E;
        match e {
            E::Capacity(m) => CliError::Capacity(m),
            E::ChartNotInFan(_) | E::NotAnIsomorphism(_) => CliError::Verification(e.to_string()),
            _ => CliError::Parse(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
