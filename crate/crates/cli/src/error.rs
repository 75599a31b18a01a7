use shrinker_core::{Error, Stage};

/// Failures mapped to process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Malformed invocation (64).
    Usage(String),
    /// Well-formed but unusable parameters (65).
    Parameter(String),
    /// A construction pipeline failed in a named stage (3).
    Construction { stage: Stage, message: String },
    /// Reading or writing files (74).
    Io(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Parameter(_) => 65,
            CliError::Construction { .. } => 3,
            CliError::Io(_) => 74,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Parameter(m) => write!(f, "parameter error: {m}"),
            CliError::Construction { stage, message } => write!(f, "construction failed [{stage}]: {message}"),
            CliError::Io(e) => write!(f, "i/o error: {e:#}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Stage { stage, source } => CliError::Construction {
                stage,
                message: source.to_string(),
            },
            Error::TrivialSolution => CliError::Parameter("trivial solution".into()),
            other => CliError::Parameter(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}
