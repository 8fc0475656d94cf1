use std::io;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Core(#[from] scalsup_core::Error),
}

impl CliError {
    pub fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Parse {
            location: location.into(),
            message: message.into(),
        }
    }

    pub fn json(file: &str, e: &serde_json::Error) -> Self {
        CliError::parse(format!("{file}:{}:{}", e.line(), e.column()), e.to_string())
    }

    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// Process exit code: 2 for budget overruns, 1 for failed conditions,
    /// 3 for everything the user has to fix in the input.
    pub fn exit_code(&self) -> i32 {
        use scalsup_core::Error as E;
        match self {
            CliError::Core(E::ScaleLimit { .. }) => 2,
            CliError::Core(
                E::ConditionFailed { .. }
                | E::SpecNotControllable(_)
                | E::EmptySupervisor
                | E::LocalizationFailed { .. }
                | E::SimilarityViolation { .. },
            ) => 1,
            _ => 3,
        }
    }
}
