use std::path::PathBuf;

use thiserror::Error;

/// A config document that could not be turned into an [`ExperimentConfig`].
///
/// [`ExperimentConfig`]: crate::ExperimentConfig
#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{}{field}: {reason}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Domain {
        field: String,
        reason: String,
        line: Option<usize>,
    },
}

impl ConfigError {
    pub fn field(&self) -> Option<&str> {
        match self {
            ConfigError::Domain { field, .. } => Some(field),
            ConfigError::Syntax { .. } => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Refused(#[from] cvqkd_core::Error),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 0 success, 1 validation or physics refusal, 2 config error, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Refused(_) | CliError::Validation(_) => 1,
            CliError::Config(_) | CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}
