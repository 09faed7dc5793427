use std::path::PathBuf;

use thiserror::Error;

/// Failures of the command-line layer.
#[derive(Debug, Error)]
pub enum CliError {
    /// A configuration value is missing, malformed or inconsistent. `path` is
    /// the dotted location inside the JSON document.
    #[error("{path}: {message}")]
    Config { path: String, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Table { path: PathBuf, message: String },
    #[error(transparent)]
    Core(#[from] casimir_core::Error),
    #[error("writing output: {0}")]
    Output(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config { path: path.into(), message: message.into() }
    }
}

pub type CliResult<T> = Result<T, CliError>;
