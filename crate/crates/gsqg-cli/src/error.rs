use std::path::PathBuf;

use gsqg_core::GsqgError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid value for `{field}`: {reason}")]
    Config { field: &'static str, reason: String },
    #[error("could not parse config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{experiment}: {source}")]
    Experiment {
        experiment: &'static str,
        #[source]
        source: GsqgError,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("snapshot {path}: {reason}")]
    CorruptSnapshot { path: PathBuf, reason: String },
    #[error("snapshot {path}: unsupported format version `{found}`")]
    SnapshotVersion { path: PathBuf, found: String },
    #[error("snapshot {path}: header announces {expected} samples, found {found}")]
    SnapshotLength {
        path: PathBuf,
        expected: usize,
        found: usize,
    },
    #[error("GSQG_THREADS must be a positive integer, got `{0}`")]
    Threads(String),
}

impl CliError {
    pub fn config(field: &'static str, reason: impl Into<String>) -> Self {
        Self::Config {
            field,
            reason: reason.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// Exit code: 2 for usage and configuration problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config { .. } | Self::Parse(_) | Self::Threads(_) => 2,
            _ => 1,
        }
    }
}

/// Attaches the experiment name to core errors.
pub(crate) trait Context<T> {
    fn during(self, experiment: &'static str) -> Result<T, CliError>;
}

impl<T> Context<T> for Result<T, GsqgError> {
    fn during(self, experiment: &'static str) -> Result<T, CliError> {
        self.map_err(|source| CliError::Experiment { experiment, source })
    }
}
