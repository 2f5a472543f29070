use std::path::PathBuf;

use thiserror::Error;

/// Failures of a CLI command, each tied to a stable exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] dqds_core::Error),
    #[error("golden mismatch:\n{0}")]
    Golden(String),
    #[error("no unitary feedback can stabilize the target subspace")]
    Infeasible,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) | CliError::Golden(_) => 1,
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Usage(_) => 2,
            CliError::Infeasible => 3,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        CliError::Parse { path: path.into(), message: message.to_string() }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
