//! Experiment runner for `rcslab`: configuration, result records, the
//! experiment kinds and the cross-module verification suite.

use std::path::Path;

use thiserror::Error;

pub mod config;
pub mod record;
pub mod runner;
pub mod verify;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {msg}")]
    ConfigLine { line: usize, msg: String },
    #[error("config: {0}")]
    Config(String),
    #[error("resource cap: {0}")]
    Resource(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] rcslab::Error),
    #[error("check failed: {0}")]
    CheckFailed(String),
}

impl CliError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// 1 for a failed check, 2 for everything the user has to fix.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::CheckFailed(_) => 1,
            _ => 2,
        }
    }
}
