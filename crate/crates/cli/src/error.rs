use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] cover_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid job file {path}: {source}")]
    JobFile {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

/// A verification reported `fail`; not an error in the computation itself.
pub const EXIT_VERIFICATION_FAILED: u8 = 4;

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use cover_core::Error as E;
        match self {
            CliError::Core(E::Hypothesis(_) | E::Pole(_)) => 2,
            CliError::Core(E::Resource(_)) => 3,
            _ => 1,
        }
    }
}
