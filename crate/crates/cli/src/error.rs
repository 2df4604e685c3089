use std::path::PathBuf;

use cliffmech_core::{DynamicsError, ParseError};

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const USAGE: u8 = 2;
    pub const PARSE: u8 = 3;
    pub const INTEGRATION: u8 = 4;
    pub const VERIFICATION: u8 = 5;
    pub const IO: u8 = 6;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("parse error in Hamiltonian: {0}")]
    Parse(#[from] ParseError),
    #[error("integration failed: {0}")]
    Integration(DynamicsError),
    #[error("{failed} of {total} hard checks failed")]
    Verification { failed: usize, total: usize },
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Parse(_) => exit::PARSE,
            CliError::Integration(_) => exit::INTEGRATION,
            CliError::Verification { .. } => exit::VERIFICATION,
            CliError::Io { .. } => exit::IO,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::Config(msg) => CliError::Usage(msg),
            DynamicsError::Structure(s) => CliError::Usage(s.to_string()),
            other => CliError::Integration(other),
        }
    }
}
