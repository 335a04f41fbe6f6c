//! Front end for dunklkit: configuration, verification suites, experiments
//! and report emission.

pub mod config;
pub mod experiments;
pub mod report;
pub mod suites;

use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const CHECK_FAILURE: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const IO: i32 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] dunklkit::Error),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("I/O error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> CliError {
        CliError::Io { path: path.as_ref().display().to_string(), source }
    }

    pub fn exit_code(&self) -> i32 {
        use dunklkit::Error as E;
        match self {
            CliError::Core(E::Domain(_) | E::Validation(_) | E::Parse { .. } | E::Dimension { .. }) => exit::USAGE,
            CliError::Core(_) => exit::CHECK_FAILURE,
            CliError::Usage(_) => exit::USAGE,
            CliError::Io { .. } => exit::IO,
        }
    }
}
