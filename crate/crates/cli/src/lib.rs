//! Batch driver for the `entlab` command line tool.
//!
//! Every command reads and writes JSON, embeds its full configuration and the
//! library version in the report, and maps outcomes onto three exit codes:
//! 0 for success, 1 for usage or input errors, 2 for a numerical violation.

pub mod commands;
pub mod config;
pub mod io;

use std::path::PathBuf;

use thiserror::Error;

pub use commands::run;
pub use config::{Cli, Command, Family, RunConfig, Unit};

/// Exit code for usage, parse and input errors.
pub const EXIT_USAGE: i32 = 1;
/// Exit code for an inequality or bound-ordering violation.
pub const EXIT_VIOLATION: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error(transparent)]
    Core(#[from] entlab_core::Error),

    /// Reports were written but contain a violation.
    #[error("violation: {0}")]
    Violation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Violation(_) => EXIT_VIOLATION,
            CliError::Core(entlab_core::Error::SandwichViolation(_))
            | CliError::Core(entlab_core::Error::NumericalFailure(_)) => EXIT_VIOLATION,
            _ => EXIT_USAGE,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
