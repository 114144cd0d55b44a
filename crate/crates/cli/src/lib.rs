//! Batch runner for the speclab experiments: strict JSON configuration,
//! deterministic CSV/JSON reports, atomic file output.

pub mod config;
pub mod experiments;
pub mod report;

use std::fmt;

/// Failure classes, each with its own process exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<speclab::Error> for CliError {
    fn from(e: speclab::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CLAIM_FAILURE: i32 = 1;
