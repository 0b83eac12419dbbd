use std::io;
use std::path::{Path, PathBuf};

use parloc_core::metrics::MetricError;
use parloc_core::sim::{SimError, SpecError};
use parloc_core::trace::FormatError;
use thiserror::Error;

/// Exit statuses.
pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid kernel parameters: {0}")]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: FormatError },
    #[error("{}: {count} trace violation(s)\n{}", path.display(), details.join("\n"))]
    Invalid { path: PathBuf, count: usize, details: Vec<String> },
    #[error("{}: {source}", path.display())]
    Metric { path: PathBuf, source: MetricError },
    #[error("verification failed: {failed} of {total} checks")]
    VerifyFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Spec(_) | CliError::Sim(_) | CliError::Io { .. } => EXIT_USAGE,
            CliError::Parse { source: FormatError::Io(_), .. } => EXIT_USAGE,
            CliError::Parse { .. } | CliError::Invalid { .. } | CliError::Metric { .. } => EXIT_INVALID,
            CliError::VerifyFailed { .. } => EXIT_VERIFY,
        }
    }
}
