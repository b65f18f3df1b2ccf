use std::path::PathBuf;

/// Exit status for runs where every check passed.
pub const EXIT_PASS: i32 = 0;
/// Exit status when a check failed or a computation could not complete.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Exit status for invalid flags or unusable input.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
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
    #[error("invalid JSON input: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] opspace_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use opspace_core::Error as E;
        match self {
            CliError::Usage(_) | CliError::Read { .. } | CliError::Json(_) => EXIT_USAGE,
            CliError::Core(E::InvalidArgument(_) | E::Tolerance(_) | E::DataLength { .. }) => EXIT_USAGE,
            CliError::Core(E::NonFinite { .. } | E::EmptyShape { .. }) => EXIT_USAGE,
            _ => EXIT_CHECK_FAILED,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
