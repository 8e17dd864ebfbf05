use std::path::Path;

use rsl_core::io::IoError;
use rsl_core::rsl::LearnError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Input { path: String, source: IoError },
    #[error("{0}")]
    Mismatch(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("learning failed: {0}")]
    Learn(#[from] LearnError),
}

impl CliError {
    pub fn input(path: &Path, source: IoError) -> Self {
        CliError::Input {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// 2 flags, 3 malformed input, 4 unknown vertex, 5 I/O, 6 learning.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Input { source, .. } => match source {
                IoError::UnknownVertex { .. } => 4,
                IoError::Io(_) => 5,
                IoError::Csv(e) if e.is_io_error() => 5,
                _ => 3,
            },
            CliError::Mismatch(_) => 3,
            CliError::Io { .. } => 5,
            CliError::Learn(_) => 6,
        }
    }
}
