use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("unsupported input `{id}`: {source}")]
    Unsupported {
        id: String,
        #[source]
        source: gauge_core::Error,
    },
    #[error("{id}: {source}")]
    Core {
        id: String,
        #[source]
        source: gauge_core::Error,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => EXIT_CONFIG,
            CliError::Unsupported { .. } => EXIT_UNSUPPORTED,
            CliError::Core { .. } => EXIT_CONFIG,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// Sorts a core error raised while processing `id` into a config error
    /// or an unsupported-input error.
    pub fn from_core(id: &str, source: gauge_core::Error) -> Self {
        if is_unsupported(&source) {
            CliError::Unsupported { id: id.to_string(), source }
        } else {
            CliError::Core { id: id.to_string(), source }
        }
    }
}

pub fn is_unsupported(e: &gauge_core::Error) -> bool {
    use gauge_core::Error as E;
    matches!(
        e,
        E::UnsupportedClass(_) | E::UnsupportedForm(_) | E::Inexact(_) | E::NoConvergence { .. } | E::MonotonicityViolated { .. }
    )
}

pub type CliResult<T> = std::result::Result<T, CliError>;
