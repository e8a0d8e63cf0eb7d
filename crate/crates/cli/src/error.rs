use std::path::Path;

use thiserror::Error;

/// Failure classes, each with its own process exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }
}

impl From<mbring::Error> for CliError {
    fn from(err: mbring::Error) -> Self {
        use mbring::Error as E;
        match err {
            E::Divergence { .. } | E::EmptyWindow(_) | E::OutOfRange(_) => CliError::Numerical(err.to_string()),
            E::Domain(_) | E::InvalidParameter(_) | E::Grid(_) | E::GridMismatch(_) => {
                CliError::Config(err.to_string())
            }
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
