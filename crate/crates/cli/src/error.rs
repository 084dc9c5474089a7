use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] alphagan::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("config line {line}: `{field}`: {message}")]
    Config {
        line: usize,
        field: String,
        message: String,
    },
    #[error("config is missing required field `{0}`")]
    MissingField(&'static str),
    #[error("unknown check {0:?} (expected one of equilibrium, variational, bounds, limits, metric, lin)")]
    UnknownCheck(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// Process exit code: 2 for bad input, 3 for a diverged training run, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Core(alphagan::Error::Diverged { .. }) => 3,
            Self::Config { .. } | Self::MissingField(_) | Self::UnknownCheck(_) | Self::Usage(_) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
