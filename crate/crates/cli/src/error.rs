use std::path::PathBuf;

use ebikecast_core::Error as CoreError;
use thiserror::Error;

use crate::plot::PlotError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Plot(#[from] PlotError),
}

impl CliError {
    /// Process exit status. Each failing stage has its own code; clap's usage
    /// errors keep their conventional 2.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 4,
            CliError::Io { .. } => 3,
            CliError::Core(e) => match e {
                CoreError::Ingest(_) => 10,
                CoreError::Prep(_) => 11,
                CoreError::Series(_) => 12,
                CoreError::Diagnostics(_) => 13,
                CoreError::Arima(_) => 14,
                CoreError::Forest(_) => 15,
                CoreError::Impact(_) => 16,
            },
            CliError::Plot(_) => 17,
        }
    }
}

/// Lifts a module error into [`CliError`] through the core error type.
pub(crate) fn core<E: Into<CoreError>>(e: E) -> CliError {
    CliError::Core(e.into())
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
