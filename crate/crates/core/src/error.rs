use thiserror::Error;

use crate::{arima, diagnostics, forest, impact, ingest, prep, series};

/// Umbrella error over every module of the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Ingest(#[from] ingest::IngestError),
    #[error(transparent)]
    Prep(#[from] prep::PrepError),
    #[error(transparent)]
    Series(#[from] series::SeriesError),
    #[error(transparent)]
    Diagnostics(#[from] diagnostics::DiagnosticsError),
    #[error(transparent)]
    Arima(#[from] arima::ArimaError),
    #[error(transparent)]
    Forest(#[from] forest::ForestError),
    #[error(transparent)]
    Impact(#[from] impact::ImpactError),
}
