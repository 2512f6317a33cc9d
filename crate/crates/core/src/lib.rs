//! Statistical toolkit for reconstructing and forecasting U.S. e-bike sales.
//!
//! The crate is organised as a linear pipeline:
//!
//! - [`ingest`]: strict CSV readers and writers for every file schema.
//! - [`prep`]: cross-region annual reconstruction and trend-weighted monthly disaggregation.
//! - [`series`]: log/difference transforms, rolling statistics and autocorrelation.
//! - [`diagnostics`]: augmented Dickey-Fuller, Ljung-Box and kurtosis.
//! - [`arima`]: conditional-sum-of-squares ARIMA estimation and forecasting.
//! - [`forest`]: random-forest regression with impurity-based importances.
//! - [`impact`]: Monte Carlo simulation of CO2 savings and calories burned.

pub mod arima;
pub mod diagnostics;
pub mod forest;
pub mod impact;
pub mod ingest;
mod linalg;
mod optim;
pub mod prep;
pub mod rng;
pub mod series;

mod error;

pub use arima::{ArimaModel, ArimaOrder, Forecast};
pub use diagnostics::{AdfResult, LjungBoxResult};
pub use error::Error;
pub use forest::{FactorTable, ForestModel};
pub use impact::{SimResult, SimSpec};
pub use ingest::{AnnualSeries, MonthKey, MonthlySeries, TrendTable};

pub type Result<T, E = Error> = std::result::Result<T, E>;
