//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use ebikecast_core::impact::FleetStat;
use ebikecast_core::ArimaOrder;

#[derive(Debug, Parser)]
#[command(
    name = "ebikecast",
    version,
    about = "E-bike sales reconstruction, forecasting and impact simulation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rebuild annual U.S. sales and split them into months.
    Prep(PrepArgs),
    /// Stationarity and lack-of-fit diagnostics for a monthly series.
    Diagnose(DiagnoseArgs),
    /// Fit an ARIMA model and print its coefficients.
    Fit(FitArgs),
    /// Forecast monthly sales and their calendar-year totals.
    Forecast(ForecastArgs),
    /// Rank annual sales drivers with a random forest.
    Importance(ImportanceArgs),
    /// Monte Carlo CO2 savings and calories burned by the active fleet.
    Simulate(SimulateArgs),
    /// Every stage end to end, from the raw data directory.
    Run(RunArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SeedArgs {
    /// Master seed for every random stream.
    #[arg(long, env = "EBIKECAST_SEED", default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// ARIMA order as p,d,q.
    #[arg(long, default_value = "12,1,1", value_parser = parse_order)]
    pub order: ArimaOrder,
    /// Chronological share of the series used for fitting.
    #[arg(long, default_value_t = 0.8)]
    pub train_fraction: f64,
    /// Ljung-Box lag count for residual checks.
    #[arg(long, default_value_t = 24)]
    pub lags: usize,
}

#[derive(Debug, Clone, Args)]
pub struct ForecastOpts {
    /// Months to forecast past the training window.
    #[arg(long, default_value_t = 137)]
    pub horizon: usize,
    /// Two-sided interval coverage.
    #[arg(long, default_value_t = 0.95)]
    pub confidence: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ForestOpts {
    #[arg(long, default_value_t = 1000)]
    pub trees: usize,
    #[arg(long, default_value_t = 0.3)]
    pub test_fraction: f64,
    /// Seed of the train/test shuffle, separate from the forest seed.
    #[arg(long, default_value_t = 1)]
    pub split_seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct SimOpts {
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Active fleet as the trailing `sum` or `mean` of sales over the lifespan.
    #[arg(long, default_value = "sum")]
    pub fleet_stat: FleetStat,
    /// Override a simulation input, e.g. `car_emissions=431.2,107.803`.
    /// Names: lifespan_months, miles_per_month, car_emissions, bike_emissions, cals_per_mile.
    #[arg(long = "param", value_name = "NAME=MEAN,STD", value_parser = parse_param)]
    pub params: Vec<ParamOverride>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamOverride {
    pub name: String,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, Args)]
pub struct PrepArgs {
    /// Directory holding the raw input CSVs.
    #[arg(long, default_value = "data")]
    pub input: PathBuf,
    #[arg(long, default_value = "out")]
    pub output: PathBuf,
    /// Year whose European and U.S. figures anchor the reconstruction.
    #[arg(long, default_value_t = 2019)]
    pub ref_year: i32,
}

#[derive(Debug, Clone, Args)]
pub struct DiagnoseArgs {
    /// Monthly sales CSV (`Month,Sales`).
    #[arg(long)]
    pub input: PathBuf,
    /// Directory for the rolling-statistics figure.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// ADF lag cap; defaults to floor(12 (n/100)^(1/4)).
    #[arg(long)]
    pub max_lag: Option<usize>,
    /// Ljung-Box lag count.
    #[arg(long, default_value_t = 24)]
    pub lags: usize,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub seed: SeedArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ForecastArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "out")]
    pub output: PathBuf,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub forecast: ForecastOpts,
    #[command(flatten)]
    pub seed: SeedArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ImportanceArgs {
    /// Annual factor table CSV.
    #[arg(long)]
    pub input: PathBuf,
    /// Directory for `importance.csv`.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub forest: ForestOpts,
    #[command(flatten)]
    pub seed: SeedArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Monthly sales CSV in thousands of units.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "out")]
    pub output: PathBuf,
    #[command(flatten)]
    pub sim: SimOpts,
    #[command(flatten)]
    pub seed: SeedArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Directory holding the raw input CSVs.
    #[arg(long, default_value = "data")]
    pub input: PathBuf,
    #[arg(long, default_value = "out")]
    pub output: PathBuf,
    #[arg(long, default_value_t = 2019)]
    pub ref_year: i32,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub forecast: ForecastOpts,
    #[command(flatten)]
    pub forest: ForestOpts,
    #[command(flatten)]
    pub sim: SimOpts,
    #[command(flatten)]
    pub seed: SeedArgs,
}

fn parse_order(s: &str) -> Result<ArimaOrder, String> {
    s.parse().map_err(|e: ebikecast_core::arima::ArimaError| e.to_string())
}

pub fn parse_param(s: &str) -> Result<ParamOverride, String> {
    let (name, rest) = s
        .split_once('=')
        .ok_or_else(|| format!("`{s}`: expected NAME=MEAN,STD"))?;
    let (mean, std) = rest
        .split_once(',')
        .ok_or_else(|| format!("`{s}`: expected NAME=MEAN,STD"))?;
    let num = |v: &str| {
        v.trim()
            .parse::<f64>()
            .map_err(|_| format!("`{s}`: `{v}` is not a number"))
    };
    Ok(ParamOverride {
        name: name.trim().to_string(),
        mean: num(mean)?,
        std: num(std)?,
    })
}
