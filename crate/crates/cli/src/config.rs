//! Resolved pipeline settings and file layout.

use std::path::{Path, PathBuf};

use ebikecast_core::impact::SimSpec;
use ebikecast_core::ArimaOrder;

use crate::args::{ForestOpts, ParamOverride, RunArgs, SimOpts};
use crate::error::{CliError, Result};

pub const EUROPEAN_SALES: &str = "EuropeanEbikeSales.csv";
pub const KNOWN_US_SALES: &str = "KnownUSEbikeSales.csv";
pub const TRENDS: &str = "ElectricBikesGoogleSearchTrends.csv";
pub const FACTORS: &str = "factors_annual.csv";

pub const ANNUAL_SALES_OUT: &str = "AnnualUSEbikeSales.csv";
pub const MONTHLY_SALES_OUT: &str = "MonthlyUSEbikeSales.csv";
pub const FORECAST_OUT: &str = "forecast.csv";
pub const FORECAST_ANNUAL_OUT: &str = "forecast_annual.csv";
pub const IMPORTANCE_OUT: &str = "importance.csv";
pub const SIM_SUMMARY_OUT: &str = "simulation_summary.csv";
pub const SIM_TRIALS_OUT: &str = "simulation_trials.csv";
pub const SIM_PARAMS_OUT: &str = "simulation_parameters.csv";
pub const DIAGNOSTICS_OUT: &str = "diagnostics.txt";
pub const MODEL_OUT: &str = "model.txt";

pub const ANNUAL_SALES_SVG: &str = "annual_sales.svg";
pub const ROLLING_SVG: &str = "rolling_stats.svg";
pub const FORECAST_SVG: &str = "forecast.svg";
pub const CO2_TRIALS_SVG: &str = "co2_trials.svg";
pub const KCAL_TRIALS_SVG: &str = "kcal_trials.svg";
pub const CO2_SAMPLE_SVG: &str = "co2_sample_trial.svg";
pub const KCAL_SAMPLE_SVG: &str = "kcal_sample_trial.svg";

/// Input locations inside a raw data directory.
#[derive(Debug, Clone, PartialEq)]
pub struct InputPaths {
    pub european: PathBuf,
    pub known_us: PathBuf,
    pub trends: PathBuf,
    pub factors: PathBuf,
}

impl InputPaths {
    pub fn in_dir(dir: &Path) -> Self {
        Self {
            european: dir.join(EUROPEAN_SALES),
            known_us: dir.join(KNOWN_US_SALES),
            trends: dir.join(TRENDS),
            factors: dir.join(FACTORS),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForestConfig {
    pub trees: usize,
    pub test_fraction: f64,
    pub split_seed: u64,
    pub seed: u64,
}

impl ForestConfig {
    pub fn new(opts: &ForestOpts, seed: u64) -> Self {
        Self {
            trees: opts.trees,
            test_fraction: opts.test_fraction,
            split_seed: opts.split_seed,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub inputs: InputPaths,
    pub output_dir: PathBuf,
    pub ref_year: i32,
    pub order: ArimaOrder,
    pub horizon: usize,
    pub train_fraction: f64,
    pub confidence: f64,
    pub lags: usize,
    pub seed: u64,
    pub forest: ForestConfig,
    pub sim: SimSpec,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let seed = 42;
        Self {
            inputs: InputPaths::in_dir(Path::new("data")),
            output_dir: PathBuf::from("out"),
            ref_year: ebikecast_core::prep::DEFAULT_REF_YEAR,
            order: ArimaOrder::new(12, 1, 1).expect("valid order"),
            horizon: 137,
            train_fraction: 0.8,
            confidence: 0.95,
            lags: 24,
            seed,
            forest: ForestConfig {
                trees: ebikecast_core::forest::DEFAULT_TREES,
                test_fraction: ebikecast_core::forest::DEFAULT_TEST_FRACTION,
                split_seed: ebikecast_core::forest::DEFAULT_SPLIT_SEED,
                seed,
            },
            sim: SimSpec::default(),
        }
    }
}

impl PipelineConfig {
    pub fn from_args(args: &RunArgs) -> Result<Self> {
        let seed = args.seed.seed;
        let cfg = Self {
            inputs: InputPaths::in_dir(&args.input),
            output_dir: args.output.clone(),
            ref_year: args.ref_year,
            order: args.model.order,
            horizon: args.forecast.horizon,
            train_fraction: args.model.train_fraction,
            confidence: args.forecast.confidence,
            lags: args.model.lags,
            seed,
            forest: ForestConfig::new(&args.forest, seed),
            sim: sim_spec(&args.sim, seed)?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Range checks that would otherwise surface late, after earlier stages
    /// have already written files.
    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(CliError::Config("horizon must be at least 1".into()));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction <= 1.0) {
            return Err(CliError::Config(format!(
                "train fraction must lie in (0, 1], got {}",
                self.train_fraction
            )));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(CliError::Config(format!(
                "confidence must lie in (0, 1), got {}",
                self.confidence
            )));
        }
        if self.forest.trees == 0 {
            return Err(CliError::Config("forest needs at least one tree".into()));
        }
        if !(self.forest.test_fraction > 0.0 && self.forest.test_fraction < 1.0) {
            return Err(CliError::Config(format!(
                "test fraction must lie in (0, 1), got {}",
                self.forest.test_fraction
            )));
        }
        self.sim.validate().map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn output(&self, name: &str) -> PathBuf {
        self.output_dir.join(name)
    }
}

/// Default simulation inputs with command-line overrides applied.
pub fn sim_spec(opts: &SimOpts, seed: u64) -> Result<SimSpec> {
    let mut spec = SimSpec {
        trials: opts.trials,
        fleet_stat: opts.fleet_stat,
        seed,
        ..SimSpec::default()
    };
    for ParamOverride { name, mean, std } in &opts.params {
        let param = spec.param_mut(name).ok_or_else(|| {
            CliError::Config(format!(
                "unknown simulation parameter `{name}`; expected one of {}",
                SimSpec::PARAM_NAMES.join(", ")
            ))
        })?;
        param.mean = *mean;
        param.std = *std;
    }
    spec.validate().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::{Cli, Command};
    use clap::Parser;

    fn run_args(extra: &[&str]) -> RunArgs {
        let argv = ["ebikecast", "run"].into_iter().chain(extra.iter().copied());
        match Cli::try_parse_from(argv).unwrap().command {
            Command::Run(r) => r,
            _ => unreachable!(),
        }
    }

    #[test]
    fn defaults_are_valid() {
        PipelineConfig::default().validate().unwrap();
        let cfg = PipelineConfig::from_args(&run_args(&["--seed", "42"])).unwrap();
        assert_eq!(cfg, PipelineConfig::default());
    }

    #[test]
    fn overrides_reach_the_spec() {
        let cfg = PipelineConfig::from_args(&run_args(&["--param", "cals_per_mile=18.58,0", "--trials", "7"])).unwrap();
        assert_eq!(cfg.sim.cals_per_mile.mean, 18.58);
        assert_eq!(cfg.sim.cals_per_mile.std, 0.0);
        assert_eq!(cfg.sim.trials, 7);
    }

    #[test]
    fn bad_values_are_config_errors() {
        for extra in [
            &["--param", "wheels=1,0"][..],
            &["--param", "car_emissions=1,-1"],
            &["--train-fraction", "0"],
            &["--confidence", "1"],
            &["--horizon", "0"],
            &["--trees", "0"],
            &["--trials", "0"],
        ] {
            let err = PipelineConfig::from_args(&run_args(extra)).unwrap_err();
            assert_eq!(err.exit_code(), 4, "{extra:?}: {err}");
        }
    }
}
