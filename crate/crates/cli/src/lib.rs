//! Command-line pipeline over `ebikecast-core`.
//!
//! Each subcommand is a plain function in [`commands`] that writes its table
//! to a caller-supplied writer, which keeps the binary thin and the stages
//! testable in-process.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod plot;

use std::io::Write;

use args::{Cli, Command};
use config::{sim_spec, ForestConfig, PipelineConfig};
pub use error::{CliError, Result};

/// Executes a parsed command line.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Prep(a) => {
            commands::cmd_prep(&config::InputPaths::in_dir(&a.input), &a.output, a.ref_year, out)?;
        }
        Command::Diagnose(a) => {
            let monthly = commands::read_monthly(&a.input)?;
            commands::cmd_diagnose(&monthly, a.max_lag, a.lags, a.output.as_deref(), out)?;
        }
        Command::Fit(a) => {
            let monthly = commands::read_monthly(&a.input)?;
            commands::cmd_fit(
                &monthly,
                a.model.order,
                a.model.train_fraction,
                a.model.lags,
                a.seed.seed,
                out,
            )?;
        }
        Command::Forecast(a) => {
            let monthly = commands::read_monthly(&a.input)?;
            commands::cmd_forecast(
                &monthly,
                a.model.order,
                a.forecast.horizon,
                a.model.train_fraction,
                a.forecast.confidence,
                a.model.lags,
                a.seed.seed,
                &a.output,
                out,
            )?;
        }
        Command::Importance(a) => {
            let table = ebikecast_core::ingest::read_factors(&a.input).map_err(error::core)?;
            let cfg = ForestConfig::new(&a.forest, a.seed.seed);
            commands::cmd_importance(&table, &cfg, a.output.as_deref(), out)?;
        }
        Command::Simulate(a) => {
            let monthly = commands::read_monthly(&a.input)?;
            let spec = sim_spec(&a.sim, a.seed.seed)?;
            commands::cmd_simulate(&monthly, &spec, &a.output, out)?;
        }
        Command::Run(a) => {
            let cfg = PipelineConfig::from_args(&a)?;
            commands::cmd_run(&cfg, out)?;
        }
    }
    Ok(())
}
