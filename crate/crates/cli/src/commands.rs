//! Subcommand implementations. Tables go to `out`; files go to the output
//! directory. Nothing here reads global state, so every command is a
//! deterministic function of its arguments.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use ebikecast_core::arima::{self, PipelineForecast};
use ebikecast_core::diagnostics::{self, AdfResult, LjungBoxResult};
use ebikecast_core::forest::{self, Evaluation};
use ebikecast_core::impact::{self, ImpactKind, FLEET_UNIT};
use ebikecast_core::ingest::{self, format_value, render_csv};
use ebikecast_core::series::{self, RollingStat};
use ebikecast_core::{
    prep, AnnualSeries, ArimaModel, ArimaOrder, FactorTable, ForestModel, MonthKey, MonthlySeries, SimResult, SimSpec,
};

use crate::config::*;
use crate::error::{core, CliError, Result};
use crate::plot::{emit_plot, Chart, PlotSeries};

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

/// Decimal year at the start of `key`'s month, for plotting.
fn year_frac(key: MonthKey) -> f64 {
    key.year() as f64 + (key.month() as f64 - 1.0) / 12.0
}

fn monthly_points(s: &MonthlySeries) -> Vec<(f64, f64)> {
    s.iter().map(|(k, v)| (year_frac(k), v)).collect()
}

pub fn read_monthly(path: &Path) -> Result<MonthlySeries> {
    ingest::read_monthly(path).map_err(core)
}

pub struct PrepOutput {
    pub annual: AnnualSeries,
    pub monthly: MonthlySeries,
}

/// Annual reconstruction plus monthly split. Writes both CSVs and a scatter
/// of the annual series.
pub fn cmd_prep(inputs: &InputPaths, output_dir: &Path, ref_year: i32, out: &mut dyn Write) -> Result<PrepOutput> {
    let european = ingest::read_annual(&inputs.european).map_err(core)?;
    let known_us = ingest::read_annual(&inputs.known_us).map_err(core)?;
    let trends = ingest::read_trends(&inputs.trends).map_err(core)?;
    let merge = prep::MergeInputs::new(european, &known_us, ref_year).map_err(core)?;
    let annual = prep::merge_series(&merge, &known_us).map_err(core)?;
    let monthly = prep::disaggregate(&annual, &trends).map_err(core)?;

    ensure_dir(output_dir)?;
    write_file(
        &output_dir.join(ANNUAL_SALES_OUT),
        &ingest::render_annual(&annual).map_err(core)?,
    )?;
    write_file(
        &output_dir.join(MONTHLY_SALES_OUT),
        &ingest::render_monthly(&monthly).map_err(core)?,
    )?;
    emit_plot(
        &[PlotSeries::markers(
            "annual sales",
            annual.iter().map(|(y, v)| (y as f64, v)).collect(),
        )],
        &Chart {
            title: "Reconstructed U.S. e-bike sales".into(),
            x_label: "Year".into(),
            y_label: "Sales (thousands of units)".into(),
            legend: false,
        },
        output_dir.join(ANNUAL_SALES_SVG),
    )?;

    let mut table = format!("{:<6} {:>14}\n", "Year", "Sales");
    for (y, v) in annual.iter() {
        let _ = writeln!(table, "{y:<6} {v:>14.3}");
    }
    emit(out, &table)?;
    Ok(PrepOutput { annual, monthly })
}

pub struct DiagnosticsReport {
    pub adf_level: AdfResult,
    pub adf_transformed: AdfResult,
    pub ljung_box: LjungBoxResult,
    pub kurtosis: f64,
    pub excess_kurtosis: f64,
    pub text: String,
}

fn adf_row(label: &str, r: &AdfResult) -> String {
    format!(
        "{label:<22} {:>12.4} {:>12.4e} {:>5} {:>5} {:>9.4} {:>9.4} {:>9.4}\n",
        r.statistic,
        r.p_value,
        r.lags_used,
        r.n_obs,
        r.critical_values.one_percent,
        r.critical_values.five_percent,
        r.critical_values.ten_percent
    )
}

/// ADF on the raw and log-differenced series, Ljung-Box and kurtosis on the
/// log-differenced series.
pub fn cmd_diagnose(
    monthly: &MonthlySeries,
    max_lag: Option<usize>,
    lags: usize,
    output_dir: Option<&Path>,
    out: &mut dyn Write,
) -> Result<DiagnosticsReport> {
    let logged = series::log_values(monthly.values()).map_err(core)?;
    let transformed = series::difference(&logged, 1).map_err(core)?.values;
    let adf_level = diagnostics::adf_test(monthly.values(), max_lag).map_err(core)?;
    let adf_transformed = diagnostics::adf_test(&transformed, max_lag).map_err(core)?;
    let ljung_box = diagnostics::ljung_box(&transformed, lags, 0).map_err(core)?;
    let kurtosis = diagnostics::kurtosis(&transformed).map_err(core)?;
    let excess_kurtosis = kurtosis - 3.0;

    let mut text = format!(
        "{:<22} {:>12} {:>12} {:>5} {:>5} {:>9} {:>9} {:>9}\n",
        "ADF (constant)", "statistic", "p-value", "lags", "nobs", "1%", "5%", "10%"
    );
    text += &adf_row("level", &adf_level);
    text += &adf_row("log-differenced", &adf_transformed);
    text += &format!(
        "\n{:<22} {:>12} {:>12} {:>5}\n{:<22} {:>12.4} {:>12.4e} {:>5}\n",
        "Ljung-Box",
        "Q",
        "p-value",
        "dof",
        format!("log-differenced m={lags}"),
        ljung_box.q,
        ljung_box.p_value,
        ljung_box.dof
    );
    text += &format!(
        "\n{:<22} {:>12} {:>12}\n{:<22} {:>12.4} {:>12.4}\n",
        "Kurtosis", "raw", "excess", "log-differenced", kurtosis, excess_kurtosis
    );
    emit(out, &text)?;

    if let Some(dir) = output_dir {
        ensure_dir(dir)?;
        write_file(&dir.join(DIAGNOSTICS_OUT), &text)?;
        let window = 3;
        let shift = |v: Vec<f64>| -> Vec<(f64, f64)> {
            monthly
                .keys()
                .skip(window - 1)
                .zip(v)
                .map(|(k, v)| (year_frac(k), v))
                .collect()
        };
        let mean = series::rolling(monthly.values(), window, RollingStat::Mean).map_err(core)?;
        let std = series::rolling(monthly.values(), window, RollingStat::Std).map_err(core)?;
        emit_plot(
            &[
                PlotSeries::line("sales", monthly_points(monthly)),
                PlotSeries::line("rolling mean (3)", shift(mean)),
                PlotSeries::line("rolling std (3)", shift(std)),
            ],
            &Chart {
                title: "Rolling mean and standard deviation".into(),
                x_label: "Year".into(),
                y_label: "Sales (thousands of units)".into(),
                legend: true,
            },
            dir.join(ROLLING_SVG),
        )?;
    }
    Ok(DiagnosticsReport {
        adf_level,
        adf_transformed,
        ljung_box,
        kurtosis,
        excess_kurtosis,
        text,
    })
}

/// Coefficient table and residual checks for a fitted model.
pub fn model_report(model: &ArimaModel, lags: usize) -> Result<String> {
    let mut text = format!(
        "ARIMA{} on log sales, {} observations, optimizer {}\n\n{:<12} {:>14}\n",
        model.order,
        model.n_obs,
        if model.converged {
            "converged"
        } else {
            "stopped at its evaluation budget"
        },
        "term",
        "estimate"
    );
    let _ = writeln!(text, "{:<12} {:>14.6}", "intercept", model.intercept);
    let _ = writeln!(text, "{:<12} {:>14.6}", "mean", model.mean);
    for (i, v) in model.phi.iter().enumerate() {
        let _ = writeln!(text, "{:<12} {v:>14.6}", format!("ar.L{}", i + 1));
    }
    for (j, v) in model.theta.iter().enumerate() {
        let _ = writeln!(text, "{:<12} {v:>14.6}", format!("ma.L{}", j + 1));
    }
    let _ = writeln!(text, "{:<12} {:>14.6e}", "sigma2", model.sigma2);
    let _ = writeln!(text, "{:<12} {:>14.4}", "css loglik", model.loglik_css);

    let m = lags.min(model.residuals.len().saturating_sub(1));
    let lb = diagnostics::ljung_box(&model.residuals, m, model.fitted_params()).map_err(core)?;
    let _ = writeln!(
        text,
        "\nLjung-Box on residuals: m={} dof={} Q={:.4} p-value={:.4}",
        lb.m, lb.dof, lb.q, lb.p_value
    );
    if let Ok(k) = diagnostics::kurtosis(&model.residuals) {
        let _ = writeln!(text, "Residual kurtosis: {k:.4} (excess {:.4})", k - 3.0);
    }
    Ok(text)
}

/// Fits on the log of the chronological training prefix.
pub fn cmd_fit(
    monthly: &MonthlySeries,
    order: ArimaOrder,
    train_fraction: f64,
    lags: usize,
    seed: u64,
    out: &mut dyn Write,
) -> Result<ArimaModel> {
    let train_len = arima::train_length(monthly.len(), train_fraction).map_err(core)?;
    let logged = series::log_values(monthly.values()).map_err(core)?;
    let model = arima::fit(&logged[..train_len], order, seed).map_err(core)?;
    emit(out, &model_report(&model, lags)?)?;
    Ok(model)
}

pub fn render_forecast(p: &PipelineForecast) -> String {
    let f = &p.forecast;
    render_csv(
        "Month,Mean,Lower,Upper",
        p.months().enumerate().map(|(h, k)| {
            format!(
                "{k},{},{},{}",
                format_value(f.mean[h]),
                format_value(f.lower[h]),
                format_value(f.upper[h])
            )
        }),
    )
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_forecast(
    monthly: &MonthlySeries,
    order: ArimaOrder,
    horizon: usize,
    train_fraction: f64,
    confidence: f64,
    lags: usize,
    seed: u64,
    output_dir: &Path,
    out: &mut dyn Write,
) -> Result<PipelineForecast> {
    let p = arima::forecast_pipeline(monthly, order, horizon, train_fraction, confidence, seed).map_err(core)?;
    ensure_dir(output_dir)?;
    let report = model_report(&p.model, lags)?;
    write_file(&output_dir.join(MODEL_OUT), &report)?;
    write_file(&output_dir.join(FORECAST_OUT), &render_forecast(&p))?;
    write_file(
        &output_dir.join(FORECAST_ANNUAL_OUT),
        &ingest::render_annual(&p.annual).map_err(core)?,
    )?;

    let x: Vec<f64> = p.months().map(year_frac).collect();
    let band = |v: &[f64]| x.iter().copied().zip(v.iter().copied()).collect::<Vec<_>>();
    let pct = (confidence * 100.0).round();
    emit_plot(
        &[
            PlotSeries::line("observed", monthly_points(monthly)).with_color("#555555"),
            PlotSeries::line(format!("lower {pct}%"), band(&p.forecast.lower)).with_color("#9ecae1"),
            PlotSeries::line(format!("upper {pct}%"), band(&p.forecast.upper)).with_color("#9ecae1"),
            PlotSeries::line("forecast mean", band(&p.forecast.mean)).with_color("#d62728"),
        ],
        &Chart {
            title: format!("ARIMA{} forecast, {horizon} months", order),
            x_label: "Year".into(),
            y_label: "Sales (thousands of units)".into(),
            legend: true,
        },
        output_dir.join(FORECAST_SVG),
    )?;

    let mut table = report;
    let _ = writeln!(table, "\n{:<6} {:>14} {:>8}", "Year", "Forecast", "Months");
    for (y, v) in p.annual.iter() {
        let note = if p.partial_years.contains(&y) { " partial" } else { "" };
        let months = p.months().filter(|k| k.year() == y).count();
        let _ = writeln!(table, "{y:<6} {v:>14.3} {months:>8}{note}");
    }
    emit(out, &table)?;
    Ok(p)
}

pub struct ImportanceOutput {
    pub model: ForestModel,
    pub evaluation: Evaluation,
    pub train_rows: usize,
    pub test_rows: usize,
}

/// Forest on the training split of the factor table; importances and
/// held-out errors.
pub fn cmd_importance(
    table: &FactorTable,
    cfg: &ForestConfig,
    output_dir: Option<&Path>,
    out: &mut dyn Write,
) -> Result<ImportanceOutput> {
    let (train, test) = forest::split_data(table, cfg.test_fraction, cfg.split_seed).map_err(core)?;
    let model = forest::fit_forest(&train, cfg.trees, cfg.seed).map_err(core)?;
    let evaluation = forest::evaluate(&model, &test).map_err(core)?;
    let ranking = model.ranking();

    let mut text = format!("{:<24} {:>12}\n", "Variable", "Coefficient");
    for (name, v) in &ranking {
        let _ = writeln!(text, "{name:<24} {v:>12.4}");
    }
    if !model.importances_defined {
        text.push_str("(target is constant: importances undefined)\n");
    }
    let _ = writeln!(
        text,
        "\ntrain rows {} test rows {}\nMAE {:.4}\nMAPE {:.4}%\nAccuracy {:.4}%",
        train.len(),
        test.len(),
        evaluation.mae,
        evaluation.mape,
        evaluation.accuracy
    );
    emit(out, &text)?;

    if let Some(dir) = output_dir {
        ensure_dir(dir)?;
        let csv = render_csv(
            "Variable,Importance",
            ranking.iter().map(|(n, v)| format!("{n},{}", format_value(*v))),
        );
        write_file(&dir.join(IMPORTANCE_OUT), &csv)?;
    }
    Ok(ImportanceOutput {
        model,
        evaluation,
        train_rows: train.len(),
        test_rows: test.len(),
    })
}

pub struct SimulationOutput {
    pub co2: SimResult,
    pub calories: SimResult,
}

fn spaghetti(result: &SimResult, title: &str, y_label: &str, path: PathBuf) -> Result<()> {
    let series: Vec<PlotSeries> = result
        .trials
        .iter()
        .enumerate()
        .map(|(i, t)| {
            PlotSeries::line(
                format!("trial {i}"),
                t.monthly.iter().map(|(k, v)| (year_frac(k), v * FLEET_UNIT)).collect(),
            )
            .with_color("#1f77b4")
        })
        .collect();
    emit_plot(
        &series,
        &Chart {
            title: title.into(),
            x_label: "Year".into(),
            y_label: y_label.into(),
            legend: false,
        },
        path,
    )?;
    Ok(())
}

fn sample_trial(result: &SimResult, title: &str, y_label: &str, path: PathBuf) -> Result<()> {
    let t = &result.trials[0];
    emit_plot(
        &[PlotSeries::line(
            "trial 0",
            t.monthly.iter().map(|(k, v)| (year_frac(k), v * FLEET_UNIT)).collect(),
        )],
        &Chart {
            title: title.into(),
            x_label: "Year".into(),
            y_label: y_label.into(),
            legend: false,
        },
        path,
    )?;
    Ok(())
}

/// Summary rows in plain kilograms and kilocalories.
pub fn render_summary(co2: &SimResult, calories: &SimResult) -> Result<String> {
    let years = co2.common_years();
    let mut rows = Vec::with_capacity(years.len());
    for y in years {
        let c = impact::summarize(co2, y).map_err(core)?;
        let k = impact::summarize(calories, y).map_err(core)?;
        rows.push(format!(
            "{y},{},{},{},{}",
            format_value(c.mean * FLEET_UNIT),
            format_value(c.std * FLEET_UNIT),
            format_value(k.mean * FLEET_UNIT),
            format_value(k.std * FLEET_UNIT)
        ));
    }
    Ok(render_csv("Year,CO2kg_mean,CO2kg_std,kCal_mean,kCal_std", rows))
}

pub fn render_trials(co2: &SimResult, calories: &SimResult) -> String {
    let rows = co2
        .trials
        .iter()
        .zip(&calories.trials)
        .enumerate()
        .flat_map(|(i, (c, k))| {
            c.monthly.iter().zip(k.monthly.values()).map(move |((key, cv), kv)| {
                format!(
                    "{i},{key},{},{}",
                    format_value(cv * FLEET_UNIT),
                    format_value(kv * FLEET_UNIT)
                )
            })
        });
    render_csv("Trial,Month,CO2kg,kCal", rows)
}

pub fn render_draws(result: &SimResult) -> String {
    render_csv(
        "Trial,LifespanMonths,MilesPerMonth,CarEmissions,BikeEmissions,CalsPerMile",
        result.trials.iter().enumerate().map(|(i, t)| {
            let d = &t.draw;
            format!(
                "{i},{},{},{},{},{}",
                d.lifespan_months,
                format_value(d.miles_per_month),
                format_value(d.car_emissions),
                format_value(d.bike_emissions),
                format_value(d.cals_per_mile)
            )
        }),
    )
}

pub fn cmd_simulate(
    monthly: &MonthlySeries,
    spec: &SimSpec,
    output_dir: &Path,
    out: &mut dyn Write,
) -> Result<SimulationOutput> {
    let co2 = impact::run_co2(monthly, spec).map_err(core)?;
    let calories = impact::run_calories(monthly, spec).map_err(core)?;
    debug_assert_eq!(co2.kind, ImpactKind::Co2);
    if co2.negative_savings {
        eprintln!("warning: some trials drew car emissions below e-bike emissions (negative savings)");
    }

    ensure_dir(output_dir)?;
    let summary = render_summary(&co2, &calories)?;
    write_file(&output_dir.join(SIM_SUMMARY_OUT), &summary)?;
    write_file(&output_dir.join(SIM_TRIALS_OUT), &render_trials(&co2, &calories))?;
    write_file(&output_dir.join(SIM_PARAMS_OUT), &render_draws(&co2))?;
    spaghetti(
        &co2,
        "Monthly CO2 saved, all trials",
        "CO2 saved (kg)",
        output_dir.join(CO2_TRIALS_SVG),
    )?;
    spaghetti(
        &calories,
        "Monthly calories burned, all trials",
        "Energy (kcal)",
        output_dir.join(KCAL_TRIALS_SVG),
    )?;
    sample_trial(
        &co2,
        "Monthly CO2 saved, trial 0",
        "CO2 saved (kg)",
        output_dir.join(CO2_SAMPLE_SVG),
    )?;
    sample_trial(
        &calories,
        "Monthly calories burned, trial 0",
        "Energy (kcal)",
        output_dir.join(KCAL_SAMPLE_SVG),
    )?;

    let mut table = format!(
        "{:<6} {:>16} {:>16} {:>18} {:>18}\n",
        "Year", "CO2 kg mean", "CO2 kg std", "kcal mean", "kcal std"
    );
    for y in co2.common_years() {
        let c = impact::summarize(&co2, y).map_err(core)?;
        let k = impact::summarize(&calories, y).map_err(core)?;
        let _ = writeln!(
            table,
            "{y:<6} {:>16.2} {:>16.2} {:>18.2} {:>18.2}",
            c.mean * FLEET_UNIT,
            c.std * FLEET_UNIT,
            k.mean * FLEET_UNIT,
            k.std * FLEET_UNIT
        );
    }
    emit(out, &table)?;
    Ok(SimulationOutput { co2, calories })
}

pub struct RunOutput {
    pub prep: PrepOutput,
    pub diagnostics: DiagnosticsReport,
    pub forecast: PipelineForecast,
    pub importance: ImportanceOutput,
    pub simulation: SimulationOutput,
}

/// Every stage in order, all outputs under `cfg.output_dir`.
pub fn cmd_run(cfg: &PipelineConfig, out: &mut dyn Write) -> Result<RunOutput> {
    cfg.validate()?;
    let dir = cfg.output_dir.as_path();
    emit(out, "== prep ==\n")?;
    let prep = cmd_prep(&cfg.inputs, dir, cfg.ref_year, out)?;
    emit(out, "\n== diagnose ==\n")?;
    let diagnostics = cmd_diagnose(&prep.monthly, None, cfg.lags, Some(dir), out)?;
    emit(out, "\n== forecast ==\n")?;
    let forecast = cmd_forecast(
        &prep.monthly,
        cfg.order,
        cfg.horizon,
        cfg.train_fraction,
        cfg.confidence,
        cfg.lags,
        cfg.seed,
        dir,
        out,
    )?;
    emit(out, "\n== importance ==\n")?;
    let table = ingest::read_factors(&cfg.inputs.factors).map_err(core)?;
    let importance = cmd_importance(&table, &cfg.forest, Some(dir), out)?;
    emit(out, "\n== simulate ==\n")?;
    let simulation = cmd_simulate(&prep.monthly, &cfg.sim, dir, out)?;
    Ok(RunOutput {
        prep,
        diagnostics,
        forecast,
        importance,
        simulation,
    })
}
