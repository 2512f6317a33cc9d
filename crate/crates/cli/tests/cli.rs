use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ebikecast_core::ingest;

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn ebikecast(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ebikecast"))
        .args(args)
        .env_remove("EBIKECAST_SEED")
        .output()
        .expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn prep_into(dir: &Path) -> PathBuf {
    let out = ebikecast(&["prep", "--input", s(&data_dir()), "--output", s(dir)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    dir.join("MonthlyUSEbikeSales.csv")
}

#[test]
fn prep_output_conserves_annual_totals() {
    let tmp = tempfile::tempdir().unwrap();
    let monthly = ingest::read_monthly(prep_into(tmp.path())).unwrap();
    let annual = ingest::read_annual(tmp.path().join("AnnualUSEbikeSales.csv")).unwrap();
    for (year, total) in annual.iter() {
        let sum: f64 = monthly.iter().filter(|(k, _)| k.year() == year).map(|(_, v)| v).sum();
        assert!((sum - total).abs() <= 1e-9 * total);
    }
    let known = ingest::read_annual(data_dir().join("KnownUSEbikeSales.csv")).unwrap();
    assert_eq!(annual.get(2019), known.get(2019));
}

#[test]
fn explicit_default_reference_year_changes_nothing() {
    let tmp = tempfile::tempdir().unwrap();
    let a = std::fs::read(prep_into(&tmp.path().join("a"))).unwrap();
    let out = ebikecast(&[
        "prep",
        "--input",
        s(&data_dir()),
        "--output",
        s(&tmp.path().join("b")),
        "--ref-year",
        "2019",
    ]);
    assert!(out.status.success());
    assert_eq!(a, std::fs::read(tmp.path().join("b/MonthlyUSEbikeSales.csv")).unwrap());
    let out = ebikecast(&[
        "prep",
        "--input",
        s(&data_dir()),
        "--output",
        s(&tmp.path().join("c")),
        "--ref-year",
        "2018",
    ]);
    assert!(out.status.success());
    assert_ne!(a, std::fs::read(tmp.path().join("c/MonthlyUSEbikeSales.csv")).unwrap());
}

#[test]
fn missing_input_fails_with_ingest_code() {
    let tmp = tempfile::tempdir().unwrap();
    let out = ebikecast(&["prep", "--input", s(tmp.path()), "--output", s(&tmp.path().join("o"))]);
    assert_eq!(out.status.code(), Some(10));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("EuropeanEbikeSales.csv"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn error_paths_have_distinct_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let monthly = prep_into(tmp.path());

    let usage = ebikecast(&["fit", "--input", s(&monthly), "--order", "1,2"]);
    assert_eq!(usage.status.code(), Some(2));

    let config = ebikecast(&[
        "simulate",
        "--input",
        s(&monthly),
        "--output",
        s(tmp.path()),
        "--param",
        "wheels=1,0",
    ]);
    assert_eq!(config.status.code(), Some(4));

    let short = tmp.path().join("short.csv");
    std::fs::write(&short, "Month,Sales\n2020-01,1\n2020-02,2\n2020-03,3").unwrap();
    let arima = ebikecast(&["fit", "--input", s(&short), "--order", "2,1,2"]);
    assert_eq!(arima.status.code(), Some(14));
    let diag = ebikecast(&["diagnose", "--input", s(&short)]);
    assert_eq!(diag.status.code(), Some(13));

    let nonpositive = tmp.path().join("zero.csv");
    std::fs::write(&nonpositive, "Month,Sales\n2020-01,0\n2020-02,2\n2020-03,3\n2020-04,3").unwrap();
    let series = ebikecast(&["fit", "--input", s(&nonpositive), "--order", "0,1,0"]);
    assert_eq!(series.status.code(), Some(12));

    let factors = tmp.path().join("factors.csv");
    std::fs::write(&factors, "Year,a,b,c,d,Sales\n2000,1,2,3,4,5\n2001,1,2,3,4,6").unwrap();
    let forest = ebikecast(&["importance", "--input", s(&factors), "--trees", "5"]);
    assert_eq!(forest.status.code(), Some(15));

    let long_life = ebikecast(&[
        "simulate",
        "--input",
        s(&short),
        "--output",
        s(tmp.path()),
        "--param",
        "lifespan_months=48,0",
    ]);
    assert_eq!(long_life.status.code(), Some(16));

    let blocked = tmp.path().join("file");
    std::fs::write(&blocked, "").unwrap();
    let io = ebikecast(&["prep", "--input", s(&data_dir()), "--output", s(&blocked.join("sub"))]);
    assert_eq!(io.status.code(), Some(3));
}

#[test]
fn seed_changes_simulation_but_not_prep() {
    let tmp = tempfile::tempdir().unwrap();
    let monthly = prep_into(tmp.path());
    let run = |seed: &str, dir: &str| {
        let out_dir = tmp.path().join(dir);
        let out = ebikecast(&[
            "simulate",
            "--input",
            s(&monthly),
            "--output",
            s(&out_dir),
            "--trials",
            "20",
            "--seed",
            seed,
        ]);
        assert!(out.status.success());
        std::fs::read(out_dir.join("simulation_summary.csv")).unwrap()
    };
    assert_eq!(run("1", "s1"), run("1", "s1b"));
    assert_ne!(run("1", "s1"), run("2", "s2"));

    let other = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_ebikecast"))
        .args(["prep", "--input", s(&data_dir()), "--output", s(other.path())])
        .env("EBIKECAST_SEED", "999")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(
        std::fs::read(&monthly).unwrap(),
        std::fs::read(other.path().join("MonthlyUSEbikeSales.csv")).unwrap()
    );
}

#[test]
fn seed_falls_back_to_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let monthly = prep_into(tmp.path());
    let summary = |env: Option<&str>, flag: Option<&str>, dir: &str| {
        let out_dir = tmp.path().join(dir);
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_ebikecast"));
        cmd.args([
            "simulate",
            "--input",
            s(&monthly),
            "--output",
            s(&out_dir),
            "--trials",
            "10",
        ]);
        cmd.env_remove("EBIKECAST_SEED");
        if let Some(e) = env {
            cmd.env("EBIKECAST_SEED", e);
        }
        if let Some(f) = flag {
            cmd.args(["--seed", f]);
        }
        assert!(cmd.output().unwrap().status.success());
        std::fs::read(out_dir.join("simulation_summary.csv")).unwrap()
    };
    assert_eq!(summary(Some("7"), None, "env"), summary(None, Some("7"), "flag"));
    assert_eq!(summary(None, None, "default"), summary(None, Some("42"), "explicit"));
}

#[test]
fn forecast_writes_csvs_and_horizon_mean_points() {
    let tmp = tempfile::tempdir().unwrap();
    let monthly = prep_into(tmp.path());
    let out_dir = tmp.path().join("fc");
    let out = ebikecast(&[
        "forecast",
        "--input",
        s(&monthly),
        "--output",
        s(&out_dir),
        "--order",
        "2,1,1",
        "--horizon",
        "40",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(out_dir.join("forecast.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("Month,Mean,Lower,Upper"));
    for line in lines.clone() {
        let v: Vec<f64> = line.split(',').skip(1).map(|x| x.parse().unwrap()).collect();
        assert!(v[1] <= v[0] && v[0] <= v[2]);
    }
    assert_eq!(lines.count(), 40);
    assert!(std::fs::read_to_string(out_dir.join("forecast_annual.csv"))
        .unwrap()
        .starts_with("Year,Sales\n"));

    let svg = std::fs::read_to_string(out_dir.join("forecast.svg")).unwrap();
    let mean_line = svg
        .lines()
        .find(|l| l.contains(r#"data-series="forecast mean""#))
        .unwrap();
    let points = mean_line.split("points=\"").nth(1).unwrap().trim_end_matches("\"/>");
    assert_eq!(points.split_whitespace().count(), 40);
}

#[test]
fn diagnose_fit_and_importance_print_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let monthly = prep_into(tmp.path());
    let out = ebikecast(&["diagnose", "--input", s(&monthly), "--output", s(tmp.path())]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("ADF (constant)") && text.contains("Ljung-Box") && text.contains("Kurtosis"));
    assert!(tmp.path().join("rolling_stats.svg").exists());

    let out = ebikecast(&["fit", "--input", s(&monthly), "--order", "1,1,1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("ar.L1") && text.contains("ma.L1") && text.contains("sigma2"));
    assert!(text.contains("Ljung-Box on residuals: m=24 dof=22"));

    let out = ebikecast(&[
        "importance",
        "--input",
        s(&data_dir().join("factors_annual.csv")),
        "--trees",
        "100",
        "--output",
        s(tmp.path()),
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("Variable") && text.contains("MAE") && text.contains("train rows 12 test rows 5"));
    let csv = std::fs::read_to_string(tmp.path().join("importance.csv")).unwrap();
    let total: f64 = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-9);
}

#[test]
fn simulate_writes_summary_trials_and_spaghetti() {
    let tmp = tempfile::tempdir().unwrap();
    let monthly = prep_into(tmp.path());
    let out = ebikecast(&[
        "simulate",
        "--input",
        s(&monthly),
        "--output",
        s(tmp.path()),
        "--trials",
        "25",
        "--fleet-stat",
        "mean",
        "--param",
        "cals_per_mile=18.58,0",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = std::fs::read_to_string(tmp.path().join("simulation_summary.csv")).unwrap();
    assert!(summary.starts_with("Year,CO2kg_mean,CO2kg_std,kCal_mean,kCal_std\n"));
    let svg = std::fs::read_to_string(tmp.path().join("co2_trials.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 25);
    let params = std::fs::read_to_string(tmp.path().join("simulation_parameters.csv")).unwrap();
    assert_eq!(params.lines().count(), 26);
    assert!(params.lines().skip(1).all(|l| l.ends_with(",18.58")));
    let trials = std::fs::read_to_string(tmp.path().join("simulation_trials.csv")).unwrap();
    assert!(trials.starts_with("Trial,Month,CO2kg,kCal\n0,"));
}
