//! Fixtures shared by the benchmarks.

use std::path::PathBuf;

use ebikecast_core::{ingest, prep, FactorTable, MonthlySeries};

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

/// Monthly U.S. sales rebuilt from the bundled inputs.
pub fn bundled_monthly() -> MonthlySeries {
    let dir = data_dir();
    let eu = ingest::read_annual(dir.join("EuropeanEbikeSales.csv")).expect("bundled data");
    let us = ingest::read_annual(dir.join("KnownUSEbikeSales.csv")).expect("bundled data");
    let trends = ingest::read_trends(dir.join("ElectricBikesGoogleSearchTrends.csv")).expect("bundled data");
    let inputs = prep::MergeInputs::new(eu, &us, prep::DEFAULT_REF_YEAR).expect("bundled data");
    let annual = prep::merge_series(&inputs, &us).expect("bundled data");
    prep::disaggregate(&annual, &trends).expect("bundled data")
}

pub fn bundled_factors() -> FactorTable {
    ingest::read_factors(data_dir().join("factors_annual.csv")).expect("bundled data")
}
