//! Monte Carlo simulation of CO2 savings and calories burned by the active
//! e-bike fleet.
//!
//! Per trial, lifespan, monthly mileage, car and e-bike emissions and
//! calories per mile are each drawn once from their normal distributions.
//! The active fleet `T_b` is a trailing statistic of monthly sales over the
//! drawn lifespan, and
//!
//! ```text
//! TC_m   = (E_car - E_bike) * T_b * d / 1000
//! TCal_m = C * T_b * d / 1000
//! ```
//!
//! Sales are in thousands of bikes, so series values are thousands of kg
//! (or thousands of kcal). Multiply by [`FLEET_UNIT`] for plain units.

use std::collections::BTreeMap;

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use thiserror::Error;

use crate::ingest::MonthlySeries;
use crate::rng::{stream_rng, StreamRng};
use crate::series::{self, RollingStat};

/// Bikes per unit of the sales series.
pub const FLEET_UNIT: f64 = 1000.0;
pub const DEFAULT_TRIALS: usize = 100;

#[derive(Debug, Error, PartialEq)]
pub enum ImpactError {
    #[error("range maximum {max} is below minimum {min}")]
    InvalidRange { min: f64, max: f64 },
    #[error("lifespan window {window} invalid for a series of {len} months")]
    Window { window: usize, len: usize },
    #[error("parameter `{name}`: {reason}")]
    InvalidParam { name: String, reason: String },
    #[error("at least one trial is required")]
    NoTrials,
    #[error("year {0} is not covered by every trial")]
    YearNotCovered(i32),
}

type Result<T, E = ImpactError> = std::result::Result<T, E>;

/// Range-rule standard deviation, `(max - min) / 4`.
pub fn approx_std(min: f64, max: f64) -> Result<f64> {
    if max.is_nan() || min.is_nan() || max < min {
        return Err(ImpactError::InvalidRange { min, max });
    }
    Ok((max - min) / 4.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalParam {
    pub mean: f64,
    pub std: f64,
    pub units: String,
    /// Draws below this floor are clipped to it.
    pub lower_clip: Option<f64>,
}

impl NormalParam {
    pub fn new(mean: f64, std: f64, units: &str) -> Self {
        Self {
            mean,
            std,
            units: units.to_string(),
            lower_clip: None,
        }
    }

    pub fn clipped_at(mut self, floor: f64) -> Self {
        self.lower_clip = Some(floor);
        self
    }

    fn validate(&self, name: &str) -> Result<()> {
        let bad = |reason: &str| ImpactError::InvalidParam {
            name: name.to_string(),
            reason: reason.to_string(),
        };
        if !self.mean.is_finite() || self.mean <= 0.0 {
            return Err(bad("mean must be positive"));
        }
        if !self.std.is_finite() || self.std < 0.0 {
            return Err(bad("std must be nonnegative"));
        }
        Ok(())
    }

    pub fn sample(&self, rng: &mut StreamRng) -> f64 {
        let z: f64 = StandardNormal.sample(rng);
        let v = self.mean + self.std * z;
        match self.lower_clip {
            Some(floor) if v < floor => floor,
            _ => v,
        }
    }
}

/// How the active fleet is derived from monthly sales.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FleetStat {
    /// Bikes sold over the trailing lifespan.
    #[default]
    Sum,
    /// Trailing mean over the lifespan.
    Mean,
}

impl std::str::FromStr for FleetStat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "sum" => Ok(FleetStat::Sum),
            "mean" => Ok(FleetStat::Mean),
            other => Err(format!("unknown fleet statistic `{other}` (expected sum or mean)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimSpec {
    pub lifespan_months: NormalParam,
    pub miles_per_month: NormalParam,
    /// Car emissions, g/mile.
    pub car_emissions: NormalParam,
    /// E-bike emissions, g/mile.
    pub bike_emissions: NormalParam,
    pub cals_per_mile: NormalParam,
    pub trials: usize,
    pub fleet_stat: FleetStat,
    pub seed: u64,
}

impl Default for SimSpec {
    fn default() -> Self {
        Self {
            lifespan_months: NormalParam::new(48.0, 6.0, "months").clipped_at(1.0),
            miles_per_month: NormalParam::new(63.33, 12.02, "miles/month").clipped_at(0.0),
            car_emissions: NormalParam::new(431.2, 107.803, "g/mile"),
            bike_emissions: NormalParam::new(9.01, 1.9308, "g/mile"),
            cals_per_mile: NormalParam::new(21.0, 3.04, "cal/mile"),
            trials: DEFAULT_TRIALS,
            fleet_stat: FleetStat::Sum,
            seed: 42,
        }
    }
}

impl SimSpec {
    pub const PARAM_NAMES: [&'static str; 5] = [
        "lifespan_months",
        "miles_per_month",
        "car_emissions",
        "bike_emissions",
        "cals_per_mile",
    ];

    pub fn param_mut(&mut self, name: &str) -> Option<&mut NormalParam> {
        match name {
            "lifespan_months" => Some(&mut self.lifespan_months),
            "miles_per_month" => Some(&mut self.miles_per_month),
            "car_emissions" => Some(&mut self.car_emissions),
            "bike_emissions" => Some(&mut self.bike_emissions),
            "cals_per_mile" => Some(&mut self.cals_per_mile),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(ImpactError::NoTrials);
        }
        self.lifespan_months.validate("lifespan_months")?;
        self.miles_per_month.validate("miles_per_month")?;
        self.car_emissions.validate("car_emissions")?;
        self.bike_emissions.validate("bike_emissions")?;
        self.cals_per_mile.validate("cals_per_mile")
    }

    /// Parameters for trial `index`, drawn in a fixed order from the trial's
    /// own stream so CO2 and calorie runs see identical draws.
    pub fn draw(&self, index: usize) -> TrialDraw {
        let mut rng = stream_rng(self.seed, index as u64);
        let lifespan = self.lifespan_months.sample(&mut rng).round().max(1.0) as usize;
        TrialDraw {
            lifespan_months: lifespan,
            miles_per_month: self.miles_per_month.sample(&mut rng),
            car_emissions: self.car_emissions.sample(&mut rng),
            bike_emissions: self.bike_emissions.sample(&mut rng),
            cals_per_mile: self.cals_per_mile.sample(&mut rng),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialDraw {
    pub lifespan_months: usize,
    pub miles_per_month: f64,
    pub car_emissions: f64,
    pub bike_emissions: f64,
    pub cals_per_mile: f64,
}

impl TrialDraw {
    pub fn emissions_saved(&self) -> f64 {
        self.car_emissions - self.bike_emissions
    }
}

/// Trailing lifespan statistic of sales, aligned to the window end.
pub fn active_fleet(sales: &MonthlySeries, lifespan_months: usize, stat: FleetStat) -> Result<MonthlySeries> {
    if lifespan_months == 0 || lifespan_months > sales.len() {
        return Err(ImpactError::Window {
            window: lifespan_months,
            len: sales.len(),
        });
    }
    let stat = match stat {
        FleetStat::Sum => RollingStat::Sum,
        FleetStat::Mean => RollingStat::Mean,
    };
    let values = series::rolling(sales.values(), lifespan_months, stat).map_err(|_| ImpactError::Window {
        window: lifespan_months,
        len: sales.len(),
    })?;
    let start = sales.start().offset(lifespan_months as i64 - 1);
    Ok(MonthlySeries::new(start, values).expect("rolling statistic of finite values is finite"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImpactKind {
    Co2,
    Calories,
}

impl ImpactKind {
    /// Per-mile factor of the formula for this draw.
    fn per_mile(self, draw: &TrialDraw) -> f64 {
        match self {
            ImpactKind::Co2 => draw.emissions_saved(),
            ImpactKind::Calories => draw.cals_per_mile,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub draw: TrialDraw,
    /// Monthly impact, trimmed by the drawn lifespan.
    pub monthly: MonthlySeries,
    /// Trailing-12-month sums at each December the trial fully covers.
    pub annual: BTreeMap<i32, f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub kind: ImpactKind,
    pub trials: Vec<TrialResult>,
    /// Set when some trial drew car emissions below e-bike emissions.
    pub negative_savings: bool,
}

/// Cross-trial mean and sample standard deviation of one year's total.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YearSummary {
    pub year: i32,
    pub mean: f64,
    pub std: f64,
    /// False with a single trial, where the sample std is undefined and
    /// reported as 0.
    pub std_defined: bool,
}

impl SimResult {
    /// Years covered by every trial.
    pub fn common_years(&self) -> Vec<i32> {
        let Some(first) = self.trials.first() else {
            return Vec::new();
        };
        first
            .annual
            .keys()
            .copied()
            .filter(|y| self.trials.iter().all(|t| t.annual.contains_key(y)))
            .collect()
    }

    pub fn summaries(&self) -> Vec<YearSummary> {
        self.common_years()
            .into_iter()
            .map(|y| summarize(self, y).expect("year covered by construction"))
            .collect()
    }
}

fn annual_totals(monthly: &MonthlySeries) -> BTreeMap<i32, f64> {
    let values = monthly.values();
    monthly
        .iter()
        .enumerate()
        .filter(|(i, (key, _))| key.month() == 12 && *i >= 11)
        .map(|(i, (key, _))| (key.year(), values[i - 11..=i].iter().sum()))
        .collect()
}

fn run(kind: ImpactKind, sales: &MonthlySeries, spec: &SimSpec) -> Result<SimResult> {
    spec.validate()?;
    let trials = (0..spec.trials)
        .into_par_iter()
        .map(|i| {
            let draw = spec.draw(i);
            let fleet = active_fleet(sales, draw.lifespan_months, spec.fleet_stat)?;
            let factor = kind.per_mile(&draw) * draw.miles_per_month / 1000.0;
            let monthly = fleet
                .with_values(fleet.values().iter().map(|t| factor * t).collect())
                .expect("finite");
            let annual = annual_totals(&monthly);
            Ok(TrialResult { draw, monthly, annual })
        })
        .collect::<Result<Vec<_>>>()?;
    let negative_savings = kind == ImpactKind::Co2 && trials.iter().any(|t| t.draw.emissions_saved() < 0.0);
    Ok(SimResult {
        kind,
        trials,
        negative_savings,
    })
}

/// Monthly CO2 saved, `(E_car - E_bike) * T_b * d / 1000`, per trial.
pub fn run_co2(sales: &MonthlySeries, spec: &SimSpec) -> Result<SimResult> {
    run(ImpactKind::Co2, sales, spec)
}

/// Monthly kilocalories burned, `C * T_b * d / 1000`, per trial.
pub fn run_calories(sales: &MonthlySeries, spec: &SimSpec) -> Result<SimResult> {
    run(ImpactKind::Calories, sales, spec)
}

pub fn summarize(result: &SimResult, year: i32) -> Result<YearSummary> {
    let values: Vec<f64> = result
        .trials
        .iter()
        .map(|t| t.annual.get(&year).copied())
        .collect::<Option<_>>()
        .ok_or(ImpactError::YearNotCovered(year))?;
    if values.is_empty() {
        return Err(ImpactError::YearNotCovered(year));
    }
    let n = values.len() as f64;
    let std_defined = values.len() > 1;
    // Identical trials: report the shared value exactly rather than a
    // rounded mean with a spurious nonzero spread.
    if values.iter().all(|&v| v == values[0]) {
        return Ok(YearSummary {
            year,
            mean: values[0],
            std: 0.0,
            std_defined,
        });
    }
    let mean = values.iter().sum::<f64>() / n;
    let std = if std_defined {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    Ok(YearSummary {
        year,
        mean,
        std,
        std_defined,
    })
}
