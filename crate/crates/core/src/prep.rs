//! Annual reconstruction from European sales and monthly disaggregation.
//!
//! Missing U.S. years are filled by proportional scaling against a reference
//! year: `us_ref * eu_year / eu_ref`. Annual totals are then spread over the
//! twelve months of each year in proportion to that month's search-trend
//! frequency.

use thiserror::Error;

use crate::ingest::{AnnualSeries, MonthKey, MonthlySeries, TrendTable};

pub const DEFAULT_REF_YEAR: i32 = 2019;

#[derive(Debug, Error, PartialEq)]
pub enum PrepError {
    #[error("reference sales must be positive, got {0}")]
    NonPositiveReference(f64),
    #[error("sales must be finite and nonnegative, got {0}")]
    InvalidSales(f64),
    #[error("reference year {year} missing from {source_name} data")]
    MissingReference { year: i32, source_name: &'static str },
    #[error("year {0} is covered by neither U.S. nor European data")]
    MissingYear(i32),
    #[error("no trend data for year {0}")]
    MissingTrendYear(i32),
    #[error("trend frequencies for {0} are all zero")]
    ZeroTrendYear(i32),
    #[error("annual series is empty")]
    Empty,
}

type Result<T, E = PrepError> = std::result::Result<T, E>;

/// Scales a European annual figure to U.S. units via the reference year.
pub fn us_from_european(eu_year_sales: f64, eu_ref_sales: f64, us_ref_sales: f64) -> Result<f64> {
    if !eu_ref_sales.is_finite() || eu_ref_sales <= 0.0 {
        return Err(PrepError::NonPositiveReference(eu_ref_sales));
    }
    for v in [eu_year_sales, us_ref_sales] {
        if !v.is_finite() || v < 0.0 {
            return Err(PrepError::InvalidSales(v));
        }
    }
    Ok(us_ref_sales * (eu_year_sales / eu_ref_sales))
}

/// European series plus the reference-year anchors for both regions.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeInputs {
    pub european_annual: AnnualSeries,
    pub european_ref: f64,
    pub us_ref: f64,
    pub ref_year: i32,
}

impl MergeInputs {
    /// Looks up the reference-year values in both sources.
    pub fn new(european_annual: AnnualSeries, known_us: &AnnualSeries, ref_year: i32) -> Result<Self> {
        let european_ref = european_annual.get(ref_year).ok_or(PrepError::MissingReference {
            year: ref_year,
            source_name: "European",
        })?;
        let us_ref = known_us.get(ref_year).ok_or(PrepError::MissingReference {
            year: ref_year,
            source_name: "U.S.",
        })?;
        if european_ref.is_nan() || european_ref <= 0.0 {
            return Err(PrepError::NonPositiveReference(european_ref));
        }
        Ok(Self {
            european_annual,
            european_ref,
            us_ref,
            ref_year,
        })
    }
}

/// Contiguous annual U.S. series over the union of both sources' years.
/// Known U.S. values pass through unchanged.
pub fn merge_series(inputs: &MergeInputs, known_us: &AnnualSeries) -> Result<AnnualSeries> {
    let bounds = |s: &AnnualSeries| s.first_year().zip(s.last_year());
    let (first, last) = match (bounds(known_us), bounds(&inputs.european_annual)) {
        (Some((a, b)), Some((c, d))) => (a.min(c), b.max(d)),
        (Some(r), None) | (None, Some(r)) => r,
        (None, None) => return Err(PrepError::Empty),
    };
    let mut out = Vec::new();
    for year in first..=last {
        let value = match (known_us.get(year), inputs.european_annual.get(year)) {
            (Some(us), _) => us,
            (None, Some(eu)) => us_from_european(eu, inputs.european_ref, inputs.us_ref)?,
            (None, None) => return Err(PrepError::MissingYear(year)),
        };
        out.push((year, value));
    }
    Ok(AnnualSeries::from_entries(out).expect("merged values are finite and nonnegative"))
}

/// Splits each annual total over its months by search-trend share.
pub fn disaggregate(annual: &AnnualSeries, trends: &TrendTable) -> Result<MonthlySeries> {
    let first = annual.first_year().ok_or(PrepError::Empty)?;
    let mut values = Vec::with_capacity(annual.len() * 12);
    for (expected, (year, total)) in (first..).zip(annual.iter()) {
        if year != expected {
            return Err(PrepError::MissingYear(expected));
        }
        let freqs = trends.year_frequencies(year).ok_or(PrepError::MissingTrendYear(year))?;
        let sum: f64 = freqs.iter().map(|&f| f64::from(f)).sum();
        if sum == 0.0 {
            return Err(PrepError::ZeroTrendYear(year));
        }
        values.extend(freqs.iter().map(|&f| f64::from(f) / sum * total));
    }
    let start = MonthKey::new(first, 1).expect("January is a valid month");
    Ok(MonthlySeries::new(start, values).expect("disaggregated values are finite"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn annual(entries: &[(i32, f64)]) -> AnnualSeries {
        AnnualSeries::from_entries(entries.iter().copied()).unwrap()
    }

    fn trends(year: i32, freqs: [u8; 12]) -> TrendTable {
        TrendTable::from_entries(
            freqs
                .iter()
                .enumerate()
                .map(|(m, &f)| (MonthKey::new(year, m as u32 + 1).unwrap(), f)),
        )
        .unwrap()
    }

    #[test]
    fn scaling_formula() {
        assert_eq!(us_from_european(500.0, 500.0, 423.0).unwrap(), 423.0);
        assert_eq!(us_from_european(250.0, 500.0, 400.0).unwrap(), 200.0);
        assert_eq!(us_from_european(0.0, 500.0, 400.0).unwrap(), 0.0);
        assert!(matches!(
            us_from_european(1.0, 0.0, 1.0),
            Err(PrepError::NonPositiveReference(_))
        ));
        assert!(us_from_european(1.0, -3.0, 1.0).is_err());
    }

    #[test]
    fn merge_passes_known_years_through() {
        let eu: Vec<(i32, f64)> = (2006..=2019).map(|y| (y, 100.0 + f64::from(y - 2006))).collect();
        let eu = annual(&eu);
        let us = annual(&[(2019, 423.0)]);
        let inputs = MergeInputs::new(eu, &us, 2019).unwrap();
        let merged = merge_series(&inputs, &us).unwrap();
        assert_eq!(merged.first_year(), Some(2006));
        assert_eq!(merged.last_year(), Some(2019));
        assert_eq!(merged.len(), 14);
        assert_eq!(merged.get(2019), Some(423.0));
        assert_eq!(merge_series(&inputs, &merged).unwrap(), merged);
    }

    #[test]
    fn merge_scales_proportionally() {
        let eu = annual(&[(2006, 250.0), (2019, 500.0)]);
        let us = annual(&[
            (2007, 10.0),
            (2008, 10.0),
            (2009, 10.0),
            (2010, 10.0),
            (2011, 10.0),
            (2012, 10.0),
            (2013, 10.0),
            (2014, 10.0),
            (2015, 10.0),
            (2016, 10.0),
            (2017, 10.0),
            (2018, 10.0),
            (2019, 400.0),
        ]);
        let inputs = MergeInputs::new(eu, &us, 2019).unwrap();
        let merged = merge_series(&inputs, &us).unwrap();
        assert_eq!(merged.get(2006), Some(200.0));
    }

    #[test]
    fn merge_rejects_uncovered_year() {
        let eu = annual(&[(2008, 1.0), (2009, 1.0), (2011, 1.0), (2019, 2.0)]);
        let us = annual(&[(2019, 4.0)]);
        let inputs = MergeInputs::new(eu, &us, 2019).unwrap();
        assert!(matches!(merge_series(&inputs, &us), Err(PrepError::MissingYear(2010))));
    }

    #[test]
    fn merge_requires_reference_in_both_sources() {
        let eu = annual(&[(2006, 1.0)]);
        let us = annual(&[(2019, 4.0)]);
        assert!(matches!(
            MergeInputs::new(eu, &us, 2019),
            Err(PrepError::MissingReference { .. })
        ));
    }

    #[test]
    fn equal_frequencies_split_evenly() {
        let out = disaggregate(&annual(&[(2019, 120.0)]), &trends(2019, [7; 12])).unwrap();
        assert_eq!(out.len(), 12);
        for v in out.values() {
            assert!((v - 10.0).abs() < 1e-12);
        }
    }

    #[test]
    fn proportional_split() {
        let mut f = [0u8; 12];
        f[0] = 50;
        f[1] = 50;
        let out = disaggregate(&annual(&[(2019, 100.0)]), &trends(2019, f)).unwrap();
        assert_eq!(out.values()[0], 50.0);
        assert_eq!(out.values()[1], 50.0);
        assert!(out.values()[2..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn zero_trend_year_rejected() {
        assert!(matches!(
            disaggregate(&annual(&[(2019, 100.0)]), &trends(2019, [0; 12])),
            Err(PrepError::ZeroTrendYear(2019))
        ));
        assert!(matches!(
            disaggregate(&annual(&[(2018, 100.0)]), &trends(2019, [1; 12])),
            Err(PrepError::MissingTrendYear(2018))
        ));
    }
}
