//! Stationarity and lack-of-fit diagnostics.
//!
//! - Augmented Dickey-Fuller with a constant term, lag length chosen by AIC.
//! - Ljung-Box portmanteau statistic with a degrees-of-freedom adjustment
//!   for fitted ARMA parameters.
//! - Kurtosis as `sum (y - mean)^4 / (n * s^4)` with the sample standard
//!   deviation, plus the excess variant.

use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};
use thiserror::Error;

use crate::linalg::ols;
use crate::series::{self, SeriesError};

#[derive(Debug, Error, PartialEq)]
pub enum DiagnosticsError {
    #[error("series of length {len} too short: need {needed}")]
    TooShort { len: usize, needed: usize },
    #[error("max lag {max_lag} too large for series of length {len}")]
    LagTooLarge { max_lag: usize, len: usize },
    #[error("singular ADF regression (constant or degenerate series)")]
    Singular,
    #[error("invalid Ljung-Box lag count m = {m} for series of length {len}")]
    InvalidLags { m: usize, len: usize },
    #[error("non-positive degrees of freedom: m = {m}, fitted parameters = {fitted}")]
    NonPositiveDof { m: usize, fitted: usize },
    #[error("series is constant")]
    Constant,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

type Result<T, E = DiagnosticsError> = std::result::Result<T, E>;

/// MacKinnon (1994) response-surface coefficients for the approximate
/// asymptotic p-value of the Dickey-Fuller t-statistic, single series,
/// regression with constant and no trend. Polynomials are in ascending
/// powers of the statistic and are passed through the standard normal CDF.
mod mackinnon {
    pub const TAU_MAX: f64 = 2.74;
    pub const TAU_MIN: f64 = -18.83;
    pub const TAU_STAR: f64 = -1.61;
    pub const SMALL_P: [f64; 3] = [2.1659, 1.4412, 3.8269e-2];
    pub const LARGE_P: [f64; 4] = [1.7339, 9.3202e-1, -1.2745e-1, -1.0368e-2];

    /// MacKinnon (2010) finite-sample critical values, constant only:
    /// `b0 + b1/T + b2/T^2 + b3/T^3` for the 1%, 5% and 10% levels.
    pub const CRIT: [[f64; 4]; 3] = [
        [-3.43035, -6.5393, -16.786, -79.433],
        [-2.86154, -2.8903, -4.234, -40.040],
        [-2.56677, -1.5384, -2.809, 0.0],
    ];
}

fn polyval_ascending(coef: &[f64], x: f64) -> f64 {
    coef.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Approximate p-value of an ADF t-statistic (constant, no trend).
pub fn adf_pvalue(statistic: f64) -> f64 {
    if statistic > mackinnon::TAU_MAX {
        return 1.0;
    }
    if statistic < mackinnon::TAU_MIN {
        return 0.0;
    }
    let coef: &[f64] = if statistic <= mackinnon::TAU_STAR {
        &mackinnon::SMALL_P
    } else {
        &mackinnon::LARGE_P
    };
    let normal = Normal::standard();
    normal.cdf(polyval_ascending(coef, statistic)).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalValues {
    pub one_percent: f64,
    pub five_percent: f64,
    pub ten_percent: f64,
}

pub fn adf_critical_values(nobs: usize) -> CriticalValues {
    let inv = 1.0 / nobs as f64;
    let at = |row: usize| polyval_ascending(&mackinnon::CRIT[row], inv);
    CriticalValues {
        one_percent: at(0),
        five_percent: at(1),
        ten_percent: at(2),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdfResult {
    /// t-ratio of the lagged-level coefficient.
    pub statistic: f64,
    pub p_value: f64,
    pub lags_used: usize,
    pub n_obs: usize,
    pub max_lag: usize,
    pub critical_values: CriticalValues,
    pub aic: f64,
}

/// Schwert's rule, `floor(12 * (n / 100)^(1/4))`.
pub fn default_adf_max_lag(n: usize) -> usize {
    (12.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize
}

const ADF_MIN_OBS: usize = 15;

/// Regression rows for `dy_t` on `[1, y_{t-1}, dy_{t-1}, .., dy_{t-lags}]`
/// using differenced indices `first..`.
fn adf_design(levels: &[f64], diffs: &[f64], lags: usize, first: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let rows = (first..diffs.len())
        .map(|t| {
            let mut row = Vec::with_capacity(lags + 2);
            row.push(1.0);
            row.push(levels[t]);
            row.extend((1..=lags).map(|i| diffs[t - i]));
            row
        })
        .collect();
    (rows, diffs[first..].to_vec())
}

/// Augmented Dickey-Fuller test with constant.
///
/// Every lag length `0..=max_lag` is fitted on the common sample that the
/// largest lag allows and the AIC minimiser is kept; the reported regression
/// is then re-estimated on all observations available at that lag.
pub fn adf_test(s: &[f64], max_lag: Option<usize>) -> Result<AdfResult> {
    let n = s.len();
    let cap = (n / 2).saturating_sub(2);
    let max_lag = match max_lag {
        Some(l) if l > cap => return Err(DiagnosticsError::LagTooLarge { max_lag: l, len: n }),
        Some(l) => l,
        None => default_adf_max_lag(n).min(cap),
    };
    let needed = max_lag + 1 + ADF_MIN_OBS;
    if n < needed {
        return Err(DiagnosticsError::TooShort { len: n, needed });
    }
    let diffs: Vec<f64> = s.windows(2).map(|w| w[1] - w[0]).collect();
    if diffs.iter().all(|&d| d == 0.0) {
        return Err(DiagnosticsError::Singular);
    }

    let mut best: Option<(usize, f64)> = None;
    for lags in 0..=max_lag {
        let (rows, y) = adf_design(s, &diffs, lags, max_lag);
        let fit = ols(&rows, &y).ok_or(DiagnosticsError::Singular)?;
        let aic = fit.aic();
        if best.is_none_or(|(_, b)| aic < b) {
            best = Some((lags, aic));
        }
    }
    let (lags_used, aic) = best.expect("at least one lag length fitted");

    let (rows, y) = adf_design(s, &diffs, lags_used, lags_used);
    let fit = ols(&rows, &y).ok_or(DiagnosticsError::Singular)?;
    if fit.ssr.is_nan() || fit.ssr <= 0.0 {
        return Err(DiagnosticsError::Singular);
    }
    let statistic = fit.coef[1] / fit.std_error(1);
    if !statistic.is_finite() {
        return Err(DiagnosticsError::Singular);
    }
    Ok(AdfResult {
        statistic,
        p_value: adf_pvalue(statistic),
        lags_used,
        n_obs: fit.nobs,
        max_lag,
        critical_values: adf_critical_values(fit.nobs),
        aic,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LjungBoxResult {
    pub q: f64,
    pub p_value: f64,
    pub m: usize,
    pub dof: usize,
}

/// `n (n + 2) sum_j r_j^2 / (n - j)` over the supplied autocorrelations
/// `r_1, r_2, ..`.
pub fn ljung_box_q(n: usize, acf: &[f64]) -> f64 {
    let n = n as f64;
    n * (n + 2.0)
        * acf
            .iter()
            .enumerate()
            .map(|(i, r)| r * r / (n - (i + 1) as f64))
            .sum::<f64>()
}

/// Upper-tail chi-square probability.
pub fn chi_square_sf(x: f64, dof: usize) -> f64 {
    let dist = ChiSquared::new(dof as f64).expect("dof is positive");
    dist.sf(x).clamp(0.0, 1.0)
}

/// Ljung-Box test on the first `m` autocorrelations with
/// `m - fitted_params` degrees of freedom.
pub fn ljung_box(s: &[f64], m: usize, fitted_params: usize) -> Result<LjungBoxResult> {
    if m == 0 || m + 1 > s.len() {
        return Err(DiagnosticsError::InvalidLags { m, len: s.len() });
    }
    if fitted_params >= m {
        return Err(DiagnosticsError::NonPositiveDof {
            m,
            fitted: fitted_params,
        });
    }
    let acf = series::autocorrelation(s, m)?;
    let q = ljung_box_q(s.len(), &acf);
    let dof = m - fitted_params;
    Ok(LjungBoxResult {
        q,
        p_value: chi_square_sf(q, dof),
        m,
        dof,
    })
}

/// `sum (y - mean)^4 / (n * s^4)`, `s` the sample standard deviation.
pub fn kurtosis(s: &[f64]) -> Result<f64> {
    let n = s.len();
    if n < 4 {
        return Err(DiagnosticsError::TooShort { len: n, needed: 4 });
    }
    let nf = n as f64;
    let mean = s.iter().sum::<f64>() / nf;
    let m2: f64 = s.iter().map(|y| (y - mean).powi(2)).sum();
    if m2 == 0.0 {
        return Err(DiagnosticsError::Constant);
    }
    let m4: f64 = s.iter().map(|y| (y - mean).powi(4)).sum();
    let var = m2 / (nf - 1.0);
    Ok(m4 / (nf * var * var))
}

/// [`kurtosis`] minus 3.
pub fn excess_kurtosis(s: &[f64]) -> Result<f64> {
    Ok(kurtosis(s)? - 3.0)
}
