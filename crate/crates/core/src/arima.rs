//! ARIMA(p, d, q) estimation by conditional sum of squares and forecasting.
//!
//! The series is differenced `d` times to `w`, then
//!
//! ```text
//! e_t = (w_t - mu) - sum_i phi_i (w_{t-i} - mu) - sum_j theta_j e_{t-j}
//! ```
//!
//! is run from `t = p` with pre-sample errors set to zero. The intercept of
//! the regression form is `c = mu (1 - sum phi)`. Parameters are searched
//! with a seeded multi-start Nelder-Mead; candidates whose AR polynomial is
//! not stationary or whose MA polynomial is not invertible score `+inf`.

use std::fmt;
use std::str::FromStr;

use rand_distr::{Distribution, Normal as NormalDist};
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

use crate::ingest::{AnnualSeries, MonthKey, MonthlySeries};
use crate::linalg::ols;
use crate::optim::{nelder_mead, NelderMeadConfig};
use crate::rng::stream_rng;
use crate::series::{self, SeriesError};

/// Upper bound on each of p, d and q.
pub const MAX_ORDER: usize = 24;
const N_STARTS: usize = 5;
const MAX_RESTARTS: usize = 4;
/// Reflection coefficients must stay this far inside the unit circle.
const ROOT_MARGIN: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum ArimaError {
    #[error("invalid ARIMA order ({p},{d},{q}): {reason}")]
    InvalidOrder {
        p: usize,
        d: usize,
        q: usize,
        reason: &'static str,
    },
    #[error("cannot parse ARIMA order `{0}`; expected p,d,q")]
    ParseOrder(String),
    #[error("series of length {len} too short for this order: need at least {needed}")]
    TooShort { len: usize, needed: usize },
    #[error("non-finite observation at index {0}")]
    NonFinite(usize),
    #[error("forecast horizon must be at least 1")]
    InvalidHorizon,
    #[error("confidence must lie strictly between 0 and 1, got {0}")]
    InvalidConfidence(f64),
    #[error("train fraction must lie in (0, 1], got {0}")]
    InvalidTrainFraction(f64),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

type Result<T, E = ArimaError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ArimaOrder {
    pub p: usize,
    pub d: usize,
    pub q: usize,
}

impl ArimaOrder {
    pub fn new(p: usize, d: usize, q: usize) -> Result<Self> {
        let invalid = |reason| ArimaError::InvalidOrder { p, d, q, reason };
        if p > MAX_ORDER || d > MAX_ORDER || q > MAX_ORDER {
            return Err(invalid("each term must be at most 24"));
        }
        if p + q == 0 && d == 0 {
            return Err(invalid("model has no AR, MA or differencing terms"));
        }
        Ok(Self { p, d, q })
    }

    /// Number of estimated ARMA coefficients, `p + q`.
    pub fn arma_params(&self) -> usize {
        self.p + self.q
    }

    /// Minimum series length accepted by [`fit`].
    pub fn min_len(&self) -> usize {
        self.p + self.q + self.d + 2
    }
}

impl fmt::Display for ArimaOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.p, self.d, self.q)
    }
}

impl FromStr for ArimaOrder {
    type Err = ArimaError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s
            .trim()
            .trim_matches(|c| c == '(' || c == ')')
            .split(',')
            .map(str::trim)
            .collect();
        let [p, d, q] = parts.as_slice() else {
            return Err(ArimaError::ParseOrder(s.to_string()));
        };
        let parse = |v: &str| v.parse::<usize>().map_err(|_| ArimaError::ParseOrder(s.to_string()));
        Self::new(parse(p)?, parse(d)?, parse(q)?)
    }
}

/// Whether `y_t = sum_i ar_i y_{t-i} + ..` is stationary, i.e. all roots of
/// `1 - sum ar_i z^i` lie outside the unit circle. Uses the Schur-Cohn
/// step-down recursion: every reflection coefficient must have modulus < 1.
pub fn is_stationary(ar: &[f64]) -> bool {
    let mut a: Vec<f64> = ar.to_vec();
    while let Some(&last) = a.last() {
        if last == 0.0 {
            a.pop();
        } else {
            break;
        }
    }
    for k in (1..=a.len()).rev() {
        let r = a[k - 1];
        if !r.is_finite() || r.abs() >= 1.0 - ROOT_MARGIN {
            return false;
        }
        let denom = 1.0 - r * r;
        let prev: Vec<f64> = (0..k - 1).map(|i| (a[i] + r * a[k - 2 - i]) / denom).collect();
        a = prev;
    }
    true
}

/// Whether all roots of `1 + sum ma_j z^j` lie outside the unit circle.
pub fn is_invertible(ma: &[f64]) -> bool {
    let neg: Vec<f64> = ma.iter().map(|v| -v).collect();
    is_stationary(&neg)
}

/// CSS residuals for `w` from index `p` on.
fn css_residuals(w: &[f64], mean: f64, phi: &[f64], theta: &[f64]) -> Vec<f64> {
    let p = phi.len();
    let mut e = Vec::with_capacity(w.len().saturating_sub(p));
    for t in p..w.len() {
        let mut v = w[t] - mean;
        for (i, f) in phi.iter().enumerate() {
            v -= f * (w[t - 1 - i] - mean);
        }
        for (j, th) in theta.iter().enumerate() {
            let lag = t - p;
            if j < lag {
                v -= th * e[lag - 1 - j];
            }
        }
        e.push(v);
    }
    e
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArimaModel {
    pub order: ArimaOrder,
    /// AR coefficients `phi_1..phi_p`.
    pub phi: Vec<f64>,
    /// MA coefficients `theta_1..theta_q`.
    pub theta: Vec<f64>,
    /// Constant `c` of the regression form of the differenced series.
    pub intercept: f64,
    /// Mean of the differenced process, `c / (1 - sum phi)`.
    pub mean: f64,
    /// Innovation variance, CSS divided by the number of residuals.
    pub sigma2: f64,
    pub css: f64,
    pub loglik_css: f64,
    /// CSS residuals aligned with differenced observations `p..`.
    pub residuals: Vec<f64>,
    /// Last `max(p, q) + d` training observations.
    pub train_tail: Vec<f64>,
    pub n_obs: usize,
    /// False when the optimizer stopped on its evaluation budget.
    pub converged: bool,
}

impl ArimaModel {
    /// Model with fixed coefficients, conditioned on `history` (level scale).
    pub fn from_parts(
        order: ArimaOrder,
        phi: Vec<f64>,
        theta: Vec<f64>,
        intercept: f64,
        sigma2: f64,
        history: &[f64],
    ) -> Result<Self> {
        assert_eq!(phi.len(), order.p, "phi length must equal p");
        assert_eq!(theta.len(), order.q, "theta length must equal q");
        let needed = (order.p + order.d).max(1);
        if history.len() < needed {
            return Err(ArimaError::TooShort {
                len: history.len(),
                needed,
            });
        }
        let w = series::difference(history, order.d)?.values;
        let ar_sum: f64 = phi.iter().sum();
        let mean = if (1.0 - ar_sum).abs() > 1e-12 {
            intercept / (1.0 - ar_sum)
        } else {
            0.0
        };
        let residuals = css_residuals(&w, mean, &phi, &theta);
        let css: f64 = residuals.iter().map(|e| e * e).sum();
        Ok(Self::assemble(
            order, phi, theta, mean, intercept, sigma2, css, residuals, history, true,
        ))
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        order: ArimaOrder,
        phi: Vec<f64>,
        theta: Vec<f64>,
        mean: f64,
        intercept: f64,
        sigma2: f64,
        css: f64,
        residuals: Vec<f64>,
        history: &[f64],
        converged: bool,
    ) -> Self {
        let n_eff = residuals.len() as f64;
        let tail_len = (order.p.max(order.q) + order.d).min(history.len());
        Self {
            order,
            phi,
            theta,
            intercept,
            mean,
            sigma2,
            css,
            loglik_css: -n_eff / 2.0 * ((2.0 * std::f64::consts::PI * sigma2).ln() + 1.0),
            residuals,
            train_tail: history[history.len() - tail_len..].to_vec(),
            n_obs: history.len(),
            converged,
        }
    }

    /// Number of estimated ARMA coefficients, for Ljung-Box dof adjustment.
    pub fn fitted_params(&self) -> usize {
        self.order.arma_params()
    }

    /// AR polynomial of the level series, `phi(B) (1 - B)^d`, in the
    /// `y_t = sum a_i y_{t-i}` convention.
    fn integrated_ar(&self) -> Vec<f64> {
        // Coefficients of 1 - sum phi_i B^i.
        let mut poly: Vec<f64> = std::iter::once(1.0).chain(self.phi.iter().map(|v| -v)).collect();
        for _ in 0..self.order.d {
            let mut next = vec![0.0; poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i] += c;
                next[i + 1] -= c;
            }
            poly = next;
        }
        poly[1..].iter().map(|c| -c).collect()
    }

    /// First `n` psi-weights of the MA(infinity) form of the level series.
    pub fn psi_weights(&self, n: usize) -> Vec<f64> {
        let ar = self.integrated_ar();
        let mut psi = Vec::with_capacity(n);
        for j in 0..n {
            let mut v = if j == 0 {
                1.0
            } else {
                self.theta.get(j - 1).copied().unwrap_or(0.0)
            };
            for (i, a) in ar.iter().enumerate().take(j) {
                v += a * psi[j - 1 - i];
            }
            psi.push(v);
        }
        psi
    }
}

/// Hannan-Rissanen style starting values: a long autoregression supplies
/// residual proxies, then one OLS pass on lagged values and residuals.
fn initial_guess(w: &[f64], p: usize, q: usize) -> (f64, Vec<f64>, Vec<f64>) {
    let n = w.len();
    let sample_mean = w.iter().sum::<f64>() / n as f64;
    let fallback = (sample_mean, vec![0.0; p], vec![0.0; q]);

    let residual_proxy: Vec<f64> = if q > 0 {
        let m = (2 * (p + q)).max(8).min(n / 3);
        if m == 0 {
            return fallback;
        }
        let rows: Vec<Vec<f64>> = (m..n)
            .map(|t| std::iter::once(1.0).chain((1..=m).map(|i| w[t - i])).collect())
            .collect();
        let Some(fit) = ols(&rows, &w[m..]) else {
            return fallback;
        };
        let mut e = vec![0.0; n];
        for (k, t) in (m..n).enumerate() {
            let pred: f64 = rows[k].iter().zip(&fit.coef).map(|(x, b)| x * b).sum();
            e[t] = w[t] - pred;
        }
        e
    } else {
        Vec::new()
    };

    let start = if q > 0 {
        let m = (2 * (p + q)).max(8).min(n / 3);
        m + q
    } else {
        p
    }
    .max(p);
    let rows: Vec<Vec<f64>> = (start..n)
        .map(|t| {
            std::iter::once(1.0)
                .chain((1..=p).map(|i| w[t - i]))
                .chain((1..=q).map(|j| residual_proxy[t - j]))
                .collect()
        })
        .collect();
    let Some(fit) = ols(&rows, &w[start..]) else {
        return fallback;
    };
    let phi = fit.coef[1..=p].to_vec();
    let theta = fit.coef[p + 1..].to_vec();
    let ar_sum: f64 = phi.iter().sum();
    let mean = if (1.0 - ar_sum).abs() > 1e-3 {
        fit.coef[0] / (1.0 - ar_sum)
    } else {
        sample_mean
    };
    (mean, phi, theta)
}

/// Shrinks coefficients towards zero until the model is admissible.
fn make_admissible(phi: &mut [f64], theta: &mut [f64]) {
    for _ in 0..200 {
        if is_stationary(phi) && is_invertible(theta) {
            return;
        }
        phi.iter_mut().chain(theta.iter_mut()).for_each(|v| *v *= 0.9);
    }
    phi.iter_mut().chain(theta.iter_mut()).for_each(|v| *v = 0.0);
}

struct StartResult {
    params: Vec<f64>,
    css: f64,
    converged: bool,
}

/// Fits ARIMA(p, d, q) by conditional sum of squares. Deterministic for a
/// given `seed`.
pub fn fit(s: &[f64], order: ArimaOrder, seed: u64) -> Result<ArimaModel> {
    if let Some(i) = s.iter().position(|v| !v.is_finite()) {
        return Err(ArimaError::NonFinite(i));
    }
    if s.len() < order.min_len() {
        return Err(ArimaError::TooShort {
            len: s.len(),
            needed: order.min_len(),
        });
    }
    let w = series::difference(s, order.d)?.values;
    let (p, q) = (order.p, order.q);
    let n_eff = (w.len() - p) as f64;

    let finish = |mean: f64, phi: Vec<f64>, theta: Vec<f64>, converged: bool| {
        let residuals = css_residuals(&w, mean, &phi, &theta);
        let css: f64 = residuals.iter().map(|e| e * e).sum();
        let intercept = mean * (1.0 - phi.iter().sum::<f64>());
        ArimaModel::assemble(
            order,
            phi,
            theta,
            mean,
            intercept,
            css / n_eff,
            css,
            residuals,
            s,
            converged,
        )
    };

    if p == 0 && q == 0 {
        let mean = w.iter().sum::<f64>() / w.len() as f64;
        return Ok(finish(mean, Vec::new(), Vec::new(), true));
    }

    // Pure autoregressions: CSS is ordinary least squares.
    if q == 0 {
        let rows: Vec<Vec<f64>> = (p..w.len())
            .map(|t| std::iter::once(1.0).chain((1..=p).map(|i| w[t - i])).collect())
            .collect();
        if let Some(fit) = ols(&rows, &w[p..]) {
            let phi = fit.coef[1..].to_vec();
            let ar_sum: f64 = phi.iter().sum();
            if is_stationary(&phi) && (1.0 - ar_sum).abs() > 1e-12 {
                return Ok(finish(fit.coef[0] / (1.0 - ar_sum), phi, Vec::new(), true));
            }
        }
    }

    let objective = |x: &[f64]| -> f64 {
        let (phi, theta) = x[1..].split_at(p);
        if !is_stationary(phi) || !is_invertible(theta) {
            return f64::INFINITY;
        }
        css_residuals(&w, x[0], phi, theta).iter().map(|e| e * e).sum()
    };

    let (mean0, phi0, theta0) = initial_guess(&w, p, q);
    let scale = {
        let m = w.iter().sum::<f64>() / w.len() as f64;
        (w.iter().map(|v| (v - m).powi(2)).sum::<f64>() / w.len() as f64).sqrt()
    };
    let dim = 1 + p + q;
    let config = NelderMeadConfig {
        max_evals: 2_000 * dim,
        ..NelderMeadConfig::default()
    };

    let starts: Vec<StartResult> = (0..N_STARTS)
        .into_par_iter()
        .map(|k| {
            let mut phi = phi0.clone();
            let mut theta = theta0.clone();
            let mut mean = mean0;
            if k == 1 {
                phi.iter_mut().chain(theta.iter_mut()).for_each(|v| *v = 0.0);
                mean = w.iter().sum::<f64>() / w.len() as f64;
            } else if k > 1 {
                let mut rng = stream_rng(seed, k as u64);
                let jitter = NormalDist::new(0.0, 0.15).expect("valid std");
                phi.iter_mut()
                    .chain(theta.iter_mut())
                    .for_each(|v| *v += jitter.sample(&mut rng));
                mean += 0.1 * scale.max(1e-8) * jitter.sample(&mut rng);
            }
            make_admissible(&mut phi, &mut theta);
            let mut x: Vec<f64> = std::iter::once(mean).chain(phi).chain(theta).collect();
            let mut best = objective(&x);
            let mut converged = false;
            for _ in 0..MAX_RESTARTS {
                let m = nelder_mead(objective, &x, &config);
                let improved = m.f < best - 1e-12 * best.abs().max(1e-300);
                if m.f <= best {
                    x = m.x;
                    best = m.f;
                }
                converged = m.converged;
                if !improved && m.converged {
                    break;
                }
            }
            StartResult {
                params: x,
                css: best,
                converged,
            }
        })
        .collect();

    let best = starts
        .into_iter()
        .enumerate()
        .min_by(|a, b| a.1.css.total_cmp(&b.1.css).then(a.0.cmp(&b.0)))
        .map(|(_, r)| r)
        .expect("at least one start");
    let (phi, theta) = best.params[1..].split_at(p);
    Ok(finish(best.params[0], phi.to_vec(), theta.to_vec(), best.converged))
}

/// Point forecasts with symmetric normal intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct Forecast {
    pub mean: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Forecast standard errors on the model scale.
    pub std_err: Vec<f64>,
    pub horizon: usize,
    pub confidence: f64,
}

impl Forecast {
    /// Applies a monotone increasing transform to means and bounds; interval
    /// quantiles map exactly under such transforms.
    pub fn map_monotone(&self, f: impl Fn(f64) -> f64) -> Forecast {
        Forecast {
            mean: self.mean.iter().map(|&v| f(v)).collect(),
            lower: self.lower.iter().map(|&v| f(v)).collect(),
            upper: self.upper.iter().map(|&v| f(v)).collect(),
            std_err: self.std_err.clone(),
            horizon: self.horizon,
            confidence: self.confidence,
        }
    }
}

/// Standard normal quantile for a two-sided interval of `confidence`.
pub fn z_score(confidence: f64) -> f64 {
    Normal::standard().inverse_cdf(0.5 + confidence / 2.0)
}

pub fn forecast(model: &ArimaModel, horizon: usize, confidence: f64) -> Result<Forecast> {
    if horizon == 0 {
        return Err(ArimaError::InvalidHorizon);
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(ArimaError::InvalidConfidence(confidence));
    }
    let ArimaOrder { p, d, q } = model.order;
    let mut w: Vec<f64> = if p > 0 {
        let w_tail = series::difference(&model.train_tail, d)?.values;
        w_tail[w_tail.len() - p.min(w_tail.len())..].to_vec()
    } else {
        Vec::new()
    };
    let hist = w.len();
    let e_tail: Vec<f64> = model.residuals[model.residuals.len().saturating_sub(q)..].to_vec();

    let mut increments = Vec::with_capacity(horizon);
    for h in 0..horizon {
        let t = hist + h;
        let mut v = model.mean;
        for (i, f) in model.phi.iter().enumerate() {
            if t > i {
                v += f * (w[t - 1 - i] - model.mean);
            }
        }
        // Future innovations are zero; only observed residuals contribute.
        for (j, th) in model.theta.iter().enumerate() {
            let back = j + 1;
            if back > h && back - h <= e_tail.len() {
                v += th * e_tail[e_tail.len() - (back - h)];
            }
        }
        w.push(v);
        increments.push(v);
    }
    let tails = series::level_tails(&model.train_tail, d)?;
    let mean = series::integrate_forward(&increments, &tails);

    let psi = model.psi_weights(horizon);
    let z = z_score(confidence);
    let mut acc = 0.0;
    let std_err: Vec<f64> = psi
        .iter()
        .map(|p| {
            acc += p * p;
            (model.sigma2 * acc).sqrt()
        })
        .collect();
    let lower = mean.iter().zip(&std_err).map(|(m, s)| m - z * s).collect();
    let upper = mean.iter().zip(&std_err).map(|(m, s)| m + z * s).collect();
    Ok(Forecast {
        mean,
        lower,
        upper,
        std_err,
        horizon,
        confidence,
    })
}

/// Log-scale fit, level-scale forecast and calendar-year totals.
#[derive(Debug, Clone)]
pub struct PipelineForecast {
    pub model: ArimaModel,
    /// Back-transformed forecast in sales units.
    pub forecast: Forecast,
    /// Month of the first forecast value.
    pub start: MonthKey,
    pub train_len: usize,
    /// Per-year sums of forecast means.
    pub annual: AnnualSeries,
    /// Years only partly covered by the forecast window.
    pub partial_years: Vec<i32>,
}

impl PipelineForecast {
    pub fn months(&self) -> impl Iterator<Item = MonthKey> + '_ {
        (0..self.forecast.horizon).map(|h| self.start.offset(h as i64))
    }

    pub fn mean_series(&self) -> MonthlySeries {
        MonthlySeries::new(self.start, self.forecast.mean.clone()).expect("forecast means are finite")
    }
}

/// Training length for a chronological prefix split.
pub fn train_length(n: usize, train_fraction: f64) -> Result<usize> {
    if !(train_fraction > 0.0 && train_fraction <= 1.0) {
        return Err(ArimaError::InvalidTrainFraction(train_fraction));
    }
    Ok((n as f64 * train_fraction).floor() as usize)
}

/// Logs the series, fits on the chronological prefix, forecasts `horizon`
/// months past the end of the prefix, exponentiates and sums by year.
pub fn forecast_pipeline(
    monthly: &MonthlySeries,
    order: ArimaOrder,
    horizon: usize,
    train_fraction: f64,
    confidence: f64,
    seed: u64,
) -> Result<PipelineForecast> {
    let train_len = train_length(monthly.len(), train_fraction)?;
    let logged = series::log_values(monthly.values())?;
    let model = fit(&logged[..train_len], order, seed)?;
    let forecast = forecast(&model, horizon, confidence)?.map_monotone(f64::exp);
    let start = monthly.start().offset(train_len as i64);

    let mut totals: Vec<(i32, f64, usize)> = Vec::new();
    for (h, v) in forecast.mean.iter().enumerate() {
        let year = start.offset(h as i64).year();
        match totals.last_mut() {
            Some((y, sum, count)) if *y == year => {
                *sum += v;
                *count += 1;
            }
            _ => totals.push((year, *v, 1)),
        }
    }
    let partial_years = totals.iter().filter(|t| t.2 < 12).map(|t| t.0).collect();
    let annual = AnnualSeries::from_entries(totals.iter().map(|t| (t.0, t.1))).map_err(|_| ArimaError::NonFinite(0))?;
    Ok(PipelineForecast {
        model,
        forecast,
        start,
        train_len,
        annual,
        partial_years,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_validation_and_parsing() {
        assert!(ArimaOrder::new(0, 0, 0).is_err());
        assert!(ArimaOrder::new(25, 1, 0).is_err());
        assert_eq!(
            "12,1,1".parse::<ArimaOrder>().unwrap(),
            ArimaOrder::new(12, 1, 1).unwrap()
        );
        assert_eq!(
            "(1, 0, 2)".parse::<ArimaOrder>().unwrap(),
            ArimaOrder::new(1, 0, 2).unwrap()
        );
        assert!("1,2".parse::<ArimaOrder>().is_err());
        assert!("a,b,c".parse::<ArimaOrder>().is_err());
    }

    #[test]
    fn stationarity_step_down() {
        assert!(is_stationary(&[]));
        assert!(is_stationary(&[0.5]));
        assert!(!is_stationary(&[1.0]));
        assert!(!is_stationary(&[-1.2]));
        // 1 - 1.2z + 0.32z^2 = (1 - 0.4z)(1 - 0.8z)
        assert!(is_stationary(&[1.2, -0.32]));
        // 1 - 1.5z + 0.5z^2 has a unit root.
        assert!(!is_stationary(&[1.5, -0.5]));
        assert!(is_invertible(&[0.5]));
        assert!(!is_invertible(&[1.5]));
    }

    #[test]
    fn random_walk_closed_form() {
        let s = [1.0, 3.0, 2.0, 6.0, 5.0];
        let m = fit(&s, ArimaOrder::new(0, 1, 0).unwrap(), 0).unwrap();
        let diffs = [2.0, -1.0, 4.0, -1.0];
        let mean = diffs.iter().sum::<f64>() / 4.0;
        assert_eq!(m.intercept, mean);
        for (r, d) in m.residuals.iter().zip(diffs) {
            assert_eq!(*r, d - mean);
        }
        assert!(m.converged);
    }

    #[test]
    fn flat_and_drift_forecasts() {
        let order = ArimaOrder::new(0, 1, 0).unwrap();
        let m = ArimaModel::from_parts(order, vec![], vec![], 0.0, 1.0, &[3.0, 7.5]).unwrap();
        let f = forecast(&m, 6, 0.95).unwrap();
        assert!(f.mean.iter().all(|&v| v == 7.5));
        let m = ArimaModel::from_parts(order, vec![], vec![], 0.25, 1.0, &[3.0, 7.5]).unwrap();
        let f = forecast(&m, 4, 0.95).unwrap();
        for (h, v) in f.mean.iter().enumerate() {
            assert!((v - (7.5 + (h + 1) as f64 * 0.25)).abs() < 1e-12);
        }
    }

    #[test]
    fn ar1_geometric_decay() {
        let order = ArimaOrder::new(1, 0, 0).unwrap();
        let m = ArimaModel::from_parts(order, vec![0.5], vec![], 0.0, 1.0, &[8.0]).unwrap();
        let f = forecast(&m, 4, 0.9).unwrap();
        assert_eq!(f.mean, vec![4.0, 2.0, 1.0, 0.5]);
    }

    #[test]
    fn ma1_uses_last_residual_once() {
        let order = ArimaOrder::new(0, 0, 1).unwrap();
        let m = ArimaModel::from_parts(order, vec![], vec![0.5], 1.0, 1.0, &[1.0, 3.0]).unwrap();
        // e_0 = 0, e_1 = 3 - 1 - 0.5 * 0 = 2
        assert_eq!(m.residuals, vec![0.0, 2.0]);
        let f = forecast(&m, 3, 0.9).unwrap();
        assert_eq!(f.mean, vec![2.0, 1.0, 1.0]);
    }

    #[test]
    fn psi_weights_of_simple_models() {
        let order = ArimaOrder::new(1, 0, 1).unwrap();
        let m = ArimaModel::from_parts(order, vec![0.5], vec![0.4], 0.0, 1.0, &[0.0, 1.0]).unwrap();
        // psi_1 = phi + theta, psi_j = phi psi_{j-1}
        let psi = m.psi_weights(4);
        let want = [1.0, 0.9, 0.45, 0.225];
        for (a, b) in psi.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
        let rw =
            ArimaModel::from_parts(ArimaOrder::new(0, 1, 0).unwrap(), vec![], vec![], 0.0, 1.0, &[0.0, 1.0]).unwrap();
        assert_eq!(rw.psi_weights(3), vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn forecast_argument_checks() {
        let order = ArimaOrder::new(0, 1, 0).unwrap();
        let m = ArimaModel::from_parts(order, vec![], vec![], 0.0, 1.0, &[3.0, 7.5]).unwrap();
        assert_eq!(forecast(&m, 0, 0.9), Err(ArimaError::InvalidHorizon));
        assert_eq!(forecast(&m, 1, 1.0), Err(ArimaError::InvalidConfidence(1.0)));
        assert_eq!(forecast(&m, 1, 0.0), Err(ArimaError::InvalidConfidence(0.0)));
    }

    #[test]
    fn too_short_series() {
        let order = ArimaOrder::new(2, 1, 1).unwrap();
        assert!(matches!(fit(&[1.0; 5], order, 0), Err(ArimaError::TooShort { .. })));
    }
}
