//! Time-series transforms: log, differencing, rolling windows and
//! sample autocorrelation.

use thiserror::Error;

use crate::ingest::MonthlySeries;

#[derive(Debug, Error, PartialEq)]
pub enum SeriesError {
    #[error("log transform needs positive values, got {value} at index {index}")]
    NonPositive { index: usize, value: f64 },
    #[error("series of length {len} is too short for order/lag {order}")]
    TooShort { len: usize, order: usize },
    #[error("anchor length {found} does not match differencing order {expected}")]
    AnchorMismatch { expected: usize, found: usize },
    #[error("window {window} out of range for series of length {len}")]
    WindowOutOfRange { window: usize, len: usize },
    #[error("series is constant; autocorrelation undefined")]
    Constant,
}

type Result<T, E = SeriesError> = std::result::Result<T, E>;

/// Which transform produced a series, with what is needed to undo it.
#[derive(Debug, Clone, PartialEq)]
pub enum TransformTag {
    Raw,
    Log,
    Diff { order: usize, anchor: Vec<f64> },
}

pub fn log_values(values: &[f64]) -> Result<Vec<f64>> {
    values
        .iter()
        .enumerate()
        .map(|(index, &value)| {
            if value > 0.0 {
                Ok(value.ln())
            } else {
                Err(SeriesError::NonPositive { index, value })
            }
        })
        .collect()
}

pub fn log_transform(s: &MonthlySeries) -> Result<MonthlySeries> {
    let logged = log_values(s.values())?;
    Ok(s.with_values(logged).expect("log of positive finite values is finite"))
}

pub fn exp_transform(s: &MonthlySeries) -> MonthlySeries {
    s.with_values(s.values().iter().map(|v| v.exp()).collect())
        .expect("exp of finite values is finite or infinite only on overflow")
}

/// Result of [`difference`]: the differenced values and, per level, the
/// first value that was dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct Differenced {
    pub values: Vec<f64>,
    pub anchor: Vec<f64>,
}

impl Differenced {
    pub fn tag(&self) -> TransformTag {
        TransformTag::Diff {
            order: self.anchor.len(),
            anchor: self.anchor.clone(),
        }
    }
}

/// Applies `order` successive first differences.
pub fn difference(s: &[f64], order: usize) -> Result<Differenced> {
    if s.len() <= order {
        return Err(SeriesError::TooShort { len: s.len(), order });
    }
    let mut values = s.to_vec();
    let mut anchor = Vec::with_capacity(order);
    for _ in 0..order {
        anchor.push(values[0]);
        values = values.windows(2).map(|w| w[1] - w[0]).collect();
    }
    Ok(Differenced { values, anchor })
}

/// Inverse of [`difference`]: re-integrates from the innermost level out.
pub fn undifference(d: &[f64], anchor: &[f64]) -> Vec<f64> {
    let mut values = d.to_vec();
    for &start in anchor.iter().rev() {
        let mut level = Vec::with_capacity(values.len() + 1);
        let mut acc = start;
        level.push(acc);
        for v in &values {
            acc += v;
            level.push(acc);
        }
        values = level;
    }
    values
}

/// [`undifference`] that checks the anchor against an expected order.
pub fn undifference_checked(d: &[f64], anchor: &[f64], order: usize) -> Result<Vec<f64>> {
    if anchor.len() != order {
        return Err(SeriesError::AnchorMismatch {
            expected: order,
            found: anchor.len(),
        });
    }
    Ok(undifference(d, anchor))
}

/// Last value of each differencing level 0..order of `s` (level 0 is `s`).
pub fn level_tails(s: &[f64], order: usize) -> Result<Vec<f64>> {
    if s.len() < order {
        return Err(SeriesError::TooShort { len: s.len(), order });
    }
    let mut values = s.to_vec();
    let mut tails = Vec::with_capacity(order);
    for _ in 0..order {
        tails.push(*values.last().expect("nonempty"));
        values = values.windows(2).map(|w| w[1] - w[0]).collect();
    }
    Ok(tails)
}

/// Extends a series forward: `increments` are future values of the
/// `tails.len()`-times differenced series, `tails` the last observed value
/// of each level (as returned by [`level_tails`]).
pub fn integrate_forward(increments: &[f64], tails: &[f64]) -> Vec<f64> {
    let mut values = increments.to_vec();
    for &last in tails.iter().rev() {
        let mut acc = last;
        for v in values.iter_mut() {
            acc += *v;
            *v = acc;
        }
    }
    values
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RollingStat {
    Mean,
    /// Sample standard deviation, divisor `window - 1`.
    Std,
    Sum,
}

/// Trailing-window statistic aligned to the window end; the output has
/// `len - window + 1` entries.
pub fn rolling(s: &[f64], window: usize, stat: RollingStat) -> Result<Vec<f64>> {
    if window == 0 || window > s.len() || (stat == RollingStat::Std && window < 2) {
        return Err(SeriesError::WindowOutOfRange { window, len: s.len() });
    }
    Ok(s.windows(window)
        .map(|w| {
            let sum: f64 = w.iter().sum();
            match stat {
                RollingStat::Sum => sum,
                RollingStat::Mean => sum / window as f64,
                RollingStat::Std => {
                    let mean = sum / window as f64;
                    let ss: f64 = w.iter().map(|x| (x - mean).powi(2)).sum();
                    (ss / (window - 1) as f64).sqrt()
                }
            }
        })
        .collect())
}

/// Sample autocorrelations `r_1..=r_max_lag` with the shared-mean,
/// divisor-n estimator.
pub fn autocorrelation(s: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let n = s.len();
    if n < 2 || max_lag == 0 || max_lag >= n {
        return Err(SeriesError::TooShort { len: n, order: max_lag });
    }
    let mean = s.iter().sum::<f64>() / n as f64;
    let dev: Vec<f64> = s.iter().map(|x| x - mean).collect();
    let denom: f64 = dev.iter().map(|d| d * d).sum();
    if denom == 0.0 || dev.iter().all(|&d| d == 0.0) {
        return Err(SeriesError::Constant);
    }
    Ok((1..=max_lag)
        .map(|lag| dev.iter().zip(&dev[lag..]).map(|(a, b)| a * b).sum::<f64>() / denom)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::MonthKey;
    use crate::rng::stream_rng;
    use proptest::prelude::*;
    use rand_distr::{Distribution, StandardNormal};

    fn noise(seed: u64, n: usize) -> Vec<f64> {
        let mut rng = stream_rng(seed, 0);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    #[test]
    fn log_basics() {
        let start = MonthKey::new(2020, 1).unwrap();
        let s = MonthlySeries::new(start, vec![1.0, 1.0, std::f64::consts::E]).unwrap();
        let l = log_transform(&s).unwrap();
        assert_eq!(&l.values()[..2], &[0.0, 0.0]);
        assert!((l.values()[2] - 1.0).abs() < 1e-15);
        let zero = MonthlySeries::new(start, vec![1.0, 0.0]).unwrap();
        assert_eq!(
            log_transform(&zero),
            Err(SeriesError::NonPositive { index: 1, value: 0.0 })
        );
    }

    #[test]
    fn differencing_by_hand() {
        let d = difference(&[1.0, 2.0, 4.0], 1).unwrap();
        assert_eq!(d.values, vec![1.0, 2.0]);
        assert_eq!(d.anchor, vec![1.0]);

        let d0 = difference(&[3.0, 1.0], 0).unwrap();
        assert_eq!(d0.values, vec![3.0, 1.0]);
        assert!(d0.anchor.is_empty());

        // [1,2,4,8] -> [1,2,4] -> [1,2]; the dropped heads are 1 and 1.
        let d2 = difference(&[1.0, 2.0, 4.0, 8.0], 2).unwrap();
        assert_eq!(d2.values, vec![1.0, 2.0]);
        assert_eq!(d2.anchor, vec![1.0, 1.0]);

        assert!(matches!(difference(&[1.0], 1), Err(SeriesError::TooShort { .. })));
    }

    #[test]
    fn undifference_checks_anchor() {
        assert_eq!(
            undifference_checked(&[1.0], &[1.0, 2.0], 1),
            Err(SeriesError::AnchorMismatch { expected: 1, found: 2 })
        );
        assert_eq!(undifference_checked(&[1.0, 2.0], &[], 0).unwrap(), vec![1.0, 2.0]);
    }

    #[test]
    fn forward_integration_matches_full_undifference() {
        let s = noise(3, 30);
        for order in 0..=2 {
            let d = difference(&s, order).unwrap();
            let (head, tail) = d.values.split_at(20);
            let observed = undifference(head, &d.anchor);
            let tails = level_tails(&observed, order).unwrap();
            let extended = integrate_forward(tail, &tails);
            for (a, b) in extended.iter().zip(&s[20 + order..]) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rolling_examples() {
        let s = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(rolling(&s, 2, RollingStat::Mean).unwrap(), vec![1.5, 2.5, 3.5]);
        assert_eq!(rolling(&s, 2, RollingStat::Sum).unwrap(), vec![3.0, 5.0, 7.0]);
        assert_eq!(rolling(&[5.0, 5.0, 5.0], 3, RollingStat::Std).unwrap(), vec![0.0]);
        let std = rolling(&[1.0, 2.0, 3.0], 3, RollingStat::Std).unwrap();
        assert!((std[0] - 1.0).abs() < 1e-15);
        assert!(rolling(&s, 0, RollingStat::Mean).is_err());
        assert!(rolling(&s, 5, RollingStat::Mean).is_err());
    }

    #[test]
    fn autocorrelation_examples() {
        let alt: Vec<f64> = (0..100).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let r = autocorrelation(&alt, 1).unwrap();
        // Direct formula: mean 0, numerator -(n-1), denominator n.
        let oracle = -99.0 / 100.0;
        assert!((r[0] - oracle).abs() < 1e-12);
        assert!((r[0] + 1.0).abs() < 0.05);

        let white = noise(11, 1000);
        assert!(autocorrelation(&white, 1).unwrap()[0].abs() < 0.1);

        assert_eq!(autocorrelation(&[2.0; 10], 3), Err(SeriesError::Constant));
        assert!(autocorrelation(&[1.0, 2.0], 2).is_err());
    }

    proptest! {
        #[test]
        fn difference_roundtrip(s in prop::collection::vec(-1e3f64..1e3, 5..60), order in 0usize..3) {
            let d = difference(&s, order).unwrap();
            prop_assert_eq!(d.values.len(), s.len() - order);
            let back = undifference(&d.values, &d.anchor);
            prop_assert_eq!(back.len(), s.len());
            for (a, b) in back.iter().zip(&s) {
                prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()) * 1e3);
            }
        }

        #[test]
        fn rolling_unit_mean_is_identity(s in prop::collection::vec(-1e6f64..1e6, 1..40)) {
            prop_assert_eq!(rolling(&s, 1, RollingStat::Mean).unwrap(), s);
        }

        #[test]
        fn autocorrelation_bounded(s in prop::collection::vec(-10f64..10.0, 3..80)) {
            let max_lag = s.len() - 1;
            if let Ok(r) = autocorrelation(&s, max_lag) {
                for v in r {
                    prop_assert!(v.abs() <= 1.0 + 1e-9);
                }
            }
        }

        #[test]
        fn log_inverts_exp(s in prop::collection::vec(-20f64..20.0, 1..40)) {
            let start = MonthKey::new(2000, 1).unwrap();
            let exp = MonthlySeries::new(start, s.iter().map(|v| v.exp()).collect()).unwrap();
            let back = log_transform(&exp).unwrap();
            for (a, b) in back.values().iter().zip(&s) {
                prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
            }
        }
    }
}
