//! Derivative-free Nelder-Mead minimiser.

#[derive(Debug, Clone, Copy)]
pub(crate) struct NelderMeadConfig {
    pub max_evals: usize,
    /// Stop once the simplex's objective spread falls below this (relative).
    pub f_tol: f64,
    /// ... and its vertices are within this distance of the best one.
    pub x_tol: f64,
    pub initial_step: f64,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        Self {
            max_evals: 20_000,
            f_tol: 1e-12,
            x_tol: 1e-9,
            initial_step: 0.1,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub converged: bool,
}

/// Minimises `f` from `x0`. Non-finite objective values are treated as `+inf`.
pub(crate) fn nelder_mead<F>(f: F, x0: &[f64], cfg: &NelderMeadConfig) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    let evals = std::cell::Cell::new(0usize);
    let eval = |x: &[f64]| {
        evals.set(evals.get() + 1);
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    if n == 0 {
        let v = eval(x0);
        return Minimum {
            x: Vec::new(),
            f: v,
            converged: true,
        };
    }

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        let step = if v[i].abs() > 1e-8 {
            cfg.initial_step * v[i].abs().max(0.5)
        } else {
            cfg.initial_step
        };
        v[i] += step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v)).collect();

    const ALPHA: f64 = 1.0;
    const GAMMA: f64 = 2.0;
    const RHO: f64 = 0.5;
    const SIGMA: f64 = 0.5;

    let mut converged = false;
    while evals.get() < cfg.max_evals {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let best = values[0];
        let worst = values[n];
        if best.is_finite() && worst.is_finite() {
            let spread = (worst - best).abs();
            let size = simplex[1..]
                .iter()
                .map(|v| {
                    v.iter()
                        .zip(&simplex[0])
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max)
                })
                .fold(0.0, f64::max);
            if spread <= cfg.f_tol * (best.abs() + 1e-300) && size <= cfg.x_tol {
                converged = true;
                break;
            }
        }

        let mut centroid = vec![0.0; n];
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }
        let towards = |coef: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n])
                .map(|(c, w)| c + coef * (c - w))
                .collect()
        };

        let reflected = towards(ALPHA);
        let fr = eval(&reflected);
        if fr < values[0] {
            let expanded = towards(GAMMA);
            let fe = eval(&expanded);
            if fe < fr {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[n] = reflected;
            values[n] = fr;
            continue;
        }
        let (contracted, fc) = if fr < values[n] {
            let c = towards(RHO);
            let fc = eval(&c);
            (c, fc)
        } else {
            let c = towards(-RHO);
            let fc = eval(&c);
            (c, fc)
        };
        if fc < values[n].min(fr) {
            simplex[n] = contracted;
            values[n] = fc;
            continue;
        }
        for i in 1..=n {
            let shrunk: Vec<f64> = simplex[0]
                .iter()
                .zip(&simplex[i])
                .map(|(b, x)| b + SIGMA * (x - b))
                .collect();
            values[i] = eval(&shrunk);
            simplex[i] = shrunk;
        }
    }

    let (idx, _) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(&b.0)))
        .expect("simplex nonempty");
    Minimum {
        x: simplex[idx].clone(),
        f: values[idx],
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + 10.0 * (x[1] + 2.0).powi(2) + 3.0;
        let m = nelder_mead(f, &[0.0, 0.0], &NelderMeadConfig::default());
        assert!(m.converged);
        assert!((m.x[0] - 1.0).abs() < 1e-6);
        assert!((m.x[1] + 2.0).abs() < 1e-6);
    }

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2);
        let m = nelder_mead(f, &[-1.2, 1.0], &NelderMeadConfig::default());
        assert!((m.x[0] - 1.0).abs() < 1e-4 && (m.x[1] - 1.0).abs() < 1e-4, "{m:?}");
    }

    #[test]
    fn infinite_region_is_avoided() {
        let f = |x: &[f64]| {
            if x[0] > 0.5 {
                f64::INFINITY
            } else {
                (x[0] - 1.0).powi(2)
            }
        };
        let m = nelder_mead(f, &[0.0], &NelderMeadConfig::default());
        assert!(m.x[0] <= 0.5 && m.x[0] > 0.49);
    }
}
