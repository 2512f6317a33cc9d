use nalgebra::{DMatrix, DVector};

/// Ordinary least squares solution.
pub(crate) struct OlsFit {
    pub coef: Vec<f64>,
    pub ssr: f64,
    pub nobs: usize,
    /// Diagonal of `(X'X)^-1`.
    pub xtx_inv_diag: Vec<f64>,
}

impl OlsFit {
    /// Gaussian log-likelihood at the ML variance estimate.
    pub fn loglik(&self) -> f64 {
        let n = self.nobs as f64;
        -n / 2.0 * ((2.0 * std::f64::consts::PI).ln() + (self.ssr / n).ln() + 1.0)
    }

    pub fn aic(&self) -> f64 {
        -2.0 * self.loglik() + 2.0 * self.coef.len() as f64
    }

    /// Standard error of coefficient `i` with the unbiased residual variance.
    pub fn std_error(&self, i: usize) -> f64 {
        let dof = (self.nobs - self.coef.len()) as f64;
        (self.ssr / dof * self.xtx_inv_diag[i]).sqrt()
    }
}

/// Least squares via Householder QR. `None` when `x` is rank deficient.
/// `rows` are the design rows, each of equal length.
pub(crate) fn ols(rows: &[Vec<f64>], y: &[f64]) -> Option<OlsFit> {
    let n = rows.len();
    let k = rows.first()?.len();
    if n <= k || k == 0 {
        return None;
    }
    let x = DMatrix::from_fn(n, k, |i, j| rows[i][j]);
    let yv = DVector::from_column_slice(y);
    let qr = x.clone().qr();
    let r = qr.r();
    let scale = (0..k).map(|i| r[(i, i)].abs()).fold(0.0, f64::max);
    if scale == 0.0 || (0..k).any(|i| r[(i, i)].abs() <= 1e-10 * scale) {
        return None;
    }
    let qty = qr.q().transpose() * &yv;
    let coef = r.solve_upper_triangular(&qty.rows(0, k).into_owned())?;
    let resid = &yv - &x * &coef;
    let ssr = resid.norm_squared();
    let r_inv = r.solve_upper_triangular(&DMatrix::identity(k, k))?;
    let xtx_inv = &r_inv * r_inv.transpose();
    Some(OlsFit {
        coef: coef.iter().copied().collect(),
        ssr,
        nobs: n,
        xtx_inv_diag: (0..k).map(|i| xtx_inv[(i, i)]).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line_fit() {
        let rows: Vec<Vec<f64>> = (0..6).map(|i| vec![1.0, f64::from(i)]).collect();
        let y: Vec<f64> = (0..6).map(|i| 2.0 + 3.0 * f64::from(i)).collect();
        let fit = ols(&rows, &y).unwrap();
        assert!((fit.coef[0] - 2.0).abs() < 1e-12);
        assert!((fit.coef[1] - 3.0).abs() < 1e-12);
        assert!(fit.ssr < 1e-20);
    }

    #[test]
    fn collinear_design_rejected() {
        let rows: Vec<Vec<f64>> = (0..6).map(|_| vec![1.0, 5.0]).collect();
        assert!(ols(&rows, &[1.0; 6]).is_none());
    }

    #[test]
    fn inverse_diagonal_matches_closed_form() {
        // Simple regression: var(slope) factor = 1 / sum (x - xbar)^2.
        let xs = [0.0, 1.0, 3.0, 4.0, 7.0];
        let rows: Vec<Vec<f64>> = xs.iter().map(|&x| vec![1.0, x]).collect();
        let fit = ols(&rows, &[1.0, 0.0, 2.0, 1.0, 3.0]).unwrap();
        let mean = xs.iter().sum::<f64>() / 5.0;
        let sxx: f64 = xs.iter().map(|x| (x - mean).powi(2)).sum();
        assert!((fit.xtx_inv_diag[1] - 1.0 / sxx).abs() < 1e-12);
    }
}
