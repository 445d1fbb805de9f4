//! Ordinary least-squares fits in log-log coordinates.

use crate::linalg::least_squares;

#[derive(Clone, Debug, PartialEq)]
pub struct LinearFit {
    /// Coefficients of the regressors, then the intercept.
    pub coefficients: Vec<f64>,
    pub residual_norm: f64,
    pub r_squared: f64,
}

/// Fits `y ≈ Σ_j β_j x_j + β₀`. `None` if the design is rank deficient.
pub fn linear_fit(regressors: &[Vec<f64>], y: &[f64]) -> Option<LinearFit> {
    let mut columns: Vec<Vec<f64>> = regressors.to_vec();
    columns.push(vec![1.0; y.len()]);
    let beta = least_squares(&columns, y)?;
    let fitted: Vec<f64> = (0..y.len())
        .map(|i| columns.iter().zip(&beta).map(|(c, b)| c[i] * b).sum())
        .collect();
    let residual_sq: f64 = fitted.iter().zip(y).map(|(f, v)| (f - v).powi(2)).sum();
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let total_sq: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let r_squared = if total_sq > 0.0 {
        1.0 - residual_sq / total_sq
    } else {
        1.0
    };
    Some(LinearFit {
        coefficients: beta,
        residual_norm: residual_sq.sqrt(),
        r_squared,
    })
}

/// Slope and intercept of `log y` against `log x`.
pub fn log_log_fit(x: &[f64], y: &[f64]) -> Option<LinearFit> {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    linear_fit(&[lx], &ly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_power_law() {
        let x = [1.0, 2.0, 4.0, 8.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(1.5)).collect();
        let fit = log_log_fit(&x, &y).unwrap();
        assert!((fit.coefficients[0] - 1.5).abs() < 1e-12);
        assert!((fit.coefficients[1] - 3f64.ln()).abs() < 1e-12);
        assert!(fit.residual_norm < 1e-12 && (fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_regressors() {
        let a = [1.0, 2.0, 3.0, 1.0, 2.0];
        let b = [0.0, 0.0, 1.0, 2.0, 5.0];
        let y: Vec<f64> = a.iter().zip(&b).map(|(a, b)| 2.0 * a - b + 0.5).collect();
        let fit = linear_fit(&[a.to_vec(), b.to_vec()], &y).unwrap();
        assert!((fit.coefficients[0] - 2.0).abs() < 1e-12);
        assert!((fit.coefficients[1] + 1.0).abs() < 1e-12);
        assert!(linear_fit(&[a.to_vec(), a.to_vec()], &y).is_none());
    }
}
