use std::f64::consts::PI;

use num_complex::Complex64;

use super::{CurveError, PuiseuxBranch};
use crate::quadrature::{self, DEFAULT_ABS_TOLERANCE, DEFAULT_MAX_SUBDIVISIONS};

/// Default radius of the disk on which `‖φ(z)‖ ≥ c|z|^k` is checked; also the
/// largest admissible Cauchy radius.
pub const DEFAULT_RHO: f64 = 0.5;

fn complex_norm(v: &[Complex64]) -> f64 {
    v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
}

/// Length of the image of the straight parameter segment from `z1` to `z2`:
/// `∫₀¹ ‖d/dt φ(t z₂ + (1−t) z₁)‖₂ dt`.
///
/// This is the upper-bound path for the geodesic metric on the complexified
/// curve; it is comparable to the true geodesic distance but is not itself a
/// metric near a singular point.
pub fn geodesic_distance(branch: &PuiseuxBranch, z1: Complex64, z2: Complex64) -> Result<f64, CurveError> {
    branch.eval(z1)?;
    branch.eval(z2)?;
    if z1 == z2 {
        return Ok(0.0);
    }
    let step = z2 - z1;
    let speed = step.norm();
    let integrand = |t: f64| complex_norm(&branch.derivative(z1 + step * t)) * speed;
    let result = quadrature::integrate(integrand, 0.0, 1.0, DEFAULT_ABS_TOLERANCE, DEFAULT_MAX_SUBDIVISIONS)?;
    Ok(result.value)
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormLowerBoundReport {
    /// Infimum of `‖φ(z)‖/|z|^k` on the finest grid (the empirical `c_φ`).
    pub infimum: f64,
    /// Where the infimum was attained.
    pub argmin: Complex64,
    /// Infimum per refinement level, coarse to fine.
    pub level_infima: Vec<f64>,
    /// Limit of the ratio at 0, `‖[z^k]φ‖`.
    pub leading_ratio: f64,
    /// Refinements in which the infimum collapsed (dropped below half its
    /// previous value), plus one if the ratio ever reached 0.
    pub violations: usize,
}

/// Checks that `‖φ(z)‖₂ / |z|^k` stays bounded away from 0 on `D(0, ρ)∖{0}`.
///
/// The polar grid has `grid` rings and `4·grid` angles; it is refined twice by
/// doubling both counts, which pulls the innermost ring toward 0.
pub fn norm_lower_bound_check(
    branch: &PuiseuxBranch,
    rho: f64,
    grid: usize,
) -> Result<NormLowerBoundReport, CurveError> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(CurveError::InvalidParameter(format!(
            "rho must lie in (0, 1), got {rho}"
        )));
    }
    if grid == 0 {
        return Err(CurveError::InvalidParameter("grid must be positive".into()));
    }
    let k = branch.k() as i32;
    let mut level_infima = Vec::with_capacity(3);
    let mut best = (f64::INFINITY, Complex64::new(0.0, 0.0));
    for level in 0..3 {
        let rings = grid << level;
        let angles = (4 * rings).max(8);
        let mut level_best = (f64::INFINITY, Complex64::new(0.0, 0.0));
        for i in 1..=rings {
            let r = rho * i as f64 / rings as f64;
            for j in 0..angles {
                let z = Complex64::from_polar(r, 2.0 * PI * j as f64 / angles as f64);
                let ratio = complex_norm(&branch.eval_unchecked(z)) / r.powi(k);
                if ratio < level_best.0 {
                    level_best = (ratio, z);
                }
            }
        }
        level_infima.push(level_best.0);
        best = level_best;
    }
    let violations = collapsed_refinements(&level_infima);
    Ok(NormLowerBoundReport {
        infimum: best.0,
        argmin: best.1,
        level_infima,
        leading_ratio: complex_norm(&branch.leading_vector()),
        violations,
    })
}

fn collapsed_refinements(level_infima: &[f64]) -> usize {
    let collapses = level_infima.windows(2).filter(|w| w[1] < 0.5 * w[0]).count();
    collapses + usize::from(level_infima.iter().any(|&m| !(m > 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{builtin_germ, TruncatedSeries, BUILTIN_GERMS};

    fn line() -> PuiseuxBranch {
        PuiseuxBranch::new(1, Complex64::new(1.0, 0.0), vec![TruncatedSeries::zero(1)]).unwrap()
    }

    #[test]
    fn identity_and_straight_segment() {
        let cusp = PuiseuxBranch::monomial_cusp(2, 3).unwrap();
        let z = Complex64::new(0.3, 0.4);
        assert_eq!(geodesic_distance(&cusp, z, z).unwrap(), 0.0);
        for x in [-0.9, -0.25, 0.5, 1.0] {
            let d = geodesic_distance(&line(), Complex64::new(0.0, 0.0), Complex64::new(x, 0.0)).unwrap();
            assert!((d - f64::abs(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn cusp_distance_on_real_axis_matches_closed_form() {
        // ‖φ'(t)‖ = 2t·sqrt(1 + 9t²/4); ∫₀^x = ((4 + 9x²)^{3/2} − 8)/27
        let cusp = PuiseuxBranch::monomial_cusp(2, 3).unwrap();
        let x: f64 = 0.8;
        let exact = ((4.0 + 9.0 * x * x).powf(1.5) - 8.0) / 27.0;
        let d = geodesic_distance(&cusp, Complex64::new(0.0, 0.0), Complex64::new(x, 0.0)).unwrap();
        assert!((d - exact).abs() < 1e-10);
    }

    #[test]
    fn symmetric_in_arguments() {
        let cusp = PuiseuxBranch::monomial_cusp(3, 4).unwrap();
        let a = Complex64::new(0.2, -0.5);
        let b = Complex64::new(-0.6, 0.1);
        let ab = geodesic_distance(&cusp, a, b).unwrap();
        let ba = geodesic_distance(&cusp, b, a).unwrap();
        assert!((ab - ba).abs() < 1e-12);
    }

    #[test]
    fn outside_disk_rejected() {
        assert!(geodesic_distance(&line(), Complex64::new(0.0, 0.0), Complex64::new(1.2, 0.0)).is_err());
    }

    #[test]
    fn cusp_lower_bound_is_at_least_one() {
        let cusp = PuiseuxBranch::monomial_cusp(2, 3).unwrap();
        let report = norm_lower_bound_check(&cusp, 0.5, 8).unwrap();
        assert!(report.infimum >= 1.0);
        assert_eq!(report.violations, 0);
        assert_eq!(report.leading_ratio, 1.0);
    }

    #[test]
    fn cusp_infimum_sits_on_innermost_ring() {
        // ‖φ(z)‖/|z|² = sqrt(1 + |z|²) grows with |z|.
        let cusp = PuiseuxBranch::monomial_cusp(2, 3).unwrap();
        let report = norm_lower_bound_check(&cusp, 0.9, 8).unwrap();
        let innermost = 0.9 / 32.0;
        assert!((report.argmin.norm() - innermost).abs() < 1e-12);
        assert!((report.infimum - (1.0 + innermost * innermost).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn line_ratio_is_identically_one() {
        let report = norm_lower_bound_check(&line(), 0.5, 4).unwrap();
        for m in &report.level_infima {
            assert!((m - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn degrading_ratio_is_flagged() {
        // The normal form rules out ‖φ‖ = o(|z|^k), so feed the detector directly.
        assert_eq!(collapsed_refinements(&[1.0, 0.4, 0.1]), 2);
        assert_eq!(collapsed_refinements(&[1.0, 0.9, 0.8]), 0);
        assert_eq!(collapsed_refinements(&[1.0, 0.9, 0.0]), 2);
    }

    #[test]
    fn all_builtins_pass_at_default_rho() {
        for id in BUILTIN_GERMS {
            let germ = builtin_germ(id).unwrap();
            let report = norm_lower_bound_check(germ.branch(), DEFAULT_RHO, 8).unwrap();
            assert_eq!(report.violations, 0, "{id}");
            assert!(report.infimum > 0.0);
        }
    }
}
