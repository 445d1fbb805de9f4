//! Discrete tangential Markov factors as linear programs.

use std::cmp::Ordering;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::basis::PolynomialBasis;
use crate::curve::{norm_lower_bound_check, sample_real_trace, CurveError, CurveGerm, SampleSet, DEFAULT_RHO};
use crate::linalg::reduce;
use crate::lp::{maximize_over_halfspaces, LpError, SimplexOptions};
use crate::poly::MultiPoly;
use crate::regression::linear_fit;

/// Relative residual below which a basis column counts as dependent on the samples.
pub const RANK_TOLERANCE: f64 = 1e-10;
/// Largest admissible `max |R_ii| / min |R_ii|` of the reduced basis.
pub const CONDITION_LIMIT: f64 = 1e12;
/// Relative tolerance for the objective on polynomials vanishing on the samples.
pub const CONSISTENCY_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum MarkovError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("too few samples: {samples} points for a basis of dimension {basis}")]
    TooFewSamples { samples: usize, basis: usize },
    #[error(
        "unbounded: the samples do not determine the derivative at degree {degree}; add samples or lower the degree"
    )]
    Unbounded { degree: u32 },
    #[error("basis is ill-conditioned at degree {degree} (condition estimate {condition:e}); lower the degree or rescale the box")]
    Conditioning { degree: u32, condition: f64 },
    #[error("linear program failed: {0}")]
    Lp(#[from] LpError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("cell degree={degree}, epsilon={epsilon}: {source}")]
    Cell {
        degree: u32,
        epsilon: f64,
        source: Box<MarkovError>,
    },
}

#[derive(Clone, Debug)]
pub struct MarkovProblem {
    pub samples: SampleSet,
    pub x0: Vec<f64>,
    pub v: Vec<f64>,
    pub degree: u32,
    pub radius: f64,
}

impl MarkovProblem {
    pub fn new(samples: SampleSet, x0: Vec<f64>, v: Vec<f64>, degree: u32, radius: f64) -> Result<Self, MarkovError> {
        if samples.is_empty() {
            return Err(MarkovError::InvalidProblem("empty sample set".into()));
        }
        if !samples.real_only {
            return Err(MarkovError::InvalidProblem("Markov factors need real samples".into()));
        }
        let n = samples.points[0].image.len();
        if samples.points.iter().any(|p| p.image.len() != n) || x0.len() != n || v.len() != n {
            return Err(MarkovError::InvalidProblem(format!(
                "samples, basepoint and direction must all have dimension {n}"
            )));
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(MarkovError::InvalidProblem(format!(
                "direction has norm {norm}, expected 1"
            )));
        }
        Ok(Self {
            samples,
            x0,
            v,
            degree,
            radius,
        })
    }

    /// Problem on the real trace of `germ` at scale `eps`, along its tangent.
    pub fn for_germ(germ: &CurveGerm, eps: f64, density: usize, degree: u32) -> Result<Self, MarkovError> {
        let samples = sample_real_trace(germ, eps, density)?;
        Self::new(
            samples,
            germ.basepoint().to_vec(),
            germ.tangent_vector(),
            degree,
            germ.ball_radius(eps),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MarkovStatus {
    Optimal,
    /// Optimal after dropping basis elements that are dependent on the samples
    /// (the samples lie on an algebraic curve).
    Degenerate,
}

impl MarkovStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            MarkovStatus::Optimal => "optimal",
            MarkovStatus::Degenerate => "degenerate",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LpStats {
    pub iterations: usize,
    /// `max_i |p(x_i)| − 1` for the extremal polynomial.
    pub max_residual: f64,
    pub rank: usize,
    pub condition: f64,
}

#[derive(Clone, Debug)]
pub struct MarkovResult {
    pub factor: f64,
    pub basis: PolynomialBasis,
    /// Extremal polynomial in `basis` coordinates.
    pub coefficients: Vec<f64>,
    pub status: MarkovStatus,
    pub lp_stats: LpStats,
}

impl MarkovResult {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.basis
            .eval_real(x)
            .iter()
            .zip(&self.coefficients)
            .map(|(b, c)| b * c)
            .sum()
    }
}

/// Row `ℓ` with `ℓ·c = D_v p(x₀)` in `basis` coordinates.
pub fn directional_derivative_functional(basis: &PolynomialBasis, x0: &[f64], v: &[f64]) -> Vec<f64> {
    basis.directional_derivative_functional(x0, v)
}

/// `sup{ |D_v p(x₀)| : deg p ≤ n, |p(x_i)| ≤ 1 for every sample }`.
pub fn markov_factor(problem: &MarkovProblem) -> Result<MarkovResult, MarkovError> {
    let points: Vec<Vec<Complex64>> = problem.samples.images();
    let x0c: Vec<Complex64> = problem.x0.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let basis = PolynomialBasis::bounding_box(problem.degree, &points, &[x0c]);
    if problem.degree == 0 {
        return Ok(MarkovResult {
            factor: 0.0,
            coefficients: vec![1.0],
            basis,
            status: MarkovStatus::Optimal,
            lp_stats: LpStats {
                iterations: 0,
                max_residual: 0.0,
                rank: 1,
                condition: 1.0,
            },
        });
    }
    if points.len() < basis.len() {
        return Err(MarkovError::TooFewSamples {
            samples: points.len(),
            basis: basis.len(),
        });
    }
    let rows: Vec<Vec<Complex64>> = points.iter().map(|p| basis.eval(p)).collect();
    let columns: Vec<Vec<Complex64>> = (0..basis.len())
        .map(|j| rows.iter().map(|r| Complex64::new(r[j].re, 0.0)).collect())
        .collect();
    let reduced = reduce(&columns, RANK_TOLERANCE);
    if reduced.condition > CONDITION_LIMIT {
        return Err(MarkovError::Conditioning {
            degree: problem.degree,
            condition: reduced.condition,
        });
    }
    let g: Vec<Complex64> = basis
        .directional_derivative_functional(&problem.x0, &problem.v)
        .into_iter()
        .map(|x| Complex64::new(x, 0.0))
        .collect();
    let h: Vec<f64> = reduced
        .transform_functional(&g, CONSISTENCY_TOLERANCE)
        .map_err(|_| MarkovError::Unbounded { degree: problem.degree })?
        .into_iter()
        .map(|x| x.re)
        .collect();
    let rank = reduced.rank();
    let mut constraints = Vec::with_capacity(2 * points.len() * rank);
    for i in 0..points.len() {
        for sign in [1.0, -1.0] {
            constraints.extend(reduced.q.iter().map(|col| sign * col[i].re));
        }
    }
    let options = SimplexOptions::default();
    let mut best: Option<(f64, Vec<f64>, usize)> = None;
    let mut iterations = 0;
    for sign in [1.0, -1.0] {
        let objective: Vec<f64> = h.iter().map(|x| sign * x).collect();
        let solution =
            maximize_over_halfspaces(&constraints, 2 * points.len(), &objective, &options).map_err(|e| match e {
                LpError::Unbounded => MarkovError::Unbounded { degree: problem.degree },
                other => MarkovError::Lp(other),
            })?;
        iterations += solution.iterations;
        if best.as_ref().is_none_or(|b| solution.value > b.0) {
            best = Some((solution.value, solution.a, solution.iterations));
        }
    }
    let (factor, a, _) = best.expect("two orientations solved");
    let a: Vec<Complex64> = a.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
    let coefficients: Vec<f64> = reduced
        .coefficients(&a, basis.len())
        .into_iter()
        .map(|c| c.re)
        .collect();
    let max_abs = rows
        .iter()
        .map(|r| r.iter().zip(&coefficients).map(|(b, c)| b.re * c).sum::<f64>().abs())
        .fold(0.0, f64::max);
    Ok(MarkovResult {
        factor: factor.max(0.0),
        basis,
        coefficients,
        status: if reduced.dropped.is_empty() {
            MarkovStatus::Optimal
        } else {
            MarkovStatus::Degenerate
        },
        lp_stats: LpStats {
            iterations,
            max_residual: max_abs - 1.0,
            rank,
            condition: reduced.condition,
        },
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitResult {
    pub alpha_deg: f64,
    pub alpha_eps: f64,
    pub intercept: f64,
    pub residual_norm: f64,
    /// `(degree, ε, M)` of the cells used in the fit.
    pub design: Vec<(u32, f64, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingCell {
    pub degree: u32,
    pub epsilon: f64,
    pub radius: f64,
    pub factor: f64,
    pub status: MarkovStatus,
    /// False for cells at the largest ε, which the fit leaves out.
    pub in_fit: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingStudy {
    pub fit: FitResult,
    /// Sorted by `(degree, ε)`.
    pub cells: Vec<ScalingCell>,
}

fn distinct_sorted<T: Copy + PartialOrd>(values: &[T]) -> Vec<T> {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    v.dedup_by(|a, b| a == b);
    v
}

/// Fits `log M = α_deg·log n + α_eps·log(1/ε) + b` over a degree × ε grid,
/// leaving out the largest ε.
pub fn scaling_study(
    germ: &CurveGerm,
    degrees: &[u32],
    epsilons: &[f64],
    density: usize,
) -> Result<ScalingStudy, MarkovError> {
    let degrees = distinct_sorted(degrees);
    let epsilons = distinct_sorted(epsilons);
    if degrees.len() < 3 || epsilons.len() < 3 {
        return Err(MarkovError::InvalidProblem(format!(
            "a scaling fit needs at least 3 distinct degrees and 3 distinct epsilons, got {} and {}",
            degrees.len(),
            epsilons.len()
        )));
    }
    if degrees[0] == 0 {
        return Err(MarkovError::InvalidProblem("degrees must be positive".into()));
    }
    if epsilons.iter().any(|&e| !(e > 0.0 && e <= 1.0)) {
        return Err(MarkovError::InvalidProblem("epsilons must lie in (0, 1]".into()));
    }
    let largest = *epsilons.last().expect("nonempty");
    let grid: Vec<(u32, f64)> = degrees
        .iter()
        .flat_map(|&d| epsilons.iter().map(move |&e| (d, e)))
        .collect();
    let cells = grid
        .par_iter()
        .map(|&(degree, epsilon)| {
            let wrap = |source: MarkovError| MarkovError::Cell {
                degree,
                epsilon,
                source: Box::new(source),
            };
            let problem = MarkovProblem::for_germ(germ, epsilon, density, degree).map_err(wrap)?;
            let result = markov_factor(&problem).map_err(wrap)?;
            Ok(ScalingCell {
                degree,
                epsilon,
                radius: problem.radius,
                factor: result.factor,
                status: result.status,
                in_fit: epsilon < largest,
            })
        })
        .collect::<Result<Vec<_>, MarkovError>>()?;
    let used: Vec<&ScalingCell> = cells.iter().filter(|c| c.in_fit).collect();
    if let Some(bad) = used.iter().find(|c| !(c.factor > 0.0)) {
        return Err(MarkovError::Cell {
            degree: bad.degree,
            epsilon: bad.epsilon,
            source: Box::new(MarkovError::InvalidProblem(
                "zero Markov factor cannot enter a log-log fit".into(),
            )),
        });
    }
    let log_n: Vec<f64> = used.iter().map(|c| f64::from(c.degree).ln()).collect();
    let log_inv_eps: Vec<f64> = used.iter().map(|c| -c.epsilon.ln()).collect();
    let log_m: Vec<f64> = used.iter().map(|c| c.factor.ln()).collect();
    let fit = linear_fit(&[log_n, log_inv_eps], &log_m)
        .ok_or_else(|| MarkovError::InvalidProblem("degenerate scaling design".into()))?;
    Ok(ScalingStudy {
        fit: FitResult {
            alpha_deg: fit.coefficients[0],
            alpha_eps: fit.coefficients[1],
            intercept: fit.coefficients[2],
            residual_norm: fit.residual_norm,
            design: used.iter().map(|c| (c.degree, c.epsilon, c.factor)).collect(),
        },
        cells,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CauchyReport {
    pub lhs: f64,
    pub rhs: f64,
    /// Constant `1/‖[z^k]φ‖` multiplying the Cauchy estimate.
    pub constant: f64,
    pub slack: f64,
    pub holds: bool,
}

/// Compares `|D_v p(x₀)|` with `c·r^{−k}·max_{|z|=r} |p(x₀ + φ(z))|`.
///
/// The maximum over the closed disk is attained on the circle; with more
/// circle points than `deg(p∘φ)` the discrete maximum already dominates the
/// `z^k` Taylor coefficient.
pub fn cauchy_derivative_check(
    germ: &CurveGerm,
    p: &MultiPoly,
    r: f64,
    quad_points: usize,
) -> Result<CauchyReport, CurveError> {
    let branch = germ.branch();
    let r0 = DEFAULT_RHO;
    if !(r > 0.0 && r < r0) {
        return Err(CurveError::InvalidParameter(format!(
            "Cauchy radius must lie in (0, {r0}), got {r}"
        )));
    }
    if quad_points < 8 {
        return Err(CurveError::InvalidParameter("need at least 8 circle points".into()));
    }
    if p.n() != germ.ambient_dim() {
        return Err(CurveError::InvalidParameter(format!(
            "polynomial in {} variables, germ in dimension {}",
            p.n(),
            germ.ambient_dim()
        )));
    }
    let report = norm_lower_bound_check(branch, r0, 4)?;
    let constant = 1.0 / report.leading_ratio;
    let lhs = p.directional_derivative(germ.basepoint(), &germ.tangent_vector()).abs();
    let mut max_modulus = 0.0f64;
    for j in 0..quad_points {
        let z = Complex64::from_polar(r, std::f64::consts::TAU * j as f64 / quad_points as f64);
        let point = germ.point_at(z)?;
        max_modulus = max_modulus.max(p.eval(&point).norm());
    }
    let rhs = constant * r.powi(-(branch.k() as i32)) * max_modulus;
    let tolerance = 1e-9 * rhs.max(lhs) + 1e-12;
    Ok(CauchyReport {
        lhs,
        rhs,
        constant,
        slack: rhs - lhs,
        holds: lhs <= rhs + tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{builtin_germ, chebyshev_interval_points};

    fn interval_problem(count: usize, x0: f64, degree: u32) -> MarkovProblem {
        let samples = SampleSet::from_points(chebyshev_interval_points(-1.0, 1.0, count), "interval");
        MarkovProblem::new(samples, vec![x0], vec![1.0], degree, 1.0).unwrap()
    }

    #[test]
    fn endpoint_factor_is_chebyshev_derivative() {
        let result = markov_factor(&interval_problem(401, 1.0, 3)).unwrap();
        assert!((result.factor - 9.0).abs() < 0.09, "{}", result.factor);
        assert_eq!(result.status, MarkovStatus::Optimal);
        assert!(result.lp_stats.max_residual < 1e-6);
    }

    #[test]
    fn interior_factor_at_origin() {
        let result = markov_factor(&interval_problem(401, 0.0, 3)).unwrap();
        assert!((result.factor - 3.0).abs() < 0.03);
    }

    #[test]
    fn degree_zero_is_zero() {
        assert_eq!(markov_factor(&interval_problem(11, 1.0, 0)).unwrap().factor, 0.0);
    }

    #[test]
    fn too_few_samples() {
        assert!(matches!(
            markov_factor(&interval_problem(3, 1.0, 5)),
            Err(MarkovError::TooFewSamples { .. })
        ));
    }

    #[test]
    fn extremal_polynomial_equioscillates() {
        let result = markov_factor(&interval_problem(801, 1.0, 6)).unwrap();
        let touching = chebyshev_interval_points(-1.0, 1.0, 801)
            .iter()
            .filter(|p| (result.eval(&[p[0].re]).abs() - 1.0).abs() < 1e-6)
            .count();
        assert!(touching >= 7, "{touching}");
    }

    #[test]
    fn cusp_factor_matches_even_chebyshev_oracle() {
        // On the cusp, p(t², t³) ranges over polynomials in s = t/ε of degree ≤ 3n
        // without a linear term, and D_x p(0) is the t² coefficient over ε².
        let germ = builtin_germ("cusp_2_3").unwrap();
        for (degree, eps) in [(2u32, 0.5), (3, 0.25)] {
            let problem = MarkovProblem::for_germ(&germ, eps, 200, degree).unwrap();
            let result = markov_factor(&problem).unwrap();
            let m = (3 * degree) & !1;
            let expected = f64::from(m * m) / (2.0 * eps * eps);
            assert!(
                (result.factor / expected - 1.0).abs() < 1e-3,
                "{} vs {expected}",
                result.factor
            );
            // y² − x³ first appears at degree 3
            let expected_status = if degree >= 3 {
                MarkovStatus::Degenerate
            } else {
                MarkovStatus::Optimal
            };
            assert_eq!(result.status, expected_status);
        }
    }

    #[test]
    fn cauchy_check_on_coordinate_function_is_tight() {
        let germ = builtin_germ("cusp_2_3").unwrap();
        let report = cauchy_derivative_check(&germ, &MultiPoly::coordinate(2, 0), 0.25, 64).unwrap();
        assert!((report.lhs - 1.0).abs() < 1e-15);
        assert!((report.rhs - 1.0).abs() < 1e-12);
        assert!(report.holds);
        assert!(
            cauchy_derivative_check(&germ, &MultiPoly::constant(2, 3.0), 0.25, 64)
                .unwrap()
                .holds
        );
        assert!(cauchy_derivative_check(&germ, &MultiPoly::constant(2, 3.0), 0.6, 64).is_err());
    }
}
