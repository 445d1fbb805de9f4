//! Green functions with pole at infinity: closed forms for segments, LP lower
//! bounds from the Siciak extremal function for sampled sets, and the
//! potential-theoretic inequality checks built on them.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::basis::PolynomialBasis;
use crate::curve::{chebyshev_grid, is_real_point, sample_real_trace, CurveError, CurveGerm};
use crate::linalg::{reduce, ReducedBasis};
use crate::lp::{maximize_over_halfspaces, LpError, SimplexOptions};
use crate::markov::{CONDITION_LIMIT, CONSISTENCY_TOLERANCE, RANK_TOLERANCE};
use crate::poly::MultiPoly;

pub const DEFAULT_FACETS: usize = 16;
/// Probe points whose right-hand side falls below this are excluded from ratios.
pub const RHS_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum GreenError {
    #[error("degenerate segment: endpoints coincide")]
    DegenerateSegment,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("too few samples: {samples} points for a basis of dimension {basis}")]
    TooFewSamples { samples: usize, basis: usize },
    #[error("basis is ill-conditioned at degree {degree} (condition estimate {condition:e})")]
    Conditioning { degree: u32, condition: f64 },
    #[error("unbounded: the sample set is too small to bound degree-{degree} polynomials at the evaluation point")]
    Unbounded { degree: u32 },
    #[error("linear program failed: {0}")]
    Lp(LpError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("probe at delta = {delta:e} has Green value {value:e}; the probe rule landed on the set")]
    ProbeOnSet { delta: f64, value: f64 },
    #[error("probe grid: {0}")]
    ProbeGrid(String),
}

/// `log |z + √(z² − 1)|` with the branch making the modulus at least 1.
pub fn green_interval(z: Complex64) -> f64 {
    if z.im == 0.0 && z.re.abs() <= 1.0 {
        return 0.0;
    }
    let s = (0.5 * (z * z - 1.0).ln()).exp();
    let mut w = z + s;
    if w.norm() < 1.0 {
        w = z - s;
    }
    w.norm().ln().max(0.0)
}

/// Green function of the segment `[a, b] ⊂ ℂ`, by affine pullback to `[−1, 1]`.
pub fn green_segment(z: Complex64, a: Complex64, b: Complex64) -> Result<f64, GreenError> {
    if a == b {
        return Err(GreenError::DegenerateSegment);
    }
    let u = (2.0 * z - a - b) / (b - a);
    // Snap roundoff so points of the segment map exactly onto [−1, 1].
    let u = if u.im.abs() <= 1e-15 * (1.0 + u.re.abs()) {
        Complex64::new(u.re, 0.0)
    } else {
        u
    };
    Ok(green_interval(u))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GreenMethod {
    ClosedForm,
    LpSiciak,
}

impl GreenMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            GreenMethod::ClosedForm => "closed_form",
            GreenMethod::LpSiciak => "lp_siciak",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GreenEvaluation {
    pub point: Vec<Complex64>,
    pub value: f64,
    pub method: GreenMethod,
    pub degree_used: Option<u32>,
    /// `value − relaxation_slack` is a lower bound of the degree-limited
    /// extremal function; 0 when no polygonal relaxation was needed.
    pub relaxation_slack: f64,
    pub iterations: usize,
}

impl GreenEvaluation {
    pub fn closed_form(point: Vec<Complex64>, value: f64) -> Self {
        Self {
            point,
            value,
            method: GreenMethod::ClosedForm,
            degree_used: None,
            relaxation_slack: 0.0,
            iterations: 0,
        }
    }
}

/// Degree-limited Siciak extremal function of a finite set, reusable across
/// evaluation points.
///
/// `(1/n)·log max{ Re p(z) : deg p ≤ n, Re(e^{2πim/F} p(x_i)) ≤ 1 }`; the
/// polygon contains the unit disk and sits inside the disk of radius
/// `1/cos(π/F)`. For real samples and a real point the coefficients are
/// restricted to ℝ and the constraint is `|p(x_i)| ≤ 1` exactly.
pub struct SiciakProblem {
    points: Vec<Vec<Complex64>>,
    degree: u32,
    facets: usize,
    basis: PolynomialBasis,
    reduced: ReducedBasis,
    real_samples: bool,
    real_rows: OnceLock<Vec<f64>>,
    complex_rows: OnceLock<Vec<f64>>,
}

impl SiciakProblem {
    pub fn new(points: Vec<Vec<Complex64>>, degree: u32, facets: usize) -> Result<Self, GreenError> {
        if degree == 0 {
            return Err(GreenError::InvalidParameter("degree must be at least 1".into()));
        }
        if facets < 8 {
            return Err(GreenError::InvalidParameter(format!(
                "facets must be at least 8, got {facets}"
            )));
        }
        if points.is_empty() {
            return Err(GreenError::InvalidParameter("empty sample set".into()));
        }
        let n = points[0].len();
        if points.iter().any(|p| p.len() != n) {
            return Err(GreenError::InvalidParameter("sample points differ in dimension".into()));
        }
        let basis = PolynomialBasis::bounding_box(degree, &points, &[]);
        if points.len() < basis.len() {
            return Err(GreenError::TooFewSamples {
                samples: points.len(),
                basis: basis.len(),
            });
        }
        let columns: Vec<Vec<Complex64>> = {
            let rows: Vec<Vec<Complex64>> = points.iter().map(|p| basis.eval(p)).collect();
            (0..basis.len()).map(|j| rows.iter().map(|r| r[j]).collect()).collect()
        };
        let reduced = reduce(&columns, RANK_TOLERANCE);
        if reduced.condition > CONDITION_LIMIT {
            return Err(GreenError::Conditioning {
                degree,
                condition: reduced.condition,
            });
        }
        let real_samples = points.iter().all(|p| is_real_point(p));
        Ok(Self {
            points,
            degree,
            facets,
            basis,
            reduced,
            real_samples,
            real_rows: OnceLock::new(),
            complex_rows: OnceLock::new(),
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn facets(&self) -> usize {
        self.facets
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `log(1/cos(π/F)) / n`.
    pub fn relaxation_slack(&self) -> f64 {
        (1.0 / (PI / self.facets as f64).cos()).ln() / f64::from(self.degree)
    }

    fn real_rows(&self) -> &[f64] {
        self.real_rows.get_or_init(|| {
            let q = &self.reduced.q;
            let mut rows = Vec::with_capacity(2 * self.points.len() * q.len());
            for i in 0..self.points.len() {
                for sign in [1.0, -1.0] {
                    rows.extend(q.iter().map(|col| sign * col[i].re));
                }
            }
            rows
        })
    }

    fn complex_rows(&self) -> &[f64] {
        self.complex_rows.get_or_init(|| {
            let q = &self.reduced.q;
            let rank = q.len();
            let mut rows = Vec::with_capacity(self.points.len() * self.facets * 2 * rank);
            for i in 0..self.points.len() {
                for m in 0..self.facets {
                    let omega = Complex64::from_polar(1.0, 2.0 * PI * m as f64 / self.facets as f64);
                    rows.extend(q.iter().map(|col| (omega * col[i]).re));
                    rows.extend(q.iter().map(|col| -(omega * col[i]).im));
                }
            }
            rows
        })
    }

    pub fn evaluate(&self, z: &[Complex64]) -> Result<GreenEvaluation, GreenError> {
        if z.len() != self.basis.ambient_dim() {
            return Err(GreenError::InvalidParameter(format!(
                "evaluation point has dimension {}, samples have {}",
                z.len(),
                self.basis.ambient_dim()
            )));
        }
        let unbounded = GreenError::Unbounded { degree: self.degree };
        let h = self
            .reduced
            .transform_functional(&self.basis.eval(z), CONSISTENCY_TOLERANCE)
            .map_err(|_| unbounded)?;
        let options = SimplexOptions::default();
        let lp = |e: LpError| match e {
            LpError::Unbounded => GreenError::Unbounded { degree: self.degree },
            other => GreenError::Lp(other),
        };
        let (maximum, slack, iterations) = if self.real_samples && is_real_point(z) {
            let rows = self.real_rows();
            let mut best = f64::NEG_INFINITY;
            let mut iterations = 0;
            for sign in [1.0, -1.0] {
                let objective: Vec<f64> = h.iter().map(|x| sign * x.re).collect();
                let s = maximize_over_halfspaces(rows, 2 * self.points.len(), &objective, &options).map_err(lp)?;
                iterations += s.iterations;
                best = best.max(s.value);
            }
            (best, 0.0, iterations)
        } else {
            let rows = self.complex_rows();
            let objective: Vec<f64> = h.iter().map(|x| x.re).chain(h.iter().map(|x| -x.im)).collect();
            let s =
                maximize_over_halfspaces(rows, self.points.len() * self.facets, &objective, &options).map_err(lp)?;
            (s.value, self.relaxation_slack(), s.iterations)
        };
        // Within the LP feasibility tolerance of 1 the point is on the set.
        let value = if maximum > 1.0 + options.tolerance {
            maximum.ln() / f64::from(self.degree)
        } else {
            0.0
        };
        Ok(GreenEvaluation {
            point: z.to_vec(),
            value,
            method: GreenMethod::LpSiciak,
            degree_used: Some(self.degree),
            relaxation_slack: slack,
            iterations,
        })
    }
}

/// One-shot Siciak evaluation; see [`SiciakProblem`].
pub fn siciak_lp(
    points: &[Vec<Complex64>],
    z: &[Complex64],
    degree: u32,
    facets: usize,
) -> Result<GreenEvaluation, GreenError> {
    SiciakProblem::new(points.to_vec(), degree, facets)?.evaluate(z)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BernsteinWalshReport {
    pub lhs: f64,
    pub rhs: f64,
    pub sup_norm: f64,
    pub slack: f64,
    pub holds: bool,
}

/// `|p(z)| ≤ ‖p‖_E · exp(deg p · V_E(z))` with `‖p‖_E` the maximum over the samples.
pub fn bernstein_walsh_check(
    p: &MultiPoly,
    samples: &[Vec<Complex64>],
    z: &[Complex64],
    green_value: f64,
) -> BernsteinWalshReport {
    let sup_norm = samples.iter().map(|x| p.eval(x).norm()).fold(0.0, f64::max);
    let lhs = p.eval(z).norm();
    let rhs = sup_norm * (f64::from(p.degree()) * green_value).exp();
    BernsteinWalshReport {
        lhs,
        rhs,
        sup_norm,
        slack: rhs - lhs,
        holds: lhs <= rhs * (1.0 + 1e-9) + 1e-300,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BosReport {
    pub sup: f64,
    pub bound: f64,
    pub constant: f64,
    pub argmax: Complex64,
    pub slack: f64,
    pub holds: bool,
}

/// `sup_{D(b,r)} V_{[−ε,ε]} ≤ c·log(1 + r)` with `c = max{1, 2/(ε − |b|)}`,
/// evaluated on a polar grid with `grid` rings and `8·grid` angles.
pub fn bos_disk_bound_check(b: Complex64, r: f64, eps: f64, grid: usize) -> Result<BosReport, GreenError> {
    if b.im != 0.0 {
        return Err(GreenError::InvalidParameter("disk center must be real".into()));
    }
    if !(eps > 0.0) {
        return Err(GreenError::InvalidParameter("epsilon must be positive".into()));
    }
    let distance = eps - b.re.abs();
    if !(distance > 0.0) {
        return Err(GreenError::InvalidParameter(format!(
            "center {} must lie strictly inside [-{eps}, {eps}]",
            b.re
        )));
    }
    if !(r > 0.0 && r < distance) {
        return Err(GreenError::InvalidParameter(format!(
            "radius must lie in (0, {distance}), got {r}"
        )));
    }
    if grid == 0 {
        return Err(GreenError::InvalidParameter("grid must be positive".into()));
    }
    let a = Complex64::new(-eps, 0.0);
    let e = Complex64::new(eps, 0.0);
    let angles = 8 * grid;
    let mut sup = 0.0;
    let mut argmax = b;
    for i in 1..=grid {
        let radius = r * i as f64 / grid as f64;
        for j in 0..angles {
            let w = b + Complex64::from_polar(radius, 2.0 * PI * j as f64 / angles as f64);
            let v = green_segment(w, a, e)?;
            if v > sup {
                sup = v;
                argmax = w;
            }
        }
    }
    let constant = (2.0 / distance).max(1.0);
    let bound = constant * r.ln_1p();
    Ok(BosReport {
        sup,
        bound,
        constant,
        argmax,
        slack: bound - sup,
        holds: sup <= bound * (1.0 + 1e-12),
    })
}

/// Green function of the star set `ε·R` of `germ` in the parameter plane: the
/// closed form when all segments lie on one line through 0, an LP otherwise.
pub struct StarGreen {
    segment: Option<(Complex64, Complex64)>,
    lp: Option<SiciakProblem>,
}

impl StarGreen {
    pub fn new(germ: &CurveGerm, eps: f64, degree: u32, density: usize) -> Result<Self, GreenError> {
        let angles = germ.segment_angles();
        let directions: Vec<Complex64> = angles.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
        let collinear = match directions.as_slice() {
            [d] => Some((Complex64::new(0.0, 0.0), d * eps)),
            [d1, d2] if (d1 + d2).norm() < 1e-12 => Some((d1 * eps, d2 * eps)),
            _ => None,
        };
        if let Some(segment) = collinear {
            return Ok(Self {
                segment: Some(segment),
                lp: None,
            });
        }
        let grid = chebyshev_grid(eps, density);
        let mut points = vec![vec![Complex64::new(0.0, 0.0)]];
        for d in &directions {
            points.extend(grid[1..].iter().map(|&t| vec![d * t]));
        }
        Ok(Self {
            segment: None,
            lp: Some(SiciakProblem::new(points, degree, DEFAULT_FACETS)?),
        })
    }

    pub fn evaluate(&self, z: Complex64) -> Result<f64, GreenError> {
        match (&self.segment, &self.lp) {
            (Some((a, b)), _) => green_segment(z, *a, *b),
            (None, Some(lp)) => Ok(lp.evaluate(&[z])?.value),
            (None, None) => unreachable!("one representation is always set"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Proposition5Report {
    pub degree: u32,
    pub max_ratio: f64,
    pub argmax: Complex64,
    pub lhs_at_max: f64,
    pub rhs_at_max: f64,
    pub evaluated: usize,
    /// Grid points with right-hand side below [`RHS_TOLERANCE`].
    pub excluded: usize,
}

/// Max over a polar grid of the unit parameter disk of
/// `V_{trace}(x₀ + φ(z)) / V_{εR}(z)`, the trace Green function coming from
/// the Siciak LP on `sample_real_trace(germ, ε, density)`.
pub fn proposition5_check(
    germ: &CurveGerm,
    eps: f64,
    degree: u32,
    grid: usize,
    density: usize,
) -> Result<Proposition5Report, GreenError> {
    if grid == 0 {
        return Err(GreenError::ProbeGrid("grid must be positive".into()));
    }
    let samples = sample_real_trace(germ, eps, density)?;
    let lhs = SiciakProblem::new(samples.images(), degree, DEFAULT_FACETS)?;
    let rhs = StarGreen::new(germ, eps, degree, density)?;
    let angles = 4 * grid;
    let probes: Vec<Complex64> = (1..=grid)
        .flat_map(|i| {
            (0..angles).map(move |j| Complex64::from_polar(i as f64 / grid as f64, 2.0 * PI * j as f64 / angles as f64))
        })
        .collect();
    let evaluations = probes
        .par_iter()
        .map(|&z| -> Result<Option<(Complex64, f64, f64)>, GreenError> {
            let r = rhs.evaluate(z)?;
            if r <= RHS_TOLERANCE {
                return Ok(None);
            }
            let l = lhs.evaluate(&germ.point_at(z)?)?.value;
            Ok(Some((z, l, r)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let excluded = evaluations.iter().filter(|e| e.is_none()).count();
    let evaluated: Vec<(Complex64, f64, f64)> = evaluations.into_iter().flatten().collect();
    let Some(&(argmax, lhs_at_max, rhs_at_max)) =
        evaluated
            .iter()
            .fold(None, |best: Option<&(Complex64, f64, f64)>, cur| match best {
                Some(b) if b.1 / b.2 >= cur.1 / cur.2 => Some(b),
                _ => Some(cur),
            })
    else {
        return Err(GreenError::ProbeGrid("every probe point lies on the star set".into()));
    };
    Ok(Proposition5Report {
        degree,
        max_ratio: lhs_at_max / rhs_at_max,
        argmax,
        lhs_at_max,
        rhs_at_max,
        evaluated: evaluated.len(),
        excluded,
    })
}
