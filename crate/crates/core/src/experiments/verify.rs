//! The acceptance suite run by `verify`. Each criterion yields raw
//! measurement rows and one or more fit rows whose status is the verdict.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rayon::prelude::*;

use super::report::{csv_bytes, ReportRow, RowStatus};
use super::scenario::{format_complex, geodesic_slope, GEODESIC_SLOPE_TOLERANCE, HCP_TOLERANCE};
use super::{config::geometric, ExperimentError, StudyOutput};
use crate::curve::{builtin_germ, chebyshev_interval_points, norm_lower_bound_check, SampleSet, BUILTIN_GERMS};
use crate::green::{
    bernstein_walsh_check, bos_disk_bound_check, green_interval, proposition5_check, SiciakProblem, DEFAULT_FACETS,
};
use crate::hcp::{hcp_fit, interval_endpoint_probe};
use crate::markov::{cauchy_derivative_check, markov_factor, scaling_study, MarkovProblem};
use crate::poly::MultiPoly;
use crate::rng::Lcg;

pub const ENDPOINT_SAMPLES: usize = 2001;
pub const ENDPOINT_RELATIVE_TOLERANCE: f64 = 0.01;
pub const SCAN_EPSILONS: [f64; 4] = [1.0, 0.5, 0.25, 0.125];
pub const SCAN_DENSITY: usize = 200;
pub const INTERIOR_DEGREES: [u32; 6] = [3, 5, 7, 9, 11, 13];
pub const SCAN_DEGREES: [u32; 6] = [2, 3, 4, 6, 8, 12];
pub const INTERIOR_BAND: (f64, f64) = (0.9, 1.1);
pub const BOUNDARY_BAND: (f64, f64) = (1.9, 2.1);
pub const CUSP_DEGREE_BAND: (f64, f64) = (2.0, 4.2);
pub const CUSP_EPSILON_CEILING: f64 = 2.3;
pub const SICIAK_DEGREE: u32 = 16;
pub const SICIAK_TOLERANCE: f64 = 0.02;
pub const BW_POLYNOMIALS: usize = 100;
pub const BW_MAX_DEGREE: u32 = 10;
pub const BW_POINT: f64 = 1.5;
pub const BOS_TRIPLES: [(f64, f64, f64); 3] = [(0.0, 0.5, 1.0), (0.9, 0.05, 1.0), (0.5, 0.25, 1.0)];
pub const BOS_GRID: usize = 32;
pub const NORM_RHO: f64 = 0.5;
pub const NORM_GRID: usize = 8;
pub const CAUCHY_GERMS: [&str; 3] = ["cusp_2_3", "cusp_2_5", "cusp_3_4"];
pub const CAUCHY_POLYNOMIALS: usize = 50;
pub const CAUCHY_MAX_DEGREE: u32 = 8;
pub const CAUCHY_RADIUS: f64 = 0.25;
pub const CAUCHY_CIRCLE_POINTS: usize = 256;
pub const RATIO_EPSILON: f64 = 0.25;
pub const RATIO_DEGREES: (u32, u32) = (8, 12);
pub const RATIO_GRID: usize = 6;
pub const RATIO_DENSITY: usize = 100;
pub const RATIO_TOLERANCE: f64 = 0.10;
pub const VERIFY_TIME_LIMIT: Duration = Duration::from_secs(300);

type Criterion = fn(&str, u64) -> Result<StudyOutput, ExperimentError>;

/// Criteria 1 to 9 in order. Criterion 10 wraps them in [`verify_all`].
pub const CRITERIA: [(&str, Criterion); 9] = [
    ("c1_endpoint_markov", criterion_1),
    ("c2_interior_scaling", criterion_2),
    ("c3_boundary_scaling", criterion_3),
    ("c4_cusp_scaling", criterion_4),
    ("c5_interval_hcp", criterion_5),
    ("c6_geodesic_exponent", criterion_6),
    ("c7_siciak_convergence", criterion_7),
    ("c8_zero_violation_suites", criterion_8),
    ("c9_green_ratio_stability", criterion_9),
];

fn in_band(x: f64, band: (f64, f64)) -> (bool, f64) {
    let slack = (x - band.0).min(band.1 - x);
    (slack >= 0.0, slack)
}

fn numeric<E: std::fmt::Display>(study: &str) -> impl Fn(E) -> ExperimentError + '_ {
    move |e| ExperimentError::Numeric(format!("{study}: {e}"))
}

/// `M(n)` at the endpoint of `[−1, 1]` against `n²`.
pub fn criterion_1(name: &str, _seed: u64) -> Result<StudyOutput, ExperimentError> {
    let study = CRITERIA[0].0;
    let samples = SampleSet::from_points(chebyshev_interval_points(-1.0, 1.0, ENDPOINT_SAMPLES), "interval");
    let mut out = StudyOutput::default();
    let mut worst = f64::INFINITY;
    for n in 1..=10u32 {
        let problem = MarkovProblem::new(samples.clone(), vec![1.0], vec![1.0], n, 1.0).map_err(numeric(study))?;
        let factor = markov_factor(&problem).map_err(numeric(study))?.factor;
        let target = f64::from(n * n);
        let slack = ENDPOINT_RELATIVE_TOLERANCE - (factor - target).abs() / target;
        worst = worst.min(slack);
        out.raw.push(
            ReportRow::new(name, study, factor)
                .degree(n)
                .slack(slack)
                .pass(slack >= 0.0),
        );
    }
    let largest_error = ENDPOINT_RELATIVE_TOLERANCE - worst;
    out.fit.push(
        ReportRow::new(name, study, largest_error)
            .slack(worst)
            .pass(worst >= 0.0),
    );
    Ok(out)
}

fn scan_rows(
    name: &str,
    study: &str,
    germ_id: &str,
    degrees: &[u32],
) -> Result<(StudyOutput, f64, f64), ExperimentError> {
    let germ = builtin_germ(germ_id).map_err(numeric(study))?;
    let scan = scaling_study(&germ, degrees, &SCAN_EPSILONS, SCAN_DENSITY).map_err(numeric(study))?;
    let raw = scan
        .cells
        .iter()
        .map(|c| {
            ReportRow::new(name, study, c.factor)
                .degree(c.degree)
                .epsilon(c.epsilon)
                .status(if c.in_fit { RowStatus::Ok } else { RowStatus::Excluded })
        })
        .collect();
    Ok((
        StudyOutput { raw, fit: Vec::new() },
        scan.fit.alpha_deg,
        scan.fit.alpha_eps,
    ))
}

/// Degree exponent at an interior point of `[−1, 1]`.
pub fn criterion_2(name: &str, _seed: u64) -> Result<StudyOutput, ExperimentError> {
    let study = CRITERIA[1].0;
    let (mut out, alpha_deg, alpha_eps) = scan_rows(name, study, "interval_interior", &INTERIOR_DEGREES)?;
    let (ok, slack) = in_band(alpha_deg, INTERIOR_BAND);
    out.fit.push(
        ReportRow::new(name, study, alpha_eps)
            .fitted(alpha_deg)
            .slack(slack)
            .pass(ok),
    );
    Ok(out)
}

/// Degree exponent at the endpoint of `[0, 1]`.
pub fn criterion_3(name: &str, _seed: u64) -> Result<StudyOutput, ExperimentError> {
    let study = CRITERIA[2].0;
    let (mut out, alpha_deg, alpha_eps) = scan_rows(name, study, "interval_boundary", &SCAN_DEGREES)?;
    let (ok, slack) = in_band(alpha_deg, BOUNDARY_BAND);
    out.fit.push(
        ReportRow::new(name, study, alpha_eps)
            .fitted(alpha_deg)
            .slack(slack)
            .pass(ok),
    );
    Ok(out)
}

/// Multiplicity and both exponents at the `(t², t³)` cusp.
pub fn criterion_4(name: &str, _seed: u64) -> Result<StudyOutput, ExperimentError> {
    let study = CRITERIA[3].0;
    let germ = builtin_germ("cusp_2_3").map_err(numeric(study))?;
    let multiplicity = germ.branch().multiplicity().map_err(numeric(study))?;
    let (mut out, alpha_deg, alpha_eps) = scan_rows(name, study, "cusp_2_3", &SCAN_DEGREES)?;
    out.fit
        .push(ReportRow::new(name, format!("{study}_multiplicity"), f64::from(multiplicity)).pass(multiplicity == 2));
    let (deg_ok, deg_slack) = in_band(alpha_deg, CUSP_DEGREE_BAND);
    let eps_slack = CUSP_EPSILON_CEILING - alpha_eps;
    out.fit.push(
        ReportRow::new(name, study, alpha_eps)
            .fitted(alpha_deg)
            .slack(deg_slack.min(eps_slack))
            .pass(deg_ok && eps_slack >= 0.0),
    );
    Ok(out)
}

/// HCP exponent of the closed-form interval Green function at `1 + δ`.
pub fn criterion_5(name: &str, _seed: u64) -> Result<StudyOutput, ExperimentError> {
    let study = CRITERIA[4].0;
    let fit = hcp_fit(&geometric(1e-1, 1e-4, 13), interval_endpoint_probe).map_err(numeric(study))?;
    let slack = HCP_TOLERANCE - (fit.alpha - 0.5).abs();
    let raw = fit
        .deltas
        .iter()
        .zip(&fit.values)
        .map(|(&d, &v)| ReportRow::new(name, study, v).epsilon(d))
        .collect();
    Ok(StudyOutput {
        raw,
        fit: vec![ReportRow::new(name, study, fit.constant)
            .fitted(fit.alpha)
            .slack(slack)
            .pass(slack >= 0.0)],
    })
}

/// Slope of `log d(φ(0), φ(2^{−m}))` against `log 2^{−m}`, `m = 3..10`.
pub fn criterion_6(name: &str, _seed: u64) -> Result<StudyOutput, ExperimentError> {
    let base = CRITERIA[5].0;
    let mut out = StudyOutput::default();
    for id in ["cusp_2_3", "cusp_3_4"] {
        let study = format!("{base}_{id}");
        let germ = builtin_germ(id).map_err(numeric(base))?;
        let (points, slope) = geodesic_slope(&germ, 3, 10, 0.0)?;
        let k = f64::from(germ.branch().k());
        out.raw.extend(
            points
                .iter()
                .map(|&(r, d)| ReportRow::new(name, study.as_str(), d).epsilon(r)),
        );
        let slack = GEODESIC_SLOPE_TOLERANCE - (slope - k).abs();
        out.fit.push(
            ReportRow::new(name, study, k)
                .fitted(slope)
                .slack(slack)
                .pass(slack >= 0.0),
        );
    }
    Ok(out)
}

/// Degree-16 Siciak LP on 2001 Chebyshev samples of `[−1, 1]` against the
/// closed form. The degree-8 value and `2V₁₆ − V₈` are diagnostics.
pub fn criterion_7(name: &str, _seed: u64) -> Result<StudyOutput, ExperimentError> {
    let study = CRITERIA[6].0;
    let points = chebyshev_interval_points(-1.0, 1.0, ENDPOINT_SAMPLES);
    let fine = SiciakProblem::new(points.clone(), SICIAK_DEGREE, DEFAULT_FACETS).map_err(numeric(study))?;
    let coarse = SiciakProblem::new(points, SICIAK_DEGREE / 2, DEFAULT_FACETS).map_err(numeric(study))?;
    let probes = [
        Complex64::new(2.0, 0.0),
        Complex64::new(1.0, 1.0),
        Complex64::new(-3.0, 0.0),
    ];
    let mut out = StudyOutput::default();
    let mut worst = f64::INFINITY;
    let mut largest_error = 0.0f64;
    for z in probes {
        let label = format!("{study}@{}", format_complex(z));
        let exact = green_interval(z);
        let v16 = fine.evaluate(&[z]).map_err(numeric(study))?.value;
        let v8 = coarse.evaluate(&[z]).map_err(numeric(study))?.value;
        let error = v16 - exact;
        let slack = SICIAK_TOLERANCE - error.abs();
        worst = worst.min(slack);
        largest_error = largest_error.max(error.abs());
        out.raw.push(
            ReportRow::new(name, label.clone(), v16)
                .degree(SICIAK_DEGREE)
                .slack(slack)
                .pass(slack >= 0.0),
        );
        out.raw.push(
            ReportRow::new(name, label.clone(), v8)
                .degree(SICIAK_DEGREE / 2)
                .slack((v8 - exact).abs())
                .status(RowStatus::Excluded),
        );
        out.raw.push(
            ReportRow::new(name, format!("{label}_extrapolated"), 2.0 * v16 - v8)
                .slack((2.0 * v16 - v8 - exact).abs())
                .status(RowStatus::Excluded),
        );
    }
    out.fit.push(
        ReportRow::new(name, study, largest_error)
            .degree(SICIAK_DEGREE)
            .slack(worst)
            .pass(worst >= 0.0),
    );
    Ok(out)
}

fn suite_row(name: &str, study: String, checked: usize, violations: usize, worst: f64) -> ReportRow {
    ReportRow::new(name, study, violations as f64)
        .slack(worst)
        .pass(violations == 0 && checked > 0)
}

/// Bernstein–Walsh, Bos, norm lower bound and Cauchy suites; every one must
/// report zero violations. Random suites draw from `Lcg::new(seed + i)` with
/// `i` the suite index (0 Bernstein–Walsh, 1.. one per cusp germ).
pub fn criterion_8(name: &str, seed: u64) -> Result<StudyOutput, ExperimentError> {
    let base = CRITERIA[7].0;
    let mut out = StudyOutput::default();

    let samples = chebyshev_interval_points(-1.0, 1.0, ENDPOINT_SAMPLES);
    let z = [Complex64::new(BW_POINT, 0.0)];
    let green = green_interval(z[0]);
    let mut rng = Lcg::new(seed);
    let (mut violations, mut worst) = (0, f64::INFINITY);
    for _ in 0..BW_POLYNOMIALS {
        let p = MultiPoly::random(1, BW_MAX_DEGREE, &mut rng);
        let report = bernstein_walsh_check(&p, &samples, &z, green);
        violations += usize::from(!report.holds);
        let relative = if report.rhs > 0.0 {
            report.slack / report.rhs
        } else {
            0.0
        };
        worst = worst.min(relative);
    }
    out.raw.push(suite_row(
        name,
        format!("{base}_bernstein_walsh"),
        BW_POLYNOMIALS,
        violations,
        worst,
    ));

    for (b, r, eps) in BOS_TRIPLES {
        let report = bos_disk_bound_check(Complex64::new(b, 0.0), r, eps, BOS_GRID).map_err(numeric(base))?;
        out.raw.push(
            ReportRow::new(name, format!("{base}_bos_b{b}_r{r}"), report.sup)
                .epsilon(eps)
                .slack(report.slack)
                .pass(report.holds),
        );
    }

    for id in BUILTIN_GERMS {
        let germ = builtin_germ(id).map_err(numeric(base))?;
        let report = norm_lower_bound_check(germ.branch(), NORM_RHO, NORM_GRID).map_err(numeric(base))?;
        out.raw.push(
            ReportRow::new(name, format!("{base}_norm_lower_bound_{id}"), report.violations as f64)
                .slack(report.infimum)
                .pass(report.violations == 0),
        );
    }

    for (i, id) in CAUCHY_GERMS.iter().enumerate() {
        let germ = builtin_germ(id).map_err(numeric(base))?;
        let mut rng = Lcg::new(seed.wrapping_add(1 + i as u64));
        let (mut violations, mut worst) = (0, f64::INFINITY);
        for _ in 0..CAUCHY_POLYNOMIALS {
            let p = MultiPoly::random(germ.ambient_dim(), CAUCHY_MAX_DEGREE, &mut rng);
            let report =
                cauchy_derivative_check(&germ, &p, CAUCHY_RADIUS, CAUCHY_CIRCLE_POINTS).map_err(numeric(base))?;
            violations += usize::from(!report.holds);
            worst = worst.min(report.slack);
        }
        out.raw.push(suite_row(
            name,
            format!("{base}_cauchy_{id}"),
            CAUCHY_POLYNOMIALS,
            violations,
            worst,
        ));
    }

    let failed = out.raw.iter().filter(|r| r.status == RowStatus::Violation).count();
    out.fit
        .push(ReportRow::new(name, base, failed as f64).pass(failed == 0));
    Ok(out)
}

/// Relative change of the trace-to-star Green ratio between degrees 8 and 12.
pub fn criterion_9(name: &str, _seed: u64) -> Result<StudyOutput, ExperimentError> {
    let study = CRITERIA[8].0;
    let germ = builtin_germ("cusp_2_3").map_err(numeric(study))?;
    let (low, high) = RATIO_DEGREES;
    let mut out = StudyOutput::default();
    let mut ratios = Vec::new();
    for degree in [low, high] {
        let report =
            proposition5_check(&germ, RATIO_EPSILON, degree, RATIO_GRID, RATIO_DENSITY).map_err(numeric(study))?;
        ratios.push(report.max_ratio);
        out.raw.push(
            ReportRow::new(name, study, report.max_ratio)
                .degree(degree)
                .epsilon(RATIO_EPSILON)
                .pass(report.max_ratio.is_finite() && report.evaluated > 0),
        );
    }
    let change = (ratios[1] - ratios[0]).abs() / ratios[0];
    let slack = RATIO_TOLERANCE - change;
    out.fit.push(
        ReportRow::new(name, study, change)
            .epsilon(RATIO_EPSILON)
            .slack(slack)
            .pass(slack >= 0.0 && ratios.iter().all(|r| r.is_finite())),
    );
    Ok(out)
}

/// Criteria 1 to 9 in order, cells in parallel.
pub fn run_criteria(name: &str, seed: u64) -> Result<StudyOutput, ExperimentError> {
    let parts = CRITERIA
        .par_iter()
        .map(|(_, criterion)| criterion(name, seed))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = StudyOutput::default();
    for part in parts {
        out.extend(part);
    }
    Ok(out)
}

fn serialize(output: &StudyOutput) -> Vec<u8> {
    let mut bytes = csv_bytes(&output.raw);
    bytes.extend(csv_bytes(&output.fit));
    bytes
}

/// Criteria 1 to 9, then criterion 10: a second pass on a single thread must
/// serialize to the same bytes, and both passes must finish within
/// [`VERIFY_TIME_LIMIT`].
pub fn verify_all(name: &str, seed: u64) -> Result<StudyOutput, ExperimentError> {
    let start = Instant::now();
    let mut out = run_criteria(name, seed)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| ExperimentError::Numeric(format!("thread pool: {e}")))?;
    let second = pool.install(|| run_criteria(name, seed))?;
    let identical = serialize(&out) == serialize(&second);
    let in_time = start.elapsed() <= VERIFY_TIME_LIMIT;
    out.fit
        .push(ReportRow::new(name, "c10_reproducibility", f64::from(u8::from(identical))).pass(identical && in_time));
    Ok(out)
}
