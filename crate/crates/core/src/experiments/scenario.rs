//! Study runners. Every runner returns rows; files are written by the caller.

use num_complex::Complex64;

use super::config::{GreenSet, HcpProbe, ScenarioConfig, Study};
use super::report::{format_g17, ReportRow, RowStatus};
use super::{verify, ExperimentError, StudyOutput, DEFAULT_SEED};
use crate::curve::{chebyshev_interval_points, geodesic_distance, sample_real_trace, CurveGerm};
use crate::green::{green_segment, SiciakProblem};
use crate::hcp::{germ_hcp_fit, hcp_fit, interval_endpoint_probe, interval_interior_probe, HcpFit};
use crate::markov::scaling_study;
use crate::regression::log_log_fit;

/// Tolerance on the fitted geodesic slope around `k`.
pub const GEODESIC_SLOPE_TOLERANCE: f64 = 0.05;
/// Tolerance on the fitted HCP exponent.
pub const HCP_TOLERANCE: f64 = 0.03;

/// Runs the study named in `config`. `seed` overrides the configured seed.
pub fn run_study(config: &ScenarioConfig, seed: Option<u64>) -> Result<StudyOutput, ExperimentError> {
    let germ = config
        .resolve_germ()
        .map_err(|e| ExperimentError::Invalid(e.to_string()))?;
    let seed = seed.or(config.seed).unwrap_or(DEFAULT_SEED);
    match config.study {
        Study::MarkovScan => markov_scan(config, germ.as_ref().expect("validated")),
        Study::GreenEval => green_eval(config, germ.as_ref()),
        Study::GeodesicFit => geodesic_fit(config, germ.as_ref().expect("validated")),
        Study::HcpFit => hcp_study(config, germ.as_ref()),
        Study::VerifyAll => verify::verify_all(&config.name, seed),
    }
}

pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{sign}{}i", format_g17(z.re), format_g17(z.im.abs()))
}

fn markov_scan(config: &ScenarioConfig, germ: &CurveGerm) -> Result<StudyOutput, ExperimentError> {
    let params = &config.markov;
    let study =
        scaling_study(germ, &params.degrees, &params.epsilons, params.density).map_err(ExperimentError::numeric)?;
    let label = Study::MarkovScan.as_str();
    let raw = study
        .cells
        .iter()
        .map(|cell| {
            ReportRow::new(&config.name, label, cell.factor)
                .degree(cell.degree)
                .epsilon(cell.epsilon)
                .status(if cell.in_fit {
                    RowStatus::Ok
                } else {
                    RowStatus::Excluded
                })
        })
        .collect();
    let fit = vec![ReportRow::new(&config.name, label, study.fit.alpha_eps)
        .fitted(study.fit.alpha_deg)
        .slack(study.fit.residual_norm)];
    Ok(StudyOutput { raw, fit })
}

fn green_eval(config: &ScenarioConfig, germ: Option<&CurveGerm>) -> Result<StudyOutput, ExperimentError> {
    let params = &config.green;
    let mut output = StudyOutput::default();
    match params.set {
        GreenSet::Interval { a, b, samples } => {
            let problem = SiciakProblem::new(chebyshev_interval_points(a, b, samples), params.degree, params.facets)
                .map_err(ExperimentError::numeric)?;
            let (ca, cb) = (Complex64::new(a, 0.0), Complex64::new(b, 0.0));
            for &z in &params.points {
                let label = format!("green_eval@{}", format_complex(z));
                let lp = problem.evaluate(&[z]).map_err(ExperimentError::numeric)?;
                let exact = green_segment(z, ca, cb).map_err(ExperimentError::numeric)?;
                output.raw.push(
                    ReportRow::new(&config.name, label.clone(), lp.value)
                        .degree(params.degree)
                        .slack(lp.relaxation_slack),
                );
                output
                    .fit
                    .push(ReportRow::new(&config.name, label, exact).slack(lp.value - exact));
            }
        }
        GreenSet::Germ { epsilon, density } => {
            let germ = germ.expect("validated");
            let samples = sample_real_trace(germ, epsilon, density).map_err(ExperimentError::numeric)?;
            let problem =
                SiciakProblem::new(samples.images(), params.degree, params.facets).map_err(ExperimentError::numeric)?;
            for &z in &params.points {
                if z.norm() > 1.0 {
                    return Err(ExperimentError::Invalid(format!(
                        "germ parameter {} lies outside the unit disk",
                        format_complex(z)
                    )));
                }
                let point = germ.point_at(z).map_err(ExperimentError::numeric)?;
                let lp = problem.evaluate(&point).map_err(ExperimentError::numeric)?;
                output.raw.push(
                    ReportRow::new(&config.name, format!("green_eval@{}", format_complex(z)), lp.value)
                        .degree(params.degree)
                        .epsilon(epsilon)
                        .slack(lp.relaxation_slack),
                );
            }
        }
    }
    Ok(output)
}

/// Points `(|z|, d(φ(0), φ(z)))` for `|z| = 2^{−m}` and the fitted slope.
pub fn geodesic_slope(
    germ: &CurveGerm,
    m_min: u32,
    m_max: u32,
    angle: f64,
) -> Result<(Vec<(f64, f64)>, f64), ExperimentError> {
    let origin = Complex64::new(0.0, 0.0);
    let points = (m_min..=m_max)
        .map(|m| {
            let r = 0.5f64.powi(m as i32);
            geodesic_distance(germ.branch(), origin, Complex64::from_polar(r, angle)).map(|d| (r, d))
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(ExperimentError::numeric)?;
    let (x, y): (Vec<f64>, Vec<f64>) = points.iter().copied().unzip();
    let fit = log_log_fit(&x, &y).ok_or_else(|| ExperimentError::Numeric("degenerate geodesic fit".into()))?;
    Ok((points, fit.coefficients[0]))
}

fn geodesic_fit(config: &ScenarioConfig, germ: &CurveGerm) -> Result<StudyOutput, ExperimentError> {
    let params = &config.geodesic;
    let (points, slope) = geodesic_slope(germ, params.m_min, params.m_max, params.angle)?;
    let label = Study::GeodesicFit.as_str();
    let k = f64::from(germ.branch().k());
    let raw = points
        .iter()
        .map(|&(r, d)| ReportRow::new(&config.name, label, d).epsilon(r))
        .collect();
    let slack = GEODESIC_SLOPE_TOLERANCE - (slope - k).abs();
    let fit = vec![ReportRow::new(&config.name, label, k)
        .fitted(slope)
        .slack(slack)
        .pass(slack >= 0.0)];
    Ok(StudyOutput { raw, fit })
}

fn hcp_rows(name: &str, fit: &HcpFit, slack: f64) -> StudyOutput {
    let label = Study::HcpFit.as_str();
    StudyOutput {
        raw: fit
            .deltas
            .iter()
            .zip(&fit.values)
            .map(|(&d, &v)| ReportRow::new(name, label, v).epsilon(d))
            .collect(),
        fit: vec![ReportRow::new(name, label, fit.constant)
            .fitted(fit.alpha)
            .slack(slack)
            .pass(slack >= 0.0)],
    }
}

/// Endpoint and interior probes must match `1/2` and `1`; germ probes must
/// reach at least `1/(2k)`.
fn hcp_study(config: &ScenarioConfig, germ: Option<&CurveGerm>) -> Result<StudyOutput, ExperimentError> {
    let params = &config.hcp;
    let (fit, slack) = match params.probe {
        HcpProbe::Endpoint => {
            let fit = hcp_fit(&params.deltas, interval_endpoint_probe).map_err(ExperimentError::numeric)?;
            let slack = HCP_TOLERANCE - (fit.alpha - 0.5).abs();
            (fit, slack)
        }
        HcpProbe::Interior { x } => {
            let fit = hcp_fit(&params.deltas, |d| interval_interior_probe(x, d)).map_err(ExperimentError::numeric)?;
            let slack = HCP_TOLERANCE - (fit.alpha - 1.0).abs();
            (fit, slack)
        }
        HcpProbe::Germ => {
            let germ = germ.expect("validated");
            let samples = sample_real_trace(germ, params.epsilon, params.density).map_err(ExperimentError::numeric)?;
            let trace = SiciakProblem::new(samples.images(), params.degree, crate::green::DEFAULT_FACETS)
                .map_err(ExperimentError::numeric)?;
            let fit = germ_hcp_fit(germ, &trace, &params.deltas).map_err(ExperimentError::numeric)?;
            let floor = 1.0 / (2.0 * f64::from(germ.branch().k())) - HCP_TOLERANCE;
            let slack = fit.alpha - floor;
            (fit, slack)
        }
    };
    Ok(hcp_rows(&config.name, &fit, slack))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::config::ScenarioConfig;
    use crate::experiments::GermSource;

    #[test]
    fn complex_labels() {
        assert_eq!(format_complex(Complex64::new(2.0, 0.0)), "2+0i");
        assert_eq!(format_complex(Complex64::new(-0.5, -1.0)), "-0.5-1i");
    }

    #[test]
    fn markov_scan_row_count() {
        let mut config = ScenarioConfig::with_study("scan", Study::MarkovScan);
        config.germ = Some(GermSource::Builtin("cusp_2_3".into()));
        config.markov.degrees = vec![2, 3, 4];
        config.markov.epsilons = vec![1.0, 0.5, 0.25];
        config.markov.density = 40;
        let output = run_study(&config, None).unwrap();
        assert_eq!(output.raw.len() + output.fit.len(), 3 * 3 + 1);
        assert_eq!(output.raw.iter().filter(|r| r.status == RowStatus::Excluded).count(), 3);
        assert_eq!(output.violations(), 0);
    }

    #[test]
    fn geodesic_fit_recovers_multiplicity() {
        let mut config = ScenarioConfig::with_study("geo", Study::GeodesicFit);
        config.germ = Some(GermSource::Builtin("cusp_2_3".into()));
        let output = run_study(&config, None).unwrap();
        assert_eq!(output.raw.len(), 8);
        let slope = output.fit[0].fitted_exponent.unwrap();
        assert!((slope - 2.0).abs() < GEODESIC_SLOPE_TOLERANCE, "{slope}");
    }

    #[test]
    fn hcp_interior_probe() {
        let mut config = ScenarioConfig::with_study("hcp", Study::HcpFit);
        config.hcp.probe = HcpProbe::Interior { x: 0.3 };
        let output = run_study(&config, None).unwrap();
        assert_eq!(output.violations(), 0, "{:?}", output.fit);
    }
}
