//! Hölder-continuity exponent fits `V(probe(δ)) ≈ C·δ^α`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::curve::{geodesic_distance, CurveGerm};
use crate::green::{green_interval, GreenError, SiciakProblem};
use crate::regression::log_log_fit;

#[derive(Clone, Debug, PartialEq)]
pub struct HcpFit {
    /// Strictly decreasing.
    pub deltas: Vec<f64>,
    pub values: Vec<f64>,
    pub alpha: f64,
    pub constant: f64,
    pub r_squared: f64,
}

/// Evaluates `green` at every δ (sorted decreasing) and fits the exponent.
///
/// Needs at least 4 distinct positive deltas spanning at least two decades.
pub fn hcp_fit<F>(deltas: &[f64], green: F) -> Result<HcpFit, GreenError>
where
    F: Fn(f64) -> Result<f64, GreenError>,
{
    let mut deltas = deltas.to_vec();
    if deltas.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
        return Err(GreenError::InvalidParameter(
            "deltas must be positive and finite".into(),
        ));
    }
    deltas.sort_by(|a, b| b.total_cmp(a));
    deltas.dedup();
    if deltas.len() < 4 {
        return Err(GreenError::InvalidParameter(format!(
            "need at least 4 distinct deltas, got {}",
            deltas.len()
        )));
    }
    if deltas[0] / deltas[deltas.len() - 1] < 100.0 * (1.0 - 1e-12) {
        return Err(GreenError::InvalidParameter(
            "deltas must span at least two decades".into(),
        ));
    }
    let values = deltas
        .iter()
        .map(|&delta| {
            let value = green(delta)?;
            if value > 0.0 {
                Ok(value)
            } else {
                Err(GreenError::ProbeOnSet { delta, value })
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let fit =
        log_log_fit(&deltas, &values).ok_or_else(|| GreenError::InvalidParameter("degenerate delta design".into()))?;
    Ok(HcpFit {
        alpha: fit.coefficients[0],
        constant: fit.coefficients[1].exp(),
        r_squared: fit.r_squared,
        deltas,
        values,
    })
}

/// `V_{[−1,1]}(1 + δ)`: outward along the real axis from the endpoint.
pub fn interval_endpoint_probe(delta: f64) -> Result<f64, GreenError> {
    Ok(green_interval(Complex64::new(1.0 + delta, 0.0)))
}

/// `V_{[−1,1]}(x + iδ)` above an interior point.
pub fn interval_interior_probe(x: f64, delta: f64) -> Result<f64, GreenError> {
    Ok(green_interval(Complex64::new(x, delta)))
}

/// Unit parameter direction at the first real segment angle plus `π/(2k)`.
pub fn off_trace_direction(germ: &CurveGerm) -> Complex64 {
    let angles = germ.segment_angles();
    let theta = angles[0] + PI / (2.0 * f64::from(germ.branch().k()));
    Complex64::from_polar(1.0, theta)
}

/// Parameter `z = s·direction` with surrogate geodesic distance `d(0, z) = target`,
/// found by bisection on `s ∈ (0, 1]`.
pub fn germ_probe_parameter(germ: &CurveGerm, direction: Complex64, target: f64) -> Result<Complex64, GreenError> {
    let branch = germ.branch();
    let origin = Complex64::new(0.0, 0.0);
    let distance = |s: f64| geodesic_distance(branch, origin, direction * s);
    let full = distance(1.0)?;
    if !(target > 0.0 && target <= full) {
        return Err(GreenError::InvalidParameter(format!(
            "geodesic target {target} outside (0, {full}]"
        )));
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if distance(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(direction * (0.5 * (lo + hi)))
}

/// HCP fit of the trace Green function of `germ` (Siciak LP) at points
/// `x₀ + φ(z)` with `d(0, z) = μ` along [`off_trace_direction`].
pub fn germ_hcp_fit(germ: &CurveGerm, trace: &SiciakProblem, mus: &[f64]) -> Result<HcpFit, GreenError> {
    let direction = off_trace_direction(germ);
    hcp_fit(mus, |mu| {
        let z = germ_probe_parameter(germ, direction, mu)?;
        Ok(trace.evaluate(&germ.point_at(z)?)?.value)
    })
}
