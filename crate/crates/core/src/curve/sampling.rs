use std::f64::consts::PI;

use num_complex::Complex64;

use super::{CurveError, CurveGerm};

/// Relative imaginary-part tolerance for calling a point real:
/// `‖Im x‖ ≤ REAL_TOLERANCE · (1 + ‖Re x‖)`.
pub const REAL_TOLERANCE: f64 = 1e-12;

/// Chebyshev–Lobatto grid on `[0, length]`: `length·(1 − cos(jπ/(n−1)))/2`,
/// clustered at both ends and containing both endpoints.
pub fn chebyshev_grid(length: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => {
            let last = (count - 1) as f64;
            (0..count)
                .map(|j| {
                    if j == 0 {
                        0.0
                    } else if j == count - 1 {
                        length
                    } else {
                        0.5 * length * (1.0 - (PI * j as f64 / last).cos())
                    }
                })
                .collect()
        }
    }
}

/// Chebyshev–Lobatto points of `[a, b]` as one-dimensional sample points.
pub fn chebyshev_interval_points(a: f64, b: f64, count: usize) -> Vec<Vec<Complex64>> {
    chebyshev_grid(b - a, count)
        .into_iter()
        .map(|t| vec![Complex64::new(a + t, 0.0)])
        .collect()
}

pub fn is_real_point(point: &[Complex64]) -> bool {
    let re = point.iter().map(|w| w.re * w.re).sum::<f64>().sqrt();
    let im = point.iter().map(|w| w.im * w.im).sum::<f64>().sqrt();
    im <= REAL_TOLERANCE * (1.0 + re)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SamplePoint {
    pub parameter: Complex64,
    pub image: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleGenerator {
    pub germ: String,
    pub eps: f64,
    pub density: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet {
    pub points: Vec<SamplePoint>,
    pub real_only: bool,
    pub generator: SampleGenerator,
}

impl SampleSet {
    /// Wraps an explicit point list (parameters are the point indices).
    pub fn from_points(points: Vec<Vec<Complex64>>, label: &str) -> Self {
        let real_only = points.iter().all(|p| is_real_point(p));
        let count = points.len();
        Self {
            points: points
                .into_iter()
                .enumerate()
                .map(|(i, image)| SamplePoint {
                    parameter: Complex64::new(i as f64, 0.0),
                    image,
                })
                .collect(),
            real_only,
            generator: SampleGenerator {
                germ: label.to_string(),
                eps: 0.0,
                density: count,
            },
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn images(&self) -> Vec<Vec<Complex64>> {
        self.points.iter().map(|p| p.image.clone()).collect()
    }

    pub fn real_images(&self) -> Vec<Vec<f64>> {
        self.points
            .iter()
            .map(|p| p.image.iter().map(|w| w.re).collect())
            .collect()
    }
}

/// Samples the real trace `x₀ + φ(t·e^{iθ})`, `t ∈ [0, ε]`, along every star
/// angle on a Chebyshev grid of `density` points. The basepoint is included
/// once.
pub fn sample_real_trace(germ: &CurveGerm, eps: f64, density: usize) -> Result<SampleSet, CurveError> {
    if !(0.0..=1.0).contains(&eps) || eps.is_nan() {
        return Err(CurveError::InvalidParameter(format!(
            "sampling radius must lie in [0, 1], got {eps}"
        )));
    }
    if density < 2 {
        return Err(CurveError::InvalidParameter(
            "density must be at least 2 points per segment".into(),
        ));
    }
    let generator = SampleGenerator {
        germ: germ.name().to_string(),
        eps,
        density,
    };
    let basepoint: Vec<Complex64> = germ.basepoint().iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let mut points = vec![SamplePoint {
        parameter: Complex64::new(0.0, 0.0),
        image: basepoint,
    }];
    if eps > 0.0 {
        let grid = chebyshev_grid(eps, density);
        for theta in germ.segment_angles() {
            let direction = Complex64::from_polar(1.0, theta);
            for &t in &grid[1..] {
                let parameter = direction * t;
                let mut image = germ.point_at(parameter)?;
                if !is_real_point(&image) {
                    let im = image.iter().map(|w| w.im * w.im).sum::<f64>().sqrt();
                    return Err(CurveError::InconsistentGerm {
                        angle: theta,
                        parameter: t,
                        imaginary_norm: im,
                    });
                }
                for w in &mut image {
                    w.im = 0.0;
                }
                points.push(SamplePoint { parameter, image });
            }
        }
    }
    Ok(SampleSet {
        points,
        real_only: true,
        generator,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{builtin_germ, PointClass, PuiseuxBranch, Side, StarSet};

    #[test]
    fn grid_contains_endpoints_and_midpoint() {
        let g = chebyshev_grid(1.0, 3);
        assert_eq!(g[0], 0.0);
        assert!((g[1] - 0.5).abs() < 1e-15);
        assert_eq!(g[2], 1.0);
    }

    #[test]
    fn cusp_trace_is_real_on_both_segments() {
        let germ = builtin_germ("cusp_2_3").unwrap();
        let set = sample_real_trace(&germ, 1.0, 3).unwrap();
        assert_eq!(set.len(), 5);
        assert!(set.real_only);
        let images = set.real_images();
        // angle π: φ(−t) = (t², −t³)
        let expected = [[0.0, 0.0], [0.25, 0.125], [1.0, 1.0], [0.25, -0.125], [1.0, -1.0]];
        for (got, want) in images.iter().zip(expected) {
            assert!((got[0] - want[0]).abs() < 1e-15 && (got[1] - want[1]).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_radius_gives_basepoint() {
        let germ = builtin_germ("cusp_3_4").unwrap();
        let set = sample_real_trace(&germ, 0.0, 10).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set.real_images()[0], vec![0.0, 0.0]);
    }

    #[test]
    fn interval_germ_samples_both_sides() {
        let germ = builtin_germ("interval_interior").unwrap();
        let set = sample_real_trace(&germ, 0.5, 5).unwrap();
        let xs: Vec<f64> = set.real_images().iter().map(|p| p[0]).collect();
        assert!(xs.iter().all(|x| x.abs() <= 0.5 + 1e-15));
        assert!(xs.contains(&0.5) && xs.contains(&-0.5));
        assert!(set.real_images().iter().all(|p| p[1] == 0.0));
    }

    #[test]
    fn non_real_angle_is_rejected() {
        // angle π/2 on a cusp: φ(it) = (−t², −i t³) is not real
        let germ = crate::curve::CurveGerm::new(
            "bad",
            vec![0.0, 0.0],
            PuiseuxBranch::monomial_cusp(2, 3).unwrap(),
            None,
            Some(StarSet::new(2, Side::Minus, vec![0], 1.0).unwrap()),
            PointClass::Singular,
        )
        .unwrap();
        assert!(matches!(
            sample_real_trace(&germ, 0.5, 4),
            Err(CurveError::InconsistentGerm { .. })
        ));
    }

    #[test]
    fn every_builtin_trace_is_real() {
        for id in crate::curve::BUILTIN_GERMS {
            let germ = builtin_germ(id).unwrap();
            let set = sample_real_trace(&germ, 0.7, 40).unwrap();
            for p in &set.points {
                let image = germ.branch().eval(p.parameter).unwrap();
                assert!(is_real_point(&image), "{id}");
                assert!(p.parameter.norm() <= 0.7 + 1e-15);
            }
        }
    }
}
