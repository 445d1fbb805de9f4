//! Tensor-product Chebyshev basis on an affinely scaled box.

use num_complex::Complex64;

use crate::poly::graded_multi_indices;

/// Products `Π_j T_{α_j}((x_j − center_j)/half_width_j)` over the graded
/// multi-indices `|α| ≤ max_degree`.
///
/// Centers are complex so a planar set in ℂ can be boxed by its real and
/// imaginary extents; half-widths are real and positive.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialBasis {
    ambient_dim: usize,
    max_degree: u32,
    multi_indices: Vec<Vec<u32>>,
    center: Vec<Complex64>,
    half_widths: Vec<f64>,
}

impl PolynomialBasis {
    pub fn new(max_degree: u32, center: Vec<Complex64>, half_widths: Vec<f64>) -> Self {
        assert_eq!(center.len(), half_widths.len(), "box arity");
        assert!(
            half_widths.iter().all(|h| *h > 0.0 && h.is_finite()),
            "half-widths must be positive"
        );
        let ambient_dim = center.len();
        Self {
            ambient_dim,
            max_degree,
            multi_indices: graded_multi_indices(ambient_dim, max_degree),
            center,
            half_widths,
        }
    }

    /// Smallest box containing `points` and `extra`. A coordinate with no
    /// spread gets half-width 1.
    pub fn bounding_box(max_degree: u32, points: &[Vec<Complex64>], extra: &[Vec<Complex64>]) -> Self {
        let n = points.first().or(extra.first()).map_or(1, Vec::len);
        let mut lo = vec![Complex64::new(f64::INFINITY, f64::INFINITY); n];
        let mut hi = vec![Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY); n];
        for p in points.iter().chain(extra) {
            for j in 0..n {
                lo[j].re = lo[j].re.min(p[j].re);
                lo[j].im = lo[j].im.min(p[j].im);
                hi[j].re = hi[j].re.max(p[j].re);
                hi[j].im = hi[j].im.max(p[j].im);
            }
        }
        let mut center = Vec::with_capacity(n);
        let mut half = Vec::with_capacity(n);
        for j in 0..n {
            center.push((lo[j] + hi[j]) * 0.5);
            let h = (0.5 * (hi[j].re - lo[j].re)).max(0.5 * (hi[j].im - lo[j].im));
            half.push(if h > 0.0 && h.is_finite() { h } else { 1.0 });
        }
        Self::new(max_degree, center, half)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn multi_indices(&self) -> &[Vec<u32>] {
        &self.multi_indices
    }

    pub fn center(&self) -> &[Complex64] {
        &self.center
    }

    pub fn half_widths(&self) -> &[f64] {
        &self.half_widths
    }

    pub fn len(&self) -> usize {
        self.multi_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.multi_indices.is_empty()
    }

    /// `T_0..T_d` and their derivatives at `u`.
    fn chebyshev_table(&self, u: Complex64) -> (Vec<Complex64>, Vec<Complex64>) {
        let d = self.max_degree as usize;
        let mut t = vec![Complex64::new(0.0, 0.0); d + 1];
        let mut dt = vec![Complex64::new(0.0, 0.0); d + 1];
        t[0] = Complex64::new(1.0, 0.0);
        if d >= 1 {
            t[1] = u;
            dt[1] = Complex64::new(1.0, 0.0);
        }
        for m in 1..d {
            t[m + 1] = 2.0 * u * t[m] - t[m - 1];
            dt[m + 1] = 2.0 * t[m] + 2.0 * u * dt[m] - dt[m - 1];
        }
        (t, dt)
    }

    fn tables(&self, x: &[Complex64]) -> Vec<(Vec<Complex64>, Vec<Complex64>)> {
        assert_eq!(x.len(), self.ambient_dim, "point arity");
        x.iter()
            .zip(&self.center)
            .zip(&self.half_widths)
            .map(|((&xj, &c), &h)| self.chebyshev_table((xj - c) / h))
            .collect()
    }

    pub fn eval(&self, x: &[Complex64]) -> Vec<Complex64> {
        let tables = self.tables(x);
        self.multi_indices
            .iter()
            .map(|alpha| alpha.iter().zip(&tables).map(|(&a, (t, _))| t[a as usize]).product())
            .collect()
    }

    pub fn eval_real(&self, x: &[f64]) -> Vec<f64> {
        let z: Vec<Complex64> = x.iter().map(|&r| Complex64::new(r, 0.0)).collect();
        self.eval(&z).into_iter().map(|w| w.re).collect()
    }

    /// Row `ℓ` with `ℓ·c = D_v p(x₀)` for `p = Σ c_α B_α`, by exact
    /// differentiation of the recurrences and the chain rule through the box
    /// scaling.
    pub fn directional_derivative_functional(&self, x0: &[f64], v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.ambient_dim, "direction arity");
        let z: Vec<Complex64> = x0.iter().map(|&r| Complex64::new(r, 0.0)).collect();
        let tables = self.tables(&z);
        self.multi_indices
            .iter()
            .map(|alpha| {
                let mut total = 0.0;
                for j in 0..self.ambient_dim {
                    if v[j] == 0.0 || alpha[j] == 0 {
                        continue;
                    }
                    let mut term = Complex64::new(v[j] / self.half_widths[j], 0.0);
                    for (i, (&a, (t, dt))) in alpha.iter().zip(&tables).enumerate() {
                        term *= if i == j { dt[a as usize] } else { t[a as usize] };
                    }
                    total += term.re;
                }
                total
            })
            .collect()
    }
}
