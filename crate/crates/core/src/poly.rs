//! Sparse real polynomials in the monomial basis.

use num_complex::Complex64;

use crate::rng::Lcg;

/// Exponent tuples of total degree `≤ degree` in `n` variables, graded and
/// lexicographically descending within each degree. The list for degree `d`
/// is a prefix of the list for `d + 1`.
pub fn graded_multi_indices(n: usize, degree: u32) -> Vec<Vec<u32>> {
    fn fill(out: &mut Vec<Vec<u32>>, prefix: &mut Vec<u32>, remaining: usize, total: u32) {
        if remaining == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=total).rev() {
            prefix.push(first);
            fill(out, prefix, remaining - 1, total - first);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for total in 0..=degree {
        fill(&mut out, &mut Vec::with_capacity(n), n, total);
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly {
    n: usize,
    terms: Vec<(Vec<u32>, f64)>,
}

impl MultiPoly {
    /// Terms with zero coefficients are dropped.
    pub fn new(n: usize, terms: Vec<(Vec<u32>, f64)>) -> Self {
        assert!(terms.iter().all(|(e, _)| e.len() == n), "exponent arity");
        let terms = terms.into_iter().filter(|(_, c)| *c != 0.0).collect();
        Self { n, terms }
    }

    pub fn constant(n: usize, value: f64) -> Self {
        Self::new(n, vec![(vec![0; n], value)])
    }

    /// The coordinate function `x_{index}` (0-based).
    pub fn coordinate(n: usize, index: usize) -> Self {
        let mut e = vec![0; n];
        e[index] = 1;
        Self::new(n, vec![(e, 1.0)])
    }

    /// Univariate polynomial from ascending coefficients.
    pub fn univariate(coefficients: &[f64]) -> Self {
        Self::new(
            1,
            coefficients
                .iter()
                .enumerate()
                .map(|(i, &c)| (vec![i as u32], c))
                .collect(),
        )
    }

    /// Chebyshev polynomial `T_m` of the first kind in one variable.
    pub fn chebyshev(m: u32) -> Self {
        let mut prev = vec![1.0];
        let mut cur = vec![0.0, 1.0];
        if m == 0 {
            return Self::univariate(&prev);
        }
        for _ in 1..m {
            let mut next = vec![0.0; cur.len() + 1];
            for (i, &c) in cur.iter().enumerate() {
                next[i + 1] += 2.0 * c;
            }
            for (i, &c) in prev.iter().enumerate() {
                next[i] -= c;
            }
            prev = cur;
            cur = next;
        }
        Self::univariate(&cur)
    }

    /// Uniform degree in `0..=max_degree`, then every monomial of total degree
    /// at most that degree gets a coefficient uniform in `[−1, 1)`.
    pub fn random(n: usize, max_degree: u32, rng: &mut Lcg) -> Self {
        let degree = rng.below_inclusive(max_degree);
        let terms = graded_multi_indices(n, degree)
            .into_iter()
            .map(|e| {
                let c = rng.uniform(-1.0, 1.0);
                (e, c)
            })
            .collect();
        Self::new(n, terms)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(Vec<u32>, f64)] {
        &self.terms
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(e, _)| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(x)
                    .fold(Complex64::new(*c, 0.0), |acc, (&k, &xi)| acc * xi.powu(k))
            })
            .sum()
    }

    pub fn eval_real(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(x).fold(*c, |acc, (&k, &xi)| acc * xi.powi(k as i32)))
            .sum()
    }

    /// `D_v p(x)` for real `x` and `v`.
    pub fn directional_derivative(&self, x: &[f64], v: &[f64]) -> f64 {
        let mut total = 0.0;
        for (e, c) in &self.terms {
            for j in 0..self.n {
                if e[j] == 0 || v[j] == 0.0 {
                    continue;
                }
                let mut term = c * v[j] * f64::from(e[j]);
                for (i, (&k, &xi)) in e.iter().zip(x).enumerate() {
                    let power = if i == j { k - 1 } else { k };
                    term *= xi.powi(power as i32);
                }
                total += term;
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multi_index_count_is_binomial() {
        for (n, d, count) in [(1, 5, 6), (2, 3, 10), (2, 12, 91), (3, 4, 35)] {
            let idx = graded_multi_indices(n, d);
            assert_eq!(idx.len(), count);
            assert!(idx.iter().all(|e| e.iter().sum::<u32>() <= d));
        }
        let small = graded_multi_indices(2, 3);
        assert_eq!(&graded_multi_indices(2, 4)[..small.len()], &small[..]);
        assert_eq!(small[1], vec![1, 0]);
    }

    #[test]
    fn chebyshev_matches_cosine_identity() {
        let t8 = MultiPoly::chebyshev(8);
        assert_eq!(t8.degree(), 8);
        for theta in [0.1, 0.7, 2.3] {
            let x: f64 = f64::cos(theta);
            assert!((t8.eval_real(&[x]) - (8.0 * theta).cos()).abs() < 1e-12);
        }
        // T_n'(1) = n²
        for n in 0..=10u32 {
            let d = MultiPoly::chebyshev(n).directional_derivative(&[1.0], &[1.0]);
            assert!((d - f64::from(n * n)).abs() < 1e-9 * f64::from(n * n).max(1.0));
        }
    }

    #[test]
    fn directional_derivative_matches_finite_difference() {
        let mut rng = Lcg::new(3);
        for _ in 0..20 {
            let p = MultiPoly::random(2, 6, &mut rng);
            let x = [0.3, -0.2];
            let v = [0.6, 0.8];
            let h = 1e-6;
            let fd = (p.eval_real(&[x[0] + h * v[0], x[1] + h * v[1]])
                - p.eval_real(&[x[0] - h * v[0], x[1] - h * v[1]]))
                / (2.0 * h);
            assert!((fd - p.directional_derivative(&x, &v)).abs() < 1e-7);
        }
    }

    #[test]
    fn random_is_reproducible() {
        let a = MultiPoly::random(2, 8, &mut Lcg::new(11));
        let b = MultiPoly::random(2, 8, &mut Lcg::new(11));
        assert_eq!(a, b);
    }
}
