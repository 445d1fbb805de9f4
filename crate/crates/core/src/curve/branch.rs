use num_complex::Complex64;

use super::{CurveError, TruncatedSeries};

/// Tolerance on `|z| ≤ 1` for parameters on the closed unit disk.
const DISK_SLACK: f64 = 1e-12;

/// Puiseux parametrization `z ↦ (c z^k, ψ₂(z), …, ψₙ(z))` of one local branch.
#[derive(Clone, Debug, PartialEq)]
pub struct PuiseuxBranch {
    k: u32,
    c: Complex64,
    tail: Vec<TruncatedSeries>,
}

impl PuiseuxBranch {
    pub fn new(k: u32, c: Complex64, tail: Vec<TruncatedSeries>) -> Result<Self, CurveError> {
        if k == 0 {
            return Err(CurveError::InvalidBranch("k must be positive".into()));
        }
        if c.norm() == 0.0 || !c.is_finite() {
            return Err(CurveError::InvalidBranch(
                "leading coefficient c must be finite and nonzero".into(),
            ));
        }
        if tail.is_empty() {
            return Err(CurveError::InvalidBranch("ambient dimension must be at least 2".into()));
        }
        for (index, series) in tail.iter().enumerate() {
            if let Some(order) = series.order() {
                if k >= 2 && order <= k {
                    return Err(CurveError::InvalidBranch(format!(
                        "coordinate {} has order {order}, singular normal form needs order > k = {k}",
                        index + 2
                    )));
                }
            }
        }
        Ok(Self { k, c, tail })
    }

    /// Monomial curve `t ↦ (t^p, t^q)`, p < q.
    pub fn monomial_cusp(p: u32, q: u32) -> Result<Self, CurveError> {
        let tail = TruncatedSeries::monomial(q, Complex64::new(1.0, 0.0))?;
        Self::new(p, Complex64::new(1.0, 0.0), vec![tail])
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    pub fn tail(&self) -> &[TruncatedSeries] {
        &self.tail
    }

    pub fn ambient_dim(&self) -> usize {
        self.tail.len() + 1
    }

    /// All coordinates as series, the first being `c z^k`.
    pub fn coordinates(&self) -> Vec<TruncatedSeries> {
        let first = TruncatedSeries::monomial(self.k, self.c).expect("validated leading term");
        std::iter::once(first).chain(self.tail.iter().cloned()).collect()
    }

    fn check_disk(z: Complex64) -> Result<(), CurveError> {
        if !z.is_finite() || z.norm() > 1.0 + DISK_SLACK {
            return Err(CurveError::OutsideDisk(z.norm()));
        }
        Ok(())
    }

    pub fn eval(&self, z: Complex64) -> Result<Vec<Complex64>, CurveError> {
        Self::check_disk(z)?;
        Ok(self.eval_unchecked(z))
    }

    /// Evaluation without the closed-disk check. The truncated series are
    /// polynomials, so this is well defined on all of ℂ.
    pub(crate) fn eval_unchecked(&self, z: Complex64) -> Vec<Complex64> {
        std::iter::once(self.c * z.powu(self.k))
            .chain(self.tail.iter().map(|s| s.eval(z)))
            .collect()
    }

    pub fn derivative(&self, z: Complex64) -> Vec<Complex64> {
        let first = self.c * f64::from(self.k) * z.powu(self.k - 1);
        std::iter::once(first)
            .chain(self.tail.iter().map(|s| s.eval_derivative(z)))
            .collect()
    }

    /// Coefficient vector of `z^k` in φ.
    pub fn leading_vector(&self) -> Vec<Complex64> {
        std::iter::once(self.c)
            .chain(self.tail.iter().map(|s| s.coefficient(self.k)))
            .collect()
    }

    /// Complex multiplicity of the branch point, read off the series.
    pub fn multiplicity(&self) -> Result<u32, CurveError> {
        multiplicity_of(&self.coordinates())
    }
}

/// Minimum vanishing order over a list of coordinate series.
pub fn multiplicity_of(coordinates: &[TruncatedSeries]) -> Result<u32, CurveError> {
    coordinates
        .iter()
        .filter_map(TruncatedSeries::order)
        .min()
        .ok_or_else(|| CurveError::InvalidBranch("all coordinates vanish identically".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn cusp_evaluation() {
        let cusp = PuiseuxBranch::monomial_cusp(2, 3).unwrap();
        let origin = cusp.eval(re(0.0)).unwrap();
        assert_eq!(origin, vec![re(0.0), re(0.0)]);
        let half = cusp.eval(re(0.5)).unwrap();
        assert!((half[0] - re(0.25)).norm() < 1e-15);
        assert!((half[1] - re(0.125)).norm() < 1e-15);
    }

    #[test]
    fn linear_branch_at_i() {
        let line = PuiseuxBranch::new(1, re(1.0), vec![TruncatedSeries::zero(1)]).unwrap();
        let image = line.eval(Complex64::i()).unwrap();
        assert_eq!(image, vec![Complex64::i(), re(0.0)]);
    }

    #[test]
    fn outside_disk_is_domain_error() {
        let cusp = PuiseuxBranch::monomial_cusp(2, 3).unwrap();
        assert!(matches!(cusp.eval(re(1.5)), Err(CurveError::OutsideDisk(_))));
    }

    #[test]
    fn multiplicities() {
        assert_eq!(PuiseuxBranch::monomial_cusp(2, 3).unwrap().multiplicity().unwrap(), 2);
        assert_eq!(PuiseuxBranch::monomial_cusp(3, 4).unwrap().multiplicity().unwrap(), 3);
        let parabola = PuiseuxBranch::new(1, re(1.0), vec![TruncatedSeries::monomial(2, re(1.0)).unwrap()]).unwrap();
        assert_eq!(parabola.multiplicity().unwrap(), 1);
        assert!(multiplicity_of(&[TruncatedSeries::zero(3), TruncatedSeries::zero(2)]).is_err());
    }

    #[test]
    fn singular_normal_form_enforced() {
        let tail = TruncatedSeries::monomial(2, re(1.0)).unwrap();
        assert!(PuiseuxBranch::new(2, re(1.0), vec![tail]).is_err());
        assert!(PuiseuxBranch::new(2, re(0.0), vec![TruncatedSeries::zero(3)]).is_err());
    }
}
