use num_complex::Complex64;

use super::CurveError;

/// A polynomial truncation of a power series with no constant term.
///
/// Terms are stored sparsely as `(exponent, coefficient)` pairs with strictly
/// increasing exponents in `1..=truncation_degree`. The empty term list is the
/// explicit zero series.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    terms: Vec<(u32, Complex64)>,
    truncation_degree: u32,
}

impl TruncatedSeries {
    pub fn new(terms: Vec<(u32, Complex64)>, truncation_degree: u32) -> Result<Self, CurveError> {
        if truncation_degree == 0 {
            return Err(CurveError::InvalidSeries("truncation degree must be positive".into()));
        }
        let mut previous = 0u32;
        for &(exponent, coefficient) in &terms {
            if exponent == 0 {
                return Err(CurveError::InvalidSeries(
                    "exponents must be positive (the series has no constant term)".into(),
                ));
            }
            if exponent <= previous {
                return Err(CurveError::InvalidSeries(format!(
                    "exponents must be strictly increasing, got {exponent} after {previous}"
                )));
            }
            if exponent > truncation_degree {
                return Err(CurveError::InvalidSeries(format!(
                    "exponent {exponent} exceeds truncation degree {truncation_degree}"
                )));
            }
            if coefficient == Complex64::new(0.0, 0.0) || !coefficient.is_finite() {
                return Err(CurveError::InvalidSeries(format!(
                    "coefficient of z^{exponent} must be finite and nonzero"
                )));
            }
            previous = exponent;
        }
        Ok(Self {
            terms,
            truncation_degree,
        })
    }

    /// Builds a series from unordered terms, summing repeated exponents and
    /// dropping terms that cancel.
    pub fn from_terms<I>(terms: I) -> Result<Self, CurveError>
    where
        I: IntoIterator<Item = (u32, Complex64)>,
    {
        let mut collected = std::collections::BTreeMap::new();
        for (exponent, coefficient) in terms {
            *collected.entry(exponent).or_insert(Complex64::new(0.0, 0.0)) += coefficient;
        }
        let terms: Vec<_> = collected
            .into_iter()
            .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
            .collect();
        let degree = terms.last().map_or(1, |t| t.0);
        Self::new(terms, degree)
    }

    pub fn zero(truncation_degree: u32) -> Self {
        Self {
            terms: Vec::new(),
            truncation_degree: truncation_degree.max(1),
        }
    }

    pub fn monomial(exponent: u32, coefficient: Complex64) -> Result<Self, CurveError> {
        Self::new(vec![(exponent, coefficient)], exponent.max(1))
    }

    pub fn terms(&self) -> &[(u32, Complex64)] {
        &self.terms
    }

    pub fn truncation_degree(&self) -> u32 {
        self.truncation_degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Vanishing order at 0; `None` for the zero series.
    pub fn order(&self) -> Option<u32> {
        self.terms.first().map(|t| t.0)
    }

    pub fn coefficient(&self, exponent: u32) -> Complex64 {
        self.terms
            .iter()
            .find(|t| t.0 == exponent)
            .map_or(Complex64::new(0.0, 0.0), |t| t.1)
    }

    /// Horner evaluation over the sparse exponent list.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut upper = match self.terms.last() {
            Some(t) => t.0,
            None => return acc,
        };
        for &(exponent, coefficient) in self.terms.iter().rev() {
            acc = acc * z.powu(upper - exponent) + coefficient;
            upper = exponent;
        }
        acc * z.powu(upper)
    }

    pub fn eval_derivative(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut upper = match self.terms.last() {
            Some(t) => t.0 - 1,
            None => return acc,
        };
        for &(exponent, coefficient) in self.terms.iter().rev() {
            acc = acc * z.powu(upper - (exponent - 1)) + coefficient * f64::from(exponent);
            upper = exponent - 1;
        }
        acc * z.powu(upper)
    }
}
