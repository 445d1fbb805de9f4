//! Linear programming: the simplex kernel and the box-type problem
//! `max hᵀa  s.t.  G a ≤ 1` with free `a`, solved through its dual.

mod simplex;

use thiserror::Error;

pub use simplex::{solve, SimplexOptions, SimplexSolution, StandardForm};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("linear program is infeasible (phase-1 residual {0:e})")]
    Infeasible(f64),
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("simplex hit the iteration limit ({0})")]
    IterationLimit(usize),
    #[error("basis matrix became numerically singular")]
    SingularBasis,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HalfspaceSolution {
    pub a: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    /// `max_k (G a)_k − 1`, positive when a constraint is violated.
    pub max_violation: f64,
}

/// Maximizes `hᵀa` subject to `g_kᵀ a ≤ 1` for every row `g_k` of `g`
/// (`rows` rows of length `h.len()`, row-major), `a` free.
///
/// The dual `min Σ y_k  s.t.  Gᵀy = h, y ≥ 0` is solved and `a` is read off
/// its simplex multipliers. Dual infeasibility means the primal is unbounded.
pub fn maximize_over_halfspaces(
    g: &[f64],
    rows: usize,
    h: &[f64],
    options: &SimplexOptions,
) -> Result<HalfspaceSolution, LpError> {
    let dim = h.len();
    assert_eq!(g.len(), rows * dim, "constraint shape");
    // The optimum is linear in h; solve for h/‖h‖∞ so tolerances stay relative.
    let scale = h.iter().map(|x| x.abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(HalfspaceSolution {
            a: vec![0.0; dim],
            value: 0.0,
            iterations: 0,
            max_violation: -1.0,
        });
    }
    let lp = StandardForm {
        rows: dim,
        cols: rows,
        a: g.to_vec(),
        b: h.iter().map(|x| x / scale).collect(),
        c: vec![1.0; rows],
    };
    let solution = match solve(&lp, options) {
        Err(LpError::Infeasible(_)) => return Err(LpError::Unbounded),
        other => other?,
    };
    let a = solution.duals;
    let max_violation = g
        .chunks_exact(dim)
        .map(|row| row.iter().zip(&a).map(|(x, y)| x * y).sum::<f64>() - 1.0)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(HalfspaceSolution {
        value: h.iter().zip(&a).map(|(x, y)| x * y).sum(),
        a,
        iterations: solution.iterations,
        max_violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_constraints() {
        // |a1| ≤ 1, |a2| ≤ 2; max a1 − 3 a2 = 1 + 6
        let g = [1.0, 0.0, -1.0, 0.0, 0.0, 0.5, 0.0, -0.5];
        let s = maximize_over_halfspaces(&g, 4, &[1.0, -3.0], &SimplexOptions::default()).unwrap();
        assert!((s.value - 7.0).abs() < 1e-12);
        assert!((s.a[0] - 1.0).abs() < 1e-12 && (s.a[1] + 2.0).abs() < 1e-12);
        assert!(s.max_violation <= 1e-12);
    }

    #[test]
    fn open_direction_is_unbounded() {
        let g = [1.0, 0.0, -1.0, 0.0];
        assert_eq!(
            maximize_over_halfspaces(&g, 2, &[0.0, 1.0], &SimplexOptions::default()),
            Err(LpError::Unbounded)
        );
    }
}
