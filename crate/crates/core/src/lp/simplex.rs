//! Dense revised two-phase simplex for `min cᵀx  s.t.  A x = b, x ≥ 0`.
//!
//! The basis inverse is kept explicitly, updated by eta transformations and
//! rebuilt from scratch every `REFACTOR_INTERVAL` pivots. Pricing is Dantzig's
//! most-negative reduced cost with lowest-index ties; after
//! `DEGENERATE_STREAK` consecutive degenerate pivots it switches to Bland's
//! rule until a pivot makes progress. The ratio test is Harris's two-pass
//! rule with ties to the smallest basic variable index.

use super::LpError;
use crate::linalg::invert;

const REFACTOR_INTERVAL: usize = 64;
const DEGENERATE_STREAK: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimplexOptions {
    /// Primal feasibility and reduced-cost tolerance.
    pub tolerance: f64,
    /// Smallest admissible pivot magnitude in the ratio test.
    pub pivot_tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-9,
            pivot_tolerance: 1e-9,
            max_iterations: 200_000,
        }
    }
}

/// Standard-form problem with column-major `a` (`rows × cols`).
#[derive(Clone, Debug)]
pub struct StandardForm {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

impl StandardForm {
    pub fn column(&self, j: usize) -> &[f64] {
        &self.a[j * self.rows..(j + 1) * self.rows]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimplexSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// Simplex multipliers `π = c_Bᵀ B⁻¹`, the optimal solution of the dual
    /// `max bᵀπ  s.t.  Aᵀπ ≤ c`.
    pub duals: Vec<f64>,
    pub iterations: usize,
    /// Largest violation of `A x = b` at the returned point.
    pub max_residual: f64,
    /// Phase-1 artificials that stayed basic at zero (redundant rows).
    pub redundant_rows: usize,
}

struct Tableau<'a> {
    lp: &'a StandardForm,
    /// Row signs applied so that the right-hand side is nonnegative.
    sign: Vec<f64>,
    b: Vec<f64>,
    /// Basic variable per row; indices `≥ cols` are artificials.
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    /// Row-major `rows × rows`.
    binv: Vec<f64>,
    xb: Vec<f64>,
    since_refactor: usize,
    iterations: usize,
}

impl<'a> Tableau<'a> {
    fn new(lp: &'a StandardForm) -> Self {
        let m = lp.rows;
        let sign: Vec<f64> = lp.b.iter().map(|&v| if v < 0.0 { -1.0 } else { 1.0 }).collect();
        let b: Vec<f64> = lp.b.iter().zip(&sign).map(|(v, s)| v * s).collect();
        let mut binv = vec![0.0; m * m];
        for i in 0..m {
            binv[i * m + i] = 1.0;
        }
        Self {
            lp,
            sign,
            xb: b.clone(),
            b,
            basis: (lp.cols..lp.cols + m).collect(),
            is_basic: vec![false; lp.cols + m],
            binv,
            since_refactor: 0,
            iterations: 0,
        }
        .mark_basic()
    }

    fn mark_basic(mut self) -> Self {
        for &j in &self.basis {
            self.is_basic[j] = true;
        }
        self
    }

    /// Column `j` of the sign-adjusted constraint matrix, artificials included.
    fn column_into(&self, j: usize, out: &mut [f64]) {
        let m = self.lp.rows;
        if j < self.lp.cols {
            for ((o, &a), &s) in out.iter_mut().zip(self.lp.column(j)).zip(&self.sign) {
                *o = a * s;
            }
        } else {
            out.iter_mut().for_each(|o| *o = 0.0);
            out[j - self.lp.cols] = 1.0;
        }
        debug_assert_eq!(out.len(), m);
    }

    fn refactor(&mut self) -> Result<(), LpError> {
        let m = self.lp.rows;
        let mut bmat = vec![0.0; m * m];
        let mut col = vec![0.0; m];
        for (i, &j) in self.basis.iter().enumerate() {
            self.column_into(j, &mut col);
            for r in 0..m {
                bmat[r * m + i] = col[r];
            }
        }
        self.binv = invert(&bmat, m, 1e-13).ok_or(LpError::SingularBasis)?;
        for r in 0..m {
            self.xb[r] = (0..m).map(|k| self.binv[r * m + k] * self.b[k]).sum();
        }
        self.since_refactor = 0;
        Ok(())
    }

    fn multipliers(&self, cost: &dyn Fn(usize) -> f64) -> Vec<f64> {
        let m = self.lp.rows;
        let cb: Vec<f64> = self.basis.iter().map(|&j| cost(j)).collect();
        (0..m)
            .map(|k| (0..m).map(|i| cb[i] * self.binv[i * m + k]).sum())
            .collect()
    }

    fn reduced_cost(&self, j: usize, pi: &[f64], cost: &dyn Fn(usize) -> f64) -> f64 {
        let col = self.lp.column(j);
        let dot: f64 = col.iter().zip(pi).zip(&self.sign).map(|((a, p), s)| a * p * s).sum();
        cost(j) - dot
    }

    /// Runs simplex iterations over structural columns with the given costs.
    fn optimize(&mut self, cost: &dyn Fn(usize) -> f64, options: &SimplexOptions) -> Result<(), LpError> {
        let m = self.lp.rows;
        let mut degenerate = 0usize;
        let mut column = vec![0.0; m];
        let mut u = vec![0.0; m];
        loop {
            if self.iterations >= options.max_iterations {
                return Err(LpError::IterationLimit(self.iterations));
            }
            if self.since_refactor >= REFACTOR_INTERVAL {
                self.refactor()?;
            }
            let pi = self.multipliers(cost);
            let bland = degenerate > DEGENERATE_STREAK;
            let mut entering = None;
            let mut best = -options.tolerance;
            for j in 0..self.lp.cols {
                if self.is_basic[j] {
                    continue;
                }
                let d = self.reduced_cost(j, &pi, cost);
                if d < best {
                    entering = Some(j);
                    if bland {
                        break;
                    }
                    best = d;
                }
            }
            let Some(q) = entering else { return Ok(()) };
            self.column_into(q, &mut column);
            self.ftran(&column, &mut u);
            let mut leave = self.ratio_test(&u, options);
            if leave.is_none() && self.since_refactor > 0 {
                // Rule out drift in the eta file before declaring unboundedness.
                self.refactor()?;
                self.ftran(&column, &mut u);
                leave = self.ratio_test(&u, options);
            }
            let Some((r, theta)) = leave else {
                return Err(LpError::Unbounded);
            };
            if theta <= options.tolerance {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(r, q, &u, theta);
        }
    }

    fn ftran(&self, column: &[f64], u: &mut [f64]) {
        let m = self.lp.rows;
        for r in 0..m {
            u[r] = (0..m).map(|k| self.binv[r * m + k] * column[k]).sum();
        }
    }

    /// Harris two-pass ratio test: bound the step with the feasibility
    /// tolerance as slack, then take the largest pivot among the rows that
    /// reach it (ties to the smallest basic index).
    fn ratio_test(&self, u: &[f64], options: &SimplexOptions) -> Option<(usize, f64)> {
        let scale = u.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let pivot_min = options.pivot_tolerance * scale.max(1e-2);
        let mut bound = f64::INFINITY;
        for (r, &ur) in u.iter().enumerate() {
            if ur > pivot_min {
                bound = bound.min((self.xb[r].max(0.0) + options.tolerance) / ur);
            }
        }
        if bound == f64::INFINITY {
            return None;
        }
        let mut best: Option<usize> = None;
        for (r, &ur) in u.iter().enumerate() {
            if ur > pivot_min && self.xb[r].max(0.0) / ur <= bound {
                best = match best {
                    Some(b) if u[b] > ur || (u[b] == ur && self.basis[b] < self.basis[r]) => Some(b),
                    _ => Some(r),
                };
            }
        }
        best.map(|r| (r, self.xb[r].max(0.0) / u[r]))
    }

    fn pivot(&mut self, r: usize, q: usize, u: &[f64], theta: f64) {
        let m = self.lp.rows;
        for i in 0..m {
            if i != r {
                self.xb[i] -= theta * u[i];
            }
        }
        self.xb[r] = theta;
        let pr = u[r];
        for k in 0..m {
            self.binv[r * m + k] /= pr;
        }
        for i in 0..m {
            if i == r || u[i] == 0.0 {
                continue;
            }
            let f = u[i];
            for k in 0..m {
                self.binv[i * m + k] -= f * self.binv[r * m + k];
            }
        }
        self.is_basic[self.basis[r]] = false;
        self.is_basic[q] = true;
        self.basis[r] = q;
        self.since_refactor += 1;
        self.iterations += 1;
    }

    /// Pivots zero-level artificials out of the basis where a structural
    /// column can replace them; returns how many had to stay.
    fn drive_out_artificials(&mut self) -> Result<usize, LpError> {
        let m = self.lp.rows;
        let mut column = vec![0.0; m];
        let mut u = vec![0.0; m];
        let mut stuck = 0;
        for r in 0..m {
            if self.basis[r] < self.lp.cols {
                continue;
            }
            let mut replacement = None;
            for j in 0..self.lp.cols {
                if self.is_basic[j] {
                    continue;
                }
                // (B⁻¹ A_j)_r
                self.column_into(j, &mut column);
                let v: f64 = (0..m).map(|k| self.binv[r * m + k] * column[k]).sum();
                if v.abs() > 1e-7 {
                    replacement = Some(j);
                    break;
                }
            }
            match replacement {
                Some(j) => {
                    self.column_into(j, &mut column);
                    self.ftran(&column, &mut u);
                    let theta = self.xb[r] / u[r];
                    self.pivot(r, j, &u, theta);
                }
                None => stuck += 1,
            }
        }
        if self.since_refactor > 0 {
            self.refactor()?;
        }
        Ok(stuck)
    }
}

pub fn solve(lp: &StandardForm, options: &SimplexOptions) -> Result<SimplexSolution, LpError> {
    assert_eq!(lp.a.len(), lp.rows * lp.cols, "matrix shape");
    assert_eq!(lp.b.len(), lp.rows, "rhs length");
    assert_eq!(lp.c.len(), lp.cols, "cost length");
    let mut t = Tableau::new(lp);
    let cols = lp.cols;
    let phase1 = |j: usize| if j >= cols { 1.0 } else { 0.0 };
    t.optimize(&phase1, options)?;
    t.refactor()?;
    let infeasibility: f64 = t
        .basis
        .iter()
        .zip(&t.xb)
        .filter(|(&j, _)| j >= cols)
        .map(|(_, &x)| x.max(0.0))
        .sum();
    let scale = 1.0 + t.b.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if infeasibility > options.tolerance * scale * 10.0 {
        return Err(LpError::Infeasible(infeasibility));
    }
    let redundant_rows = t.drive_out_artificials()?;
    let phase2 = |j: usize| if j >= cols { 0.0 } else { lp.c[j] };
    t.optimize(&phase2, options)?;
    t.refactor()?;
    let mut x = vec![0.0; cols];
    for (&j, &v) in t.basis.iter().zip(&t.xb) {
        if j < cols {
            x[j] = v.max(0.0);
        }
    }
    let pi_signed = t.multipliers(&phase2);
    let duals: Vec<f64> = pi_signed.iter().zip(&t.sign).map(|(p, s)| p * s).collect();
    let objective = x.iter().zip(&lp.c).map(|(x, c)| x * c).sum();
    let mut max_residual = 0.0f64;
    for r in 0..lp.rows {
        let ax: f64 = (0..cols)
            .filter(|&j| x[j] != 0.0)
            .map(|j| lp.a[j * lp.rows + r] * x[j])
            .sum();
        max_residual = max_residual.max((ax - lp.b[r]).abs());
    }
    Ok(SimplexSolution {
        x,
        objective,
        duals,
        iterations: t.iterations,
        max_residual,
        redundant_rows,
    })
}
