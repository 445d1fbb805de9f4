//! Dense kernels: rank-revealing Gram–Schmidt, triangular solves, inversion.

use num_complex::Complex64;
use thiserror::Error;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn dot_conj(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error(
    "functional is not constant on the polynomials that vanish on the samples (residual {residual:e}, scale {scale:e})"
)]
pub struct InconsistentFunctional {
    pub residual: f64,
    pub scale: f64,
}

/// Column-pivoted factorization `A[:, kept] = Q R` with `Q^H Q = N·I`.
///
/// Columns whose residual after projection falls below the rank tolerance are
/// dropped; `s` expresses them in `Q`: `A[:, dropped[j]] ≈ Σ_i Q[:, i]·s[i][j]`.
#[derive(Clone, Debug)]
pub struct ReducedBasis {
    pub rows: usize,
    /// Columns of `Q`, each of squared norm `rows`.
    pub q: Vec<Vec<Complex64>>,
    /// Upper triangular, `r[i][j]` for pivot positions `i ≤ j`.
    pub r: Vec<Vec<Complex64>>,
    /// Original column index of each pivot position.
    pub kept: Vec<usize>,
    pub dropped: Vec<usize>,
    pub s: Vec<Vec<Complex64>>,
    /// `max |R_ii| / min |R_ii|`.
    pub condition: f64,
}

/// Pivoted modified Gram–Schmidt with one reorthogonalization pass. A column
/// is dropped once its residual is at most `rank_tolerance` times the largest
/// input column norm.
pub fn reduce(columns: &[Vec<Complex64>], rank_tolerance: f64) -> ReducedBasis {
    let m = columns.len();
    let rows = columns.first().map_or(0, Vec::len);
    let scale = (rows as f64).sqrt();
    let max_norm = columns.iter().map(|c| norm(c)).fold(0.0, f64::max);
    let mut work: Vec<Vec<Complex64>> = columns.to_vec();
    let mut coeff: Vec<Vec<Complex64>> = vec![Vec::new(); m];
    let mut remaining: Vec<usize> = (0..m).collect();
    let mut q_unit: Vec<Vec<Complex64>> = Vec::new();
    let mut kept = Vec::new();
    let mut diag = Vec::new();
    let mut dropped = Vec::new();
    while !remaining.is_empty() {
        let (pos, _) = remaining
            .iter()
            .enumerate()
            .map(|(p, &l)| (p, norm(&work[l])))
            .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        let j = remaining[pos];
        for (i, qi) in q_unit.iter().enumerate() {
            let c = dot_conj(qi, &work[j]);
            for (w, q) in work[j].iter_mut().zip(qi) {
                *w -= q * c;
            }
            coeff[j][i] += c;
        }
        let nj = norm(&work[j]);
        remaining.remove(pos);
        if !(nj > rank_tolerance * max_norm) {
            // Largest residual is negligible, so every remaining column is.
            dropped.push(j);
            dropped.append(&mut remaining);
            break;
        }
        let qi: Vec<Complex64> = work[j].iter().map(|w| w / nj).collect();
        for &l in &remaining {
            let c = dot_conj(&qi, &work[l]);
            for (w, q) in work[l].iter_mut().zip(&qi) {
                *w -= q * c;
            }
            coeff[l].push(c);
        }
        q_unit.push(qi);
        kept.push(j);
        diag.push(nj);
    }
    let rank = kept.len();
    let mut r = vec![vec![zero(); rank]; rank];
    for (p, &j) in kept.iter().enumerate() {
        for i in 0..p {
            r[i][p] = coeff[j][i] / scale;
        }
        r[p][p] = Complex64::new(diag[p] / scale, 0.0);
    }
    dropped.sort_unstable();
    let s = (0..rank)
        .map(|i| {
            dropped
                .iter()
                .map(|&d| dot_conj(&q_unit[i], &columns[d]) / scale)
                .collect()
        })
        .collect();
    let condition = if rank == 0 {
        f64::INFINITY
    } else {
        diag.iter().copied().fold(0.0, f64::max) / diag.iter().copied().fold(f64::INFINITY, f64::min)
    };
    let q = q_unit
        .into_iter()
        .map(|col| col.into_iter().map(|w| w * scale).collect())
        .collect();
    ReducedBasis {
        rows,
        q,
        r,
        kept,
        dropped,
        s,
        condition,
    }
}

impl ReducedBasis {
    pub fn rank(&self) -> usize {
        self.kept.len()
    }

    /// `h` with `h·a = g·c` for `a = R c[kept]`, checking that `g` agrees
    /// with the dropped columns' expansion to `consistency` relative accuracy.
    pub fn transform_functional(
        &self,
        g: &[Complex64],
        consistency: f64,
    ) -> Result<Vec<Complex64>, InconsistentFunctional> {
        let rank = self.rank();
        // Rᵀ h = g[kept], forward substitution (no conjugation).
        let mut h = vec![zero(); rank];
        for p in 0..rank {
            let mut acc = g[self.kept[p]];
            for i in 0..p {
                acc -= self.r[i][p] * h[i];
            }
            h[p] = acc / self.r[p][p];
        }
        let mut residual = 0.0f64;
        let mut scale = g.iter().map(|x| x.norm()).fold(1.0, f64::max);
        for (j, &d) in self.dropped.iter().enumerate() {
            let mut predicted = zero();
            let mut magnitude = 0.0;
            for i in 0..rank {
                let t = self.s[i][j] * h[i];
                predicted += t;
                magnitude += t.norm();
            }
            residual = residual.max((g[d] - predicted).norm());
            scale = scale.max(magnitude);
        }
        if residual > consistency * scale {
            return Err(InconsistentFunctional { residual, scale });
        }
        Ok(h)
    }

    /// Full coefficient vector `c` (zero on dropped columns) with `R c[kept] = a`.
    pub fn coefficients(&self, a: &[Complex64], total: usize) -> Vec<Complex64> {
        let rank = self.rank();
        let mut ck = vec![zero(); rank];
        for p in (0..rank).rev() {
            let mut acc = a[p];
            for j in p + 1..rank {
                acc -= self.r[p][j] * ck[j];
            }
            ck[p] = acc / self.r[p][p];
        }
        let mut c = vec![zero(); total];
        for (p, &j) in self.kept.iter().enumerate() {
            c[j] = ck[p];
        }
        c
    }
}

/// Inverse of a dense row-major `n×n` matrix by Gauss–Jordan elimination with
/// partial pivoting; `None` if a pivot falls below `tolerance`.
pub fn invert(matrix: &[f64], n: usize, tolerance: f64) -> Option<Vec<f64>> {
    let mut a = matrix.to_vec();
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        inv[i * n + i] = 1.0;
    }
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| a[x * n + col].abs().total_cmp(&a[y * n + col].abs()).then(y.cmp(&x)))?;
        if a[pivot * n + col].abs() <= tolerance {
            return None;
        }
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
                inv.swap(pivot * n + k, col * n + k);
            }
        }
        let p = a[col * n + col];
        for k in 0..n {
            a[col * n + k] /= p;
            inv[col * n + k] /= p;
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let f = a[row * n + col];
            if f == 0.0 {
                continue;
            }
            for k in 0..n {
                a[row * n + k] -= f * a[col * n + k];
                inv[row * n + k] -= f * inv[col * n + k];
            }
        }
    }
    Some(inv)
}

/// Least-squares solution of `X β ≈ y` for real `X` given by columns.
/// Returns `None` when the columns are numerically dependent.
pub fn least_squares(columns: &[Vec<f64>], y: &[f64]) -> Option<Vec<f64>> {
    let complex: Vec<Vec<Complex64>> = columns
        .iter()
        .map(|c| c.iter().map(|&x| Complex64::new(x, 0.0)).collect())
        .collect();
    let reduced = reduce(&complex, 1e-12);
    if reduced.rank() < columns.len() {
        return None;
    }
    let n = reduced.rows as f64;
    let a: Vec<Complex64> = reduced
        .q
        .iter()
        .map(|q| q.iter().zip(y).map(|(q, &v)| q.conj() * v).sum::<Complex64>() / n)
        .collect();
    Some(
        reduced
            .coefficients(&a, columns.len())
            .into_iter()
            .map(|c| c.re)
            .collect(),
    )
}
