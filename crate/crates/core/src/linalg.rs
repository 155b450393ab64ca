//! Dense symmetric solves for the ridge normal equations.
//!
//! Matrices are square, row-major `Vec<f64>`. Right-hand sides are row-major
//! `p x k` blocks.

#![allow(clippy::needless_range_loop)]
// Pivot checks are negated so that NaN counts as a failure.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use crate::error::{Error, Result};

/// Relative pivot threshold below which a system is treated as singular.
const PIVOT_TOL: f64 = 1e-12;

pub(crate) enum Factor {
    /// Lower-triangular Cholesky factor.
    Cholesky(Vec<f64>),
    /// Packed LU with the row permutation.
    Lu(Vec<f64>, Vec<usize>),
}

fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

fn cholesky(a: &[f64], p: usize, scale: f64) -> Option<Vec<f64>> {
    let mut l = vec![0.0; p * p];
    for j in 0..p {
        let (done, rest) = l.split_at_mut(j * p);
        let row_j = &mut rest[..p];
        for k in 0..j {
            let row_k = &done[k * p..k * p + p];
            let mut s = a[j * p + k];
            for t in 0..k {
                s -= row_j[t] * row_k[t];
            }
            row_j[k] = s / row_k[k];
        }
        let mut d = a[j * p + j];
        for t in 0..j {
            d -= row_j[t] * row_j[t];
        }
        if !(d > PIVOT_TOL * scale) {
            return None;
        }
        row_j[j] = d.sqrt();
    }
    Some(l)
}

fn lu(a: &[f64], p: usize, scale: f64) -> Result<(Vec<f64>, Vec<usize>)> {
    let mut lu = a.to_vec();
    let mut perm: Vec<usize> = (0..p).collect();
    for col in 0..p {
        let mut pivot = col;
        for r in col + 1..p {
            if lu[r * p + col].abs() > lu[pivot * p + col].abs() {
                pivot = r;
            }
        }
        if !(lu[pivot * p + col].abs() > PIVOT_TOL * scale) {
            return Err(Error::Singular(format!(
                "pivot {col} of {p} vanished; use a regularization strength lambda > 0"
            )));
        }
        if pivot != col {
            for c in 0..p {
                lu.swap(col * p + c, pivot * p + c);
            }
            perm.swap(col, pivot);
        }
        let diag = lu[col * p + col];
        for r in col + 1..p {
            let f = lu[r * p + col] / diag;
            lu[r * p + col] = f;
            if f != 0.0 {
                for c in col + 1..p {
                    lu[r * p + c] -= f * lu[col * p + c];
                }
            }
        }
    }
    Ok((lu, perm))
}

impl Factor {
    /// Cholesky when the matrix is numerically positive definite, otherwise
    /// LU with partial pivoting.
    pub(crate) fn new(a: &[f64], p: usize) -> Result<Self> {
        let scale = max_abs(a).max(f64::MIN_POSITIVE);
        if let Some(l) = cholesky(a, p, scale) {
            return Ok(Factor::Cholesky(l));
        }
        log::debug!("Cholesky failed on {p}x{p} system, falling back to LU");
        let (lu, perm) = lu(a, p, scale)?;
        Ok(Factor::Lu(lu, perm))
    }

    /// Solves for each of the `k` columns of `rhs` (row-major `p x k`).
    pub(crate) fn solve(&self, rhs: &[f64], p: usize, k: usize) -> Vec<f64> {
        let mut x = vec![0.0; p * k];
        let mut col = vec![0.0; p];
        for c in 0..k {
            match self {
                Factor::Cholesky(l) => {
                    for i in 0..p {
                        let mut s = rhs[i * k + c];
                        for t in 0..i {
                            s -= l[i * p + t] * col[t];
                        }
                        col[i] = s / l[i * p + i];
                    }
                    for i in (0..p).rev() {
                        let mut s = col[i];
                        for t in i + 1..p {
                            s -= l[t * p + i] * col[t];
                        }
                        col[i] = s / l[i * p + i];
                    }
                }
                Factor::Lu(lu, perm) => {
                    for i in 0..p {
                        let mut s = rhs[perm[i] * k + c];
                        for t in 0..i {
                            s -= lu[i * p + t] * col[t];
                        }
                        col[i] = s;
                    }
                    for i in (0..p).rev() {
                        let mut s = col[i];
                        for t in i + 1..p {
                            s -= lu[i * p + t] * col[t];
                        }
                        col[i] = s / lu[i * p + i];
                    }
                }
            }
            for i in 0..p {
                x[i * k + c] = col[i];
            }
        }
        x
    }
}

/// `rhs - A x` for row-major `A` (`p x p`) and `x`, `rhs` (`p x k`).
pub(crate) fn residual(a: &[f64], x: &[f64], rhs: &[f64], p: usize, k: usize) -> Vec<f64> {
    let mut r = rhs.to_vec();
    for i in 0..p {
        let row = &a[i * p..(i + 1) * p];
        for (t, &v) in row.iter().enumerate() {
            if v != 0.0 {
                for c in 0..k {
                    r[i * k + c] -= v * x[t * k + c];
                }
            }
        }
    }
    r
}

pub(crate) fn frobenius(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
