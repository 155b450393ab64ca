//! Naive dense reference implementations, used only as test oracles.
//!
//! Everything here works on plain `Vec<f64>` / `Vec<u8>` data with explicit
//! index loops, independent of the packed and sparse paths in the library.
//! Summation order is ascending index order, as in the library.

#![allow(dead_code, clippy::needless_range_loop)]

#[derive(Debug, Clone, PartialEq)]
pub struct DenseModel {
    pub m: usize,
    pub n: usize,
    /// `n` rows of `m + n` weights.
    pub w: Vec<Vec<f64>>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

pub fn heaviside(z: f64) -> u8 {
    if z > 0.0 {
        1
    } else {
        0
    }
}

fn concat(x: &[u8], h: &[u8]) -> Vec<u8> {
    x.iter().chain(h.iter()).copied().collect()
}

pub fn step(model: &DenseModel, x: &[u8], h: &[u8]) -> Vec<u8> {
    let v = concat(x, h);
    let mut out = Vec::with_capacity(model.n);
    for i in 0..model.n {
        let mut acc = 0.0;
        for j in 0..model.m + model.n {
            acc += model.w[i][j] * v[j] as f64;
        }
        out.push(heaviside(acc + model.b[i]));
    }
    out
}

pub fn reconstruct(model: &DenseModel, h_next: &[u8]) -> (Vec<u8>, Vec<u8>) {
    let mut full = Vec::with_capacity(model.m + model.n);
    for j in 0..model.m + model.n {
        let mut acc = 0.0;
        for i in 0..model.n {
            acc += model.w[i][j] * h_next[i] as f64;
        }
        full.push(heaviside(acc + model.a[j]));
    }
    let h_recon = full.split_off(model.m);
    (full, h_recon)
}

pub struct DenseTrace {
    pub h_next: Vec<u8>,
    pub x_recon: Vec<u8>,
    pub h_recon: Vec<u8>,
}

/// One learning step with every update computed from the pre-update parameters.
#[allow(clippy::too_many_arguments)]
pub fn train_step(
    model: &mut DenseModel,
    r_x: f64,
    r_h: f64,
    d: f64,
    use_next_state: bool,
    x: &[u8],
    h: &[u8],
) -> DenseTrace {
    let (m, n) = (model.m, model.n);
    let h_next = step(model, x, h);
    let (x_recon, h_recon) = reconstruct(model, &h_next);
    let v = concat(x, h);
    let vr = concat(&x_recon, &h_recon);
    let mut scaled = vec![0.0; m + n];
    for j in 0..m + n {
        let rate = if j < m { r_x } else { r_h };
        scaled[j] = rate * (v[j] as f64 - vr[j] as f64);
    }
    let source = if use_next_state { &h_next } else { h };
    let mut dw = vec![vec![0.0; m + n]; n];
    for i in 0..n {
        for j in 0..m + n {
            dw[i][j] = source[i] as f64 * scaled[j];
        }
    }
    for i in 0..n {
        for j in 0..m + n {
            model.w[i][j] += dw[i][j];
        }
    }
    for j in 0..m + n {
        model.a[j] += scaled[j];
    }
    for i in 0..n {
        model.b[i] += r_h * (d - h_next[i] as f64);
    }
    DenseTrace {
        h_next,
        x_recon,
        h_recon,
    }
}

pub fn rollback(model: &DenseModel, h_next: &[u8], k: usize) -> Vec<(Vec<u8>, Vec<u8>)> {
    let mut out = Vec::new();
    let mut current = h_next.to_vec();
    for _ in 0..k {
        let (x, h) = reconstruct(model, &current);
        current = h.clone();
        out.push((x, h));
    }
    out
}

/// Sequential featurization from a zero state; `average` selects the mean
/// state over each sample, otherwise the final state.
pub fn featurize(model: &DenseModel, samples: &[Vec<usize>], average: bool) -> Vec<Vec<f64>> {
    let mut h = vec![0u8; model.n];
    let mut rows = Vec::new();
    for sample in samples {
        let mut sum = vec![0.0; model.n];
        for &c in sample {
            let mut x = vec![0u8; model.m];
            x[c] = 1;
            h = step(model, &x, &h);
            for i in 0..model.n {
                sum[i] += h[i] as f64;
            }
        }
        if average {
            rows.push(sum.iter().map(|s| s / sample.len() as f64).collect());
        } else {
            rows.push(h.iter().map(|&v| v as f64).collect());
        }
    }
    rows
}

/// Ridge regression with one-hot targets and an unpenalised intercept,
/// solved by Gaussian elimination with partial pivoting on the normal
/// equations. Returns `dim + 1` rows of `classes` coefficients, intercept last.
pub fn ridge(
    features: &[Vec<f64>],
    labels: &[usize],
    classes: usize,
    lambda: f64,
) -> Vec<Vec<f64>> {
    let dim = features[0].len();
    let p = dim + 1;
    let augmented: Vec<Vec<f64>> = features
        .iter()
        .map(|r| r.iter().copied().chain(std::iter::once(1.0)).collect())
        .collect();
    let mut a = vec![vec![0.0; p + classes]; p];
    for r in 0..p {
        for c in 0..p {
            let mut s = 0.0;
            for row in &augmented {
                s += row[r] * row[c];
            }
            a[r][c] = s;
        }
        if r < dim {
            a[r][r] += lambda;
        }
        for k in 0..classes {
            let mut s = 0.0;
            for (row, &y) in augmented.iter().zip(labels) {
                if y == k {
                    s += row[r];
                }
            }
            a[r][p + k] = s;
        }
    }
    for col in 0..p {
        let pivot = (col..p)
            .max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).unwrap())
            .unwrap();
        a.swap(col, pivot);
        let diag = a[col][col];
        for r in col + 1..p {
            let f = a[r][col] / diag;
            for c in col..p + classes {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    let mut beta = vec![vec![0.0; classes]; p];
    for k in 0..classes {
        for r in (0..p).rev() {
            let mut s = a[r][p + k];
            for c in r + 1..p {
                s -= a[r][c] * beta[c][k];
            }
            beta[r][k] = s / a[r][r];
        }
    }
    beta
}
