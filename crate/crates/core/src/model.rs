//! The recurrent model: state update, reconstruction and the learning rules.
//!
//! The model holds a single weight matrix `W` of shape `n x (m + n)`, input
//! biases `a` (length `m + n`) and hidden biases `b` (length `n`). Given a
//! one-hot input `x` and the current state `h`:
//!
//! ```text
//! h_next           = H(W [x, h] + b)
//! [x_rec, h_rec]   = H(W^T h_next + a)
//! e                = rate (.) ([x, h] - [x_rec, h_rec])
//! W               += s (x) e         s = h_next (default) or h
//! a               += e
//! b               += r_h (.) (d - h_next)
//! ```
//!
//! `H` is the Heaviside step with `H(0) = 0`. All three updates are computed
//! from the pre-update parameters and applied together.
//!
//! Only active positions are touched: the forward pass sums the columns of
//! `W` at the set bits of `[x, h]` (from a transposed copy kept alongside), reconstruction sums the rows at the set
//! bits of `h_next`, and the weight update visits rows with `s[i] = 1` and
//! columns with a non-zero reconstruction error. Accumulation runs in
//! ascending index order, so results equal the dense computation exactly.

use serde::{Deserialize, Serialize};

use crate::binary::BinaryVector;
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Heaviside step: 1 for strictly positive input, 0 otherwise.
pub fn heaviside(pre_activation: &[f64]) -> Result<BinaryVector> {
    let mut out = BinaryVector::zeros(pre_activation.len());
    for (i, &z) in pre_activation.iter().enumerate() {
        if !z.is_finite() {
            return Err(Error::InvalidNumeric(format!("pre-activation {i} is {z}")));
        }
        if z > 0.0 {
            out.set(i, true);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct ModelParams {
    m: usize,
    n: usize,
    w: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
    /// Column-major copy of `w` (`(m + n) x n`), kept in sync on every update.
    wt: Vec<f64>,
}

impl PartialEq for ModelParams {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m
            && self.n == other.n
            && self.w == other.w
            && self.a == other.a
            && self.b == other.b
    }
}

fn transpose(w: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    let mut t = vec![0.0; w.len()];
    for (i, row) in w.chunks_exact(cols).enumerate() {
        for (j, &v) in row.iter().enumerate() {
            t[j * rows + i] = v;
        }
    }
    t
}

/// Which state vector forms the outer product in the weight update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UpdateSource {
    /// The state the reconstruction is compared against (`h`).
    PrevState,
    /// The state the reconstruction is computed from (`h_next`).
    #[default]
    NextState,
}

impl std::str::FromStr for UpdateSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prev-state" | "prev" => Ok(UpdateSource::PrevState),
            "next-state" | "next" => Ok(UpdateSource::NextState),
            other => Err(Error::Argument(format!(
                "unknown update source {other:?} (expected prev-state or next-state)"
            ))),
        }
    }
}

impl std::fmt::Display for UpdateSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            UpdateSource::PrevState => "prev-state",
            UpdateSource::NextState => "next-state",
        })
    }
}

/// Per-element learning rates and density targets.
#[derive(Debug, Clone, PartialEq)]
pub struct LearningConfig {
    /// Input learning rate, one entry per input element (length `m`).
    pub input_rate: Vec<f64>,
    /// State learning rate, one entry per state element (length `n`).
    pub state_rate: Vec<f64>,
    /// Target activation rate per hidden unit (length `n`).
    pub density: Vec<f64>,
    pub update_source: UpdateSource,
}

impl LearningConfig {
    /// Expands scalar rates into vectors for an `m`-input, `n`-state model.
    pub fn uniform(m: usize, n: usize, r_x: f64, r_h: f64, d: f64) -> Result<Self> {
        let cfg = LearningConfig {
            input_rate: vec![r_x; m],
            state_rate: vec![r_h; n],
            density: vec![d; n],
            update_source: UpdateSource::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_update_source(mut self, source: UpdateSource) -> Self {
        self.update_source = source;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, values) in [
            ("input rate", &self.input_rate),
            ("state rate", &self.state_rate),
        ] {
            if let Some(r) = values.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
                return Err(Error::Config(format!(
                    "{name} must be finite and >= 0, got {r}"
                )));
            }
        }
        if let Some(d) = self.density.iter().find(|d| !(0.0..=1.0).contains(*d)) {
            return Err(Error::Config(format!(
                "density target must lie in [0, 1], got {d}"
            )));
        }
        if self.density.len() != self.state_rate.len() {
            return Err(Error::dim(
                "density target",
                self.state_rate.len(),
                self.density.len(),
            ));
        }
        Ok(())
    }

    fn check_against(&self, params: &ModelParams) -> Result<()> {
        self.validate()?;
        if self.input_rate.len() != params.m {
            return Err(Error::dim("input rate", params.m, self.input_rate.len()));
        }
        if self.state_rate.len() != params.n {
            return Err(Error::dim("state rate", params.n, self.state_rate.len()));
        }
        Ok(())
    }
}

/// Per-step signals produced by [`ModelParams::train_step`].
#[derive(Debug, Clone, PartialEq)]
pub struct StepTrace {
    pub h_next: BinaryVector,
    pub x_recon: BinaryVector,
    pub h_recon: BinaryVector,
    /// Hamming distance between the true and reconstructed previous state.
    pub state_err: usize,
    /// Hamming distance between the true and reconstructed input.
    pub input_err: usize,
    /// Fraction of active units in `h_next`.
    pub density: f64,
}

impl ModelParams {
    /// Uniform initialisation in the open interval `(-1/(m+n), 1/(m+n))`.
    ///
    /// Draws are taken from [`SplitMix64`] in the order `W` (row-major), `a`, `b`.
    pub fn init(m: usize, n: usize, seed: u64) -> Result<Self> {
        check_sizes(m, n)?;
        let limit = 1.0 / (m + n) as f64;
        let mut rng = SplitMix64::new(seed);
        let mut draw =
            |len: usize| -> Vec<f64> { (0..len).map(|_| rng.next_symmetric(limit)).collect() };
        let w = draw(n * (m + n));
        let a = draw(m + n);
        let b = draw(n);
        let wt = transpose(&w, n, m + n);
        Ok(ModelParams { m, n, w, a, b, wt })
    }

    pub fn zeros(m: usize, n: usize) -> Result<Self> {
        check_sizes(m, n)?;
        Ok(ModelParams {
            m,
            n,
            w: vec![0.0; n * (m + n)],
            a: vec![0.0; m + n],
            b: vec![0.0; n],
            wt: vec![0.0; n * (m + n)],
        })
    }

    /// Assembles parameters from a row-major `W`, `a` and `b`, validating
    /// shapes and finiteness.
    pub fn from_parts(m: usize, n: usize, w: Vec<f64>, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        check_sizes(m, n)?;
        if w.len() != n * (m + n) {
            return Err(Error::dim("weight matrix", n * (m + n), w.len()));
        }
        if a.len() != m + n {
            return Err(Error::dim("input biases", m + n, a.len()));
        }
        if b.len() != n {
            return Err(Error::dim("hidden biases", n, b.len()));
        }
        if w.iter().chain(&a).chain(&b).any(|v| !v.is_finite()) {
            return Err(Error::InvalidNumeric(
                "parameters contain NaN or infinity".into(),
            ));
        }
        let wt = transpose(&w, n, m + n);
        Ok(ModelParams { m, n, w, a, b, wt })
    }

    pub fn into_parts(self) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        (self.w, self.a, self.b)
    }

    pub fn input_dim(&self) -> usize {
        self.m
    }

    pub fn state_dim(&self) -> usize {
        self.n
    }

    /// Width of `[x, h]`.
    pub fn visible_dim(&self) -> usize {
        self.m + self.n
    }

    /// Row-major `n x (m + n)` weights.
    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    pub fn weight(&self, row: usize, col: usize) -> f64 {
        self.w[row * (self.m + self.n) + col]
    }

    pub fn input_biases(&self) -> &[f64] {
        &self.a
    }

    pub fn hidden_biases(&self) -> &[f64] {
        &self.b
    }

    fn check_input(&self, x: &BinaryVector, h: &BinaryVector) -> Result<()> {
        if x.len() != self.m {
            return Err(Error::dim("input vector", self.m, x.len()));
        }
        if h.len() != self.n {
            return Err(Error::dim("state vector", self.n, h.len()));
        }
        Ok(())
    }

    /// Positions of set bits in `[x, h]`, ascending.
    fn active_positions(&self, x: &BinaryVector, h: &BinaryVector, out: &mut Vec<usize>) {
        out.clear();
        out.extend(x.iter_ones());
        out.extend(h.iter_ones().map(|i| i + self.m));
    }

    /// Computes `H(W [x, h] + b)` from the active positions of `[x, h]`,
    /// summing columns of `W` in ascending position order.
    fn forward_active(
        &self,
        active: &[usize],
        acc: &mut [f64],
        out: &mut BinaryVector,
    ) -> Result<()> {
        let n = self.n;
        acc.iter_mut().for_each(|v| *v = 0.0);
        for &j in active {
            let col = &self.wt[j * n..(j + 1) * n];
            for (s, w) in acc.iter_mut().zip(col) {
                *s += *w;
            }
        }
        out.clear();
        for (i, (s, b)) in acc.iter().zip(&self.b).enumerate() {
            let z = s + b;
            if !z.is_finite() {
                return Err(Error::InvalidNumeric(format!(
                    "hidden pre-activation {i} is {z}"
                )));
            }
            if z > 0.0 {
                out.set(i, true);
            }
        }
        Ok(())
    }

    /// Computes `W^T h_next + a` into `acc` (length `m + n`).
    fn backward_pre(&self, h_next: &BinaryVector, acc: &mut [f64]) {
        let cols = self.m + self.n;
        acc.iter_mut().for_each(|v| *v = 0.0);
        for i in h_next.iter_ones() {
            let row = &self.w[i * cols..(i + 1) * cols];
            for (s, w) in acc.iter_mut().zip(row) {
                *s += *w;
            }
        }
        for (s, a) in acc.iter_mut().zip(&self.a) {
            *s += *a;
        }
    }

    /// Next state `H(W [x, h] + b)`.
    pub fn step(&self, x: &BinaryVector, h: &BinaryVector) -> Result<BinaryVector> {
        self.check_input(x, h)?;
        let mut active = Vec::with_capacity(x.count_ones() + h.count_ones());
        self.active_positions(x, h, &mut active);
        let mut out = BinaryVector::zeros(self.n);
        let mut acc = vec![0.0; self.n];
        self.forward_active(&active, &mut acc, &mut out)?;
        Ok(out)
    }

    /// Reconstructed `(x, h)` from a state: `H(W^T h_next + a)` split at `m`.
    pub fn reconstruct(&self, h_next: &BinaryVector) -> Result<(BinaryVector, BinaryVector)> {
        if h_next.len() != self.n {
            return Err(Error::dim("state vector", self.n, h_next.len()));
        }
        let mut acc = vec![0.0; self.m + self.n];
        self.backward_pre(h_next, &mut acc);
        let full = heaviside(&acc)?;
        Ok(full.split_at(self.m))
    }

    /// Chains `k` reconstructions backwards from `h_next`.
    pub fn rollback(
        &self,
        h_next: &BinaryVector,
        k: usize,
    ) -> Result<Vec<(BinaryVector, BinaryVector)>> {
        if k == 0 {
            return Err(Error::Argument("rollback depth must be at least 1".into()));
        }
        let mut out: Vec<(BinaryVector, BinaryVector)> = Vec::with_capacity(k);
        let mut current = h_next.clone();
        for _ in 0..k {
            let pair = self.reconstruct(&current)?;
            current = pair.1.clone();
            out.push(pair);
        }
        Ok(out)
    }

    /// One learning step on input `x` from state `h`.
    ///
    /// On error the parameters are left untouched.
    pub fn train_step(
        &mut self,
        cfg: &LearningConfig,
        x: &BinaryVector,
        h: &BinaryVector,
    ) -> Result<StepTrace> {
        self.check_input(x, h)?;
        cfg.check_against(self)?;
        let (m, n) = (self.m, self.n);
        let cols = m + n;

        let h_next = self.step(x, h)?;
        let mut pre = vec![0.0; cols];
        self.backward_pre(&h_next, &mut pre);
        let recon = heaviside(&pre)?;

        // Scaled reconstruction error, only where it is non-zero.
        let mut errors: Vec<(usize, f64)> = Vec::new();
        let mut input_err = 0;
        let mut state_err = 0;
        for j in 0..cols {
            let truth = if j < m { x.get(j) } else { h.get(j - m) };
            let guess = recon.get(j);
            if truth != guess {
                let rate = if j < m {
                    input_err += 1;
                    cfg.input_rate[j]
                } else {
                    state_err += 1;
                    cfg.state_rate[j - m]
                };
                let sign = if truth { 1.0 } else { -1.0 };
                errors.push((j, rate * sign));
            }
        }
        let source = match cfg.update_source {
            UpdateSource::PrevState => h,
            UpdateSource::NextState => &h_next,
        };
        let bias_step = |i: usize| -> f64 {
            let active = if h_next.get(i) { 1.0 } else { 0.0 };
            cfg.state_rate[i] * (cfg.density[i] - active)
        };

        // Validate first so a failing update leaves the parameters intact.
        for i in source.iter_ones() {
            let row = &self.w[i * cols..(i + 1) * cols];
            if errors.iter().any(|&(j, e)| !(row[j] + e).is_finite()) {
                return Err(Error::NumericOverflow(format!(
                    "weight row {i} left the finite range"
                )));
            }
        }
        if errors.iter().any(|&(j, e)| !(self.a[j] + e).is_finite())
            || (0..n).any(|i| !(self.b[i] + bias_step(i)).is_finite())
        {
            return Err(Error::NumericOverflow("bias left the finite range".into()));
        }

        for i in source.iter_ones() {
            let row = &mut self.w[i * cols..(i + 1) * cols];
            for &(j, e) in &errors {
                row[j] += e;
            }
        }
        for &(j, e) in &errors {
            let col = &mut self.wt[j * n..(j + 1) * n];
            for i in source.iter_ones() {
                col[i] += e;
            }
        }
        for &(j, e) in &errors {
            self.a[j] += e;
        }
        for i in 0..n {
            self.b[i] += bias_step(i);
        }

        let (x_recon, h_recon) = recon.split_at(m);
        let density = h_next.density();
        Ok(StepTrace {
            h_next,
            x_recon,
            h_recon,
            state_err,
            input_err,
            density,
        })
    }
}

fn check_sizes(m: usize, n: usize) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::Argument(format!(
            "model dimensions must be positive (m = {m}, n = {n})"
        )));
    }
    Ok(())
}

/// Streams one-hot inputs through the forward pass with reusable buffers.
///
/// Used by featurization, where parameters are frozen and only `h_next` is
/// needed.
pub struct FrozenRunner<'a> {
    params: &'a ModelParams,
    state: BinaryVector,
    next: BinaryVector,
    active: Vec<usize>,
    acc: Vec<f64>,
}

impl<'a> FrozenRunner<'a> {
    /// Starts from the zero state.
    pub fn new(params: &'a ModelParams) -> Self {
        FrozenRunner {
            params,
            state: BinaryVector::zeros(params.n),
            next: BinaryVector::zeros(params.n),
            active: Vec::new(),
            acc: vec![0.0; params.n],
        }
    }

    pub fn state(&self) -> &BinaryVector {
        &self.state
    }

    /// Advances by one input character index; returns the new state.
    pub fn advance(&mut self, input_index: usize) -> Result<&BinaryVector> {
        if input_index >= self.params.m {
            return Err(Error::Argument(format!(
                "input index {input_index} out of range for m = {}",
                self.params.m
            )));
        }
        self.active.clear();
        self.active.push(input_index);
        let m = self.params.m;
        self.active.extend(self.state.iter_ones().map(|i| i + m));
        self.params
            .forward_active(&self.active, &mut self.acc, &mut self.next)?;
        std::mem::swap(&mut self.state, &mut self.next);
        Ok(&self.state)
    }
}
