//! Closed-form ridge regression classifier.
//!
//! Targets are one-hot class indicators; the design matrix is augmented with
//! a constant column whose coefficient (the intercept) is not penalised. The
//! normal equations `(X^T X + lambda I~) beta = X^T Y` are solved directly
//! (Cholesky, LU fallback) followed by one step of iterative refinement.
//! Prediction is the argmax of the class scores, ties going to the lowest
//! class index.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::encoding::NUM_CLASSES;
use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::linalg::{frobenius, residual, Factor};
use crate::model_file::{read_f64s, read_u64};

pub const MAGIC: &[u8; 4] = b"SNRC";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct RidgeClassifier {
    dim: usize,
    lambda: f64,
    /// `(dim + 1) x NUM_CLASSES`, row-major, intercept last.
    beta: Vec<f64>,
    residual: f64,
}

/// Assembles `(X^T X + lambda I~)` and `X^T Y` for the augmented design.
fn normal_equations(features: &FeatureMatrix, lambda: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let dim = features.dim();
    let p = dim + 1;
    let k = NUM_CLASSES;
    let mut gram = vec![0.0; p * p];
    let mut rhs = vec![0.0; p * k];
    let mut xa = vec![0.0; p];
    for (row, &label) in features.iter_rows().zip(features.labels()) {
        if label as usize >= k {
            return Err(Error::Data(format!("label {label} outside 0..{k}")));
        }
        xa[..dim].copy_from_slice(row);
        xa[dim] = 1.0;
        for r in 0..p {
            let xr = xa[r];
            if xr == 0.0 {
                continue;
            }
            let g = &mut gram[r * p + r..(r + 1) * p];
            for (gv, &xc) in g.iter_mut().zip(&xa[r..]) {
                *gv += xr * xc;
            }
            rhs[r * k + label as usize] += xr;
        }
    }
    for r in 0..p {
        for c in 0..r {
            gram[r * p + c] = gram[c * p + r];
        }
    }
    for r in 0..dim {
        gram[r * p + r] += lambda;
    }
    Ok((gram, rhs))
}

impl RidgeClassifier {
    pub fn fit(features: &FeatureMatrix, lambda: f64) -> Result<Self> {
        if features.rows() == 0 {
            return Err(Error::Argument("cannot fit on zero rows".into()));
        }
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::Argument(format!(
                "lambda must be finite and >= 0, got {lambda}"
            )));
        }
        let p = features.dim() + 1;
        let k = NUM_CLASSES;
        let (a, rhs) = normal_equations(features, lambda)?;
        let factor = Factor::new(&a, p).map_err(|e| match e {
            Error::Singular(msg) if lambda == 0.0 => {
                Error::Singular(format!("{msg} (lambda is 0; retry with lambda > 0)"))
            }
            other => other,
        })?;
        let mut beta = factor.solve(&rhs, p, k);
        let r = residual(&a, &beta, &rhs, p, k);
        let delta = factor.solve(&r, p, k);
        for (b, d) in beta.iter_mut().zip(&delta) {
            *b += d;
        }
        if beta.iter().any(|b| !b.is_finite()) {
            return Err(Error::NumericOverflow(
                "ridge coefficients are not finite".into(),
            ));
        }
        let residual = frobenius(&residual(&a, &beta, &rhs, p, k)) / frobenius(&rhs);
        log::debug!("ridge fit: p = {p}, lambda = {lambda}, relative residual = {residual:e}");
        Ok(RidgeClassifier {
            dim: features.dim(),
            lambda,
            beta,
            residual,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Coefficients, `(dim + 1) x 4` row-major with the intercept row last.
    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    /// Relative normal-equation residual measured at fit time (NaN when loaded).
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// Recomputes `||(X^T X + lambda I~) beta - X^T Y|| / ||X^T Y||` on `features`.
    pub fn normal_equation_residual(&self, features: &FeatureMatrix) -> Result<f64> {
        self.check_dim(features)?;
        let p = self.dim + 1;
        let (a, rhs) = normal_equations(features, self.lambda)?;
        Ok(frobenius(&residual(&a, &self.beta, &rhs, p, NUM_CLASSES)) / frobenius(&rhs))
    }

    fn check_dim(&self, features: &FeatureMatrix) -> Result<()> {
        if features.dim() != self.dim {
            return Err(Error::dim("feature dimension", self.dim, features.dim()));
        }
        Ok(())
    }

    pub fn scores(&self, row: &[f64]) -> [f64; NUM_CLASSES] {
        let k = NUM_CLASSES;
        let mut s = [0.0; NUM_CLASSES];
        s.copy_from_slice(&self.beta[self.dim * k..]);
        for (j, &x) in row.iter().enumerate() {
            if x != 0.0 {
                for (c, sc) in s.iter_mut().enumerate() {
                    *sc += x * self.beta[j * k + c];
                }
            }
        }
        s
    }

    pub fn predict(&self, features: &FeatureMatrix) -> Result<Vec<u8>> {
        self.check_dim(features)?;
        Ok(features
            .iter_rows()
            .map(|row| argmax(&self.scores(row)) as u8)
            .collect())
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(MAGIC)?;
        out.write_all(&FORMAT_VERSION.to_le_bytes())?;
        out.write_all(&(self.dim as u64).to_le_bytes())?;
        out.write_all(&(NUM_CLASSES as u64).to_le_bytes())?;
        out.write_all(&self.lambda.to_le_bytes())?;
        for b in &self.beta {
            out.write_all(&b.to_le_bytes())?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut input: R) -> Result<Self> {
        let mut head = [0u8; 8];
        input
            .read_exact(&mut head)
            .map_err(|_| Error::Format("file too short for a classifier header".into()))?;
        if &head[..4] != MAGIC {
            return Err(Error::Format("bad magic, expected SNRC".into()));
        }
        let version = u32::from_le_bytes(head[4..8].try_into().unwrap());
        if version != FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported classifier format version {version}"
            )));
        }
        let dim = read_u64(&mut input)? as usize;
        let classes = read_u64(&mut input)? as usize;
        if classes != NUM_CLASSES || dim == 0 || dim > 1 << 24 {
            return Err(Error::Format(format!(
                "unsupported classifier shape {dim}x{classes}"
            )));
        }
        let lambda = read_f64s(&mut input, 1)?[0];
        let beta = read_f64s(&mut input, (dim + 1) * classes)?;
        if beta.iter().any(|b| !b.is_finite()) {
            return Err(Error::Format(
                "classifier coefficients are not finite".into(),
            ));
        }
        Ok(RidgeClassifier {
            dim,
            lambda,
            beta,
            residual: f64::NAN,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        self.write_to(BufWriter::new(File::create(path)?))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::read_from(BufReader::new(File::open(path)?))
    }
}

/// Index of the largest score; the lowest index wins ties.
pub fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

pub fn accuracy(predicted: &[u8], truth: &[u8]) -> Result<f64> {
    if predicted.len() != truth.len() {
        return Err(Error::dim("prediction count", truth.len(), predicted.len()));
    }
    if truth.is_empty() {
        return Err(Error::Argument("accuracy of an empty sequence".into()));
    }
    let hits = predicted.iter().zip(truth).filter(|(p, t)| p == t).count();
    Ok(hits as f64 / truth.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference;
    use crate::rng::SplitMix64;

    fn orthonormal() -> FeatureMatrix {
        let mut v = vec![0.0; 16];
        for i in 0..4 {
            v[i * 4 + i] = 1.0;
        }
        FeatureMatrix::new(4, v, vec![0, 1, 2, 3]).unwrap()
    }

    #[test]
    fn interpolates_orthonormal_rows() {
        let f = orthonormal();
        let clf = RidgeClassifier::fit(&f, 1e-6).unwrap();
        assert_eq!(clf.predict(&f).unwrap(), vec![0, 1, 2, 3]);
        assert!(clf.residual() <= 1e-8);
    }

    #[test]
    fn unregularised_rank_deficient_system_is_singular() {
        // Four rows cannot pin down four weights plus an intercept.
        let err = RidgeClassifier::fit(&orthonormal(), 0.0).unwrap_err();
        assert!(matches!(err, Error::Singular(ref m) if m.contains("lambda")));
    }

    #[test]
    fn unregularised_full_rank_fit() {
        let mut v = vec![0.0; 5 * 4];
        for i in 0..4 {
            v[i * 4 + i] = 1.0;
        }
        let f = FeatureMatrix::new(4, v, vec![0, 1, 2, 3, 1]).unwrap();
        let clf = RidgeClassifier::fit(&f, 0.0).unwrap();
        assert_eq!(clf.predict(&f).unwrap(), vec![0, 1, 2, 3, 1]);
    }

    #[test]
    fn huge_lambda_collapses_to_intercept() {
        let mut rng = SplitMix64::new(4);
        let rows = 40;
        let values: Vec<f64> = (0..rows * 3).map(|_| rng.next_open01()).collect();
        // Class 2 is the most frequent.
        let labels: Vec<u8> = (0..rows)
            .map(|i| if i % 2 == 0 { 2 } else { (i % 4) as u8 })
            .collect();
        let f = FeatureMatrix::new(3, values, labels).unwrap();
        let clf = RidgeClassifier::fit(&f, 1e12).unwrap();
        assert!(clf.beta()[..3 * 4].iter().all(|b| b.abs() < 1e-9));
        assert!(clf.predict(&f).unwrap().iter().all(|&p| p == 2));
    }

    #[test]
    fn matches_gaussian_elimination_oracle() {
        let mut rng = SplitMix64::new(99);
        for _ in 0..10 {
            let (rows, dim) = (20, 5);
            let values: Vec<f64> = (0..rows * dim).map(|_| rng.next_open01()).collect();
            let labels: Vec<u8> = (0..rows).map(|_| rng.next_below(4) as u8).collect();
            let f = FeatureMatrix::new(dim, values.clone(), labels.clone()).unwrap();
            for lambda in [0.0, 0.1, 1.0] {
                let clf = RidgeClassifier::fit(&f, lambda).unwrap();
                let rows_v: Vec<Vec<f64>> = values.chunks(dim).map(|r| r.to_vec()).collect();
                let lbl: Vec<usize> = labels.iter().map(|&l| l as usize).collect();
                let oracle = reference::ridge(&rows_v, &lbl, 4, lambda);
                let flat: Vec<f64> = oracle.into_iter().flatten().collect();
                let scale = frobenius(&flat);
                let diff: Vec<f64> = flat.iter().zip(clf.beta()).map(|(a, b)| a - b).collect();
                assert!(frobenius(&diff) / scale <= 1e-10, "lambda {lambda}");
                assert!(clf.residual() <= 1e-8);
                assert!(clf.normal_equation_residual(&f).unwrap() <= 1e-8);
            }
        }
    }

    #[test]
    fn argmax_rules() {
        assert_eq!(argmax(&[0.9, 0.1, 0.1, 0.1]), 0);
        assert_eq!(argmax(&[0.5, 0.5, 0.5, 0.5]), 0);
        assert_eq!(argmax(&[0.1, 0.7, 0.7, 0.2]), 1);
        let s = [0.3, -0.2, 0.9, 0.4];
        for c in [-10.0, 0.0, 3.5, 1e6] {
            let shifted: Vec<f64> = s.iter().map(|v| v + c).collect();
            assert_eq!(argmax(&shifted), argmax(&s));
        }
    }

    #[test]
    fn predict_invariant_to_common_score_shift() {
        let mut rng = SplitMix64::new(8);
        let values: Vec<f64> = (0..30 * 4).map(|_| rng.next_open01()).collect();
        let labels: Vec<u8> = (0..30).map(|_| rng.next_below(4) as u8).collect();
        let f = FeatureMatrix::new(4, values, labels).unwrap();
        let clf = RidgeClassifier::fit(&f, 0.5).unwrap();
        let mut shifted = clf.clone();
        for c in 0..4 {
            shifted.beta[4 * 4 + c] += 2.0;
        }
        assert_eq!(clf.predict(&f).unwrap(), shifted.predict(&f).unwrap());
    }

    #[test]
    fn accuracy_cases() {
        assert_eq!(accuracy(&[0, 1, 2, 3], &[0, 1, 2, 3]).unwrap(), 1.0);
        assert_eq!(accuracy(&[1, 2, 3, 0], &[0, 1, 2, 3]).unwrap(), 0.0);
        assert_eq!(accuracy(&[0, 1, 0, 0], &[0, 1, 2, 3]).unwrap(), 0.5);
        assert!(accuracy(&[0], &[0, 1]).is_err());
        assert!(accuracy(&[], &[]).is_err());
    }

    #[test]
    fn dimension_mismatch_and_io() {
        let f = orthonormal();
        let clf = RidgeClassifier::fit(&f, 1.0).unwrap();
        let other = FeatureMatrix::new(3, vec![0.0; 3], vec![0]).unwrap();
        assert!(matches!(clf.predict(&other), Err(Error::Dimension { .. })));

        let mut buf = Vec::new();
        clf.write_to(&mut buf).unwrap();
        assert_eq!(&buf[..4], b"SNRC");
        let back = RidgeClassifier::read_from(&buf[..]).unwrap();
        assert_eq!(back.beta(), clf.beta());
        assert_eq!(back.lambda(), 1.0);
        assert_eq!(back.predict(&f).unwrap(), clf.predict(&f).unwrap());
        assert!(RidgeClassifier::read_from(&buf[..20]).is_err());
    }

    #[test]
    fn rejects_bad_arguments() {
        let f = orthonormal();
        assert!(RidgeClassifier::fit(&f, -1.0).is_err());
        assert!(RidgeClassifier::fit(&f, f64::NAN).is_err());
        let bad = FeatureMatrix::new(1, vec![0.5], vec![7]).unwrap();
        assert!(matches!(
            RidgeClassifier::fit(&bad, 1.0),
            Err(Error::Data(_))
        ));
    }
}
