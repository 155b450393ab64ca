//! Fixed-size feature vectors from variable-length samples.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::encoding::Sample;
use crate::error::{Error, Result};
use crate::model::{FrozenRunner, ModelParams};
use crate::model_file::{read_f64s, read_u64};

pub const MAGIC: &[u8; 4] = b"SNFM";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FeatureMode {
    /// Fraction of steps each unit was active over the sample.
    #[default]
    AverageState,
    /// The state after the sample's last character.
    FinalState,
}

impl std::str::FromStr for FeatureMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "average" | "average-state" => Ok(FeatureMode::AverageState),
            "final" | "final-state" => Ok(FeatureMode::FinalState),
            other => Err(Error::Argument(format!(
                "unknown feature mode {other:?} (average-state or final-state)"
            ))),
        }
    }
}

/// Row-major real features with one label per row.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    dim: usize,
    values: Vec<f64>,
    labels: Vec<u8>,
}

impl FeatureMatrix {
    pub fn new(dim: usize, values: Vec<f64>, labels: Vec<u8>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Argument("feature dimension must be positive".into()));
        }
        if values.len() != dim * labels.len() {
            return Err(Error::dim(
                "feature values",
                dim * labels.len(),
                values.len(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidNumeric(
                "feature matrix contains NaN or infinity".into(),
            ));
        }
        Ok(FeatureMatrix {
            dim,
            values,
            labels,
        })
    }

    pub fn rows(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.dim)
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(MAGIC)?;
        out.write_all(&FORMAT_VERSION.to_le_bytes())?;
        out.write_all(&(self.rows() as u64).to_le_bytes())?;
        out.write_all(&(self.dim as u64).to_le_bytes())?;
        for v in &self.values {
            out.write_all(&v.to_le_bytes())?;
        }
        out.flush()?;
        Ok(())
    }

    /// Reads the value block; labels come from the sidecar.
    pub fn read_values<R: Read>(mut input: R) -> Result<(usize, usize, Vec<f64>)> {
        let mut head = [0u8; 8];
        input
            .read_exact(&mut head)
            .map_err(|_| Error::Format("file too short for a feature header".into()))?;
        if &head[..4] != MAGIC {
            return Err(Error::Format("bad magic, expected SNFM".into()));
        }
        let version = u32::from_le_bytes(head[4..8].try_into().unwrap());
        if version != FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported feature format version {version}"
            )));
        }
        let rows = read_u64(&mut input)? as usize;
        let dim = read_u64(&mut input)? as usize;
        let len = rows
            .checked_mul(dim)
            .filter(|&l| l <= 1 << 32)
            .ok_or_else(|| Error::Format(format!("implausible feature shape {rows}x{dim}")))?;
        let values = read_f64s(&mut input, len)?;
        Ok((rows, dim, values))
    }

    pub fn labels_path(path: &Path) -> PathBuf {
        let mut name = path.as_os_str().to_owned();
        name.push(".labels");
        PathBuf::from(name)
    }

    /// Writes `path` and the `<path>.labels` sidecar (one label per line).
    pub fn save(&self, path: &Path) -> Result<()> {
        self.write_to(BufWriter::new(File::create(path)?))?;
        let mut labels = BufWriter::new(File::create(Self::labels_path(path))?);
        for l in &self.labels {
            writeln!(labels, "{l}")?;
        }
        labels.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let (rows, dim, values) = Self::read_values(BufReader::new(File::open(path)?))?;
        let text = std::fs::read_to_string(Self::labels_path(path))?;
        let labels = text
            .lines()
            .enumerate()
            .map(|(i, l)| {
                l.trim().parse::<u8>().map_err(|_| Error::Parse {
                    row: i + 1,
                    msg: format!("bad label {l:?}"),
                })
            })
            .collect::<Result<Vec<u8>>>()?;
        if labels.len() != rows {
            return Err(Error::dim("label sidecar", rows, labels.len()));
        }
        FeatureMatrix::new(dim, values, labels)
    }

    /// `label,f0,f1,...` with a header row.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["label".to_string()];
        header.extend((0..self.dim).map(|j| format!("f{j}")));
        w.write_record(&header).map_err(csv_err)?;
        for (row, label) in self.iter_rows().zip(&self.labels) {
            let mut rec = vec![label.to_string()];
            rec.extend(row.iter().map(|v| v.to_string()));
            w.write_record(&rec).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Runs samples through a frozen model in order, never resetting the state
/// between samples. The stream starts from the zero state.
pub fn featurize_stream(
    params: &ModelParams,
    samples: &[Sample],
    mode: FeatureMode,
) -> Result<FeatureMatrix> {
    let n = params.state_dim();
    let mut runner = FrozenRunner::new(params);
    let mut values = Vec::with_capacity(samples.len() * n);
    let mut counts = vec![0u32; n];
    for (s, sample) in samples.iter().enumerate() {
        if sample.is_empty() {
            return Err(Error::Data(format!("sample {s} is empty")));
        }
        counts.iter_mut().for_each(|c| *c = 0);
        for &c in &sample.chars {
            let h = runner.advance(c as usize)?;
            if mode == FeatureMode::AverageState {
                for i in h.iter_ones() {
                    counts[i] += 1;
                }
            }
        }
        match mode {
            FeatureMode::AverageState => {
                let len = sample.len() as f64;
                values.extend(counts.iter().map(|&c| c as f64 / len));
            }
            FeatureMode::FinalState => {
                let h = runner.state();
                values.extend((0..n).map(|i| if h.get(i) { 1.0 } else { 0.0 }));
            }
        }
    }
    FeatureMatrix::new(n, values, samples.iter().map(|s| s.label).collect())
}

/// Character frequencies: element `c` is the share of positions holding `c`.
pub fn baseline_featurize(samples: &[Sample], vocab_size: usize) -> Result<FeatureMatrix> {
    let mut values = Vec::with_capacity(samples.len() * vocab_size);
    for (s, sample) in samples.iter().enumerate() {
        if sample.is_empty() {
            return Err(Error::Data(format!("sample {s} is empty")));
        }
        let mut counts = vec![0u32; vocab_size];
        for &c in &sample.chars {
            let c = c as usize;
            if c >= vocab_size {
                return Err(Error::Argument(format!(
                    "sample {s}: index {c} outside vocabulary of {vocab_size}"
                )));
            }
            counts[c] += 1;
        }
        let len = sample.len() as f64;
        values.extend(counts.iter().map(|&c| c as f64 / len));
    }
    FeatureMatrix::new(
        vocab_size,
        values,
        samples.iter().map(|s| s.label).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::{self, DenseModel};
    use crate::rng::SplitMix64;

    fn dense(p: &ModelParams) -> DenseModel {
        let cols = p.visible_dim();
        DenseModel {
            m: p.input_dim(),
            n: p.state_dim(),
            w: p.weights().chunks(cols).map(|r| r.to_vec()).collect(),
            a: p.input_biases().to_vec(),
            b: p.hidden_biases().to_vec(),
        }
    }

    fn sample(label: u8, chars: &[u8]) -> Sample {
        Sample {
            label,
            chars: chars.to_vec(),
        }
    }

    #[test]
    fn zero_model_gives_zero_features() {
        let p = ModelParams::zeros(4, 6).unwrap();
        let f = featurize_stream(
            &p,
            &[sample(0, &[1, 2, 3]), sample(1, &[0])],
            FeatureMode::AverageState,
        )
        .unwrap();
        assert!(f.values().iter().all(|&v| v == 0.0));
        assert_eq!(f.labels(), &[0, 1]);
    }

    #[test]
    fn single_char_average_equals_final() {
        let p = ModelParams::init(4, 6, 12).unwrap();
        let samples = [sample(0, &[1, 3, 0]), sample(2, &[2])];
        let avg = featurize_stream(&p, &samples, FeatureMode::AverageState).unwrap();
        let fin = featurize_stream(&p, &samples, FeatureMode::FinalState).unwrap();
        assert_eq!(avg.row(1), fin.row(1));
    }

    #[test]
    fn matches_sequential_oracle() {
        let mut rng = SplitMix64::new(5);
        for seed in 0..20 {
            let p = ModelParams::init(4, 6, seed).unwrap();
            let samples: Vec<Sample> = (0..3)
                .map(|k| {
                    let len = 1 + rng.next_below(5) as usize;
                    sample(
                        k,
                        &(0..len)
                            .map(|_| rng.next_below(4) as u8)
                            .collect::<Vec<_>>(),
                    )
                })
                .collect();
            let raw: Vec<Vec<usize>> = samples
                .iter()
                .map(|s| s.chars.iter().map(|&c| c as usize).collect())
                .collect();
            for (mode, average) in [
                (FeatureMode::AverageState, true),
                (FeatureMode::FinalState, false),
            ] {
                let got = featurize_stream(&p, &samples, mode).unwrap();
                let want = reference::featurize(&dense(&p), &raw, average);
                let got_rows: Vec<Vec<f64>> = got.iter_rows().map(|r| r.to_vec()).collect();
                assert_eq!(got_rows, want);
            }
        }
    }

    #[test]
    fn empty_sample_is_error() {
        let p = ModelParams::zeros(4, 6).unwrap();
        assert!(matches!(
            featurize_stream(&p, &[sample(0, &[])], FeatureMode::AverageState),
            Err(Error::Data(_))
        ));
        assert!(matches!(
            baseline_featurize(&[sample(0, &[])], 96),
            Err(Error::Data(_))
        ));
    }

    #[test]
    fn baseline_frequencies() {
        let a = b'a' - 32;
        let b = b'b' - 32;
        let f = baseline_featurize(&[sample(0, &[a, a]), sample(1, &[a, b])], 96).unwrap();
        assert_eq!(f.dim(), 96);
        assert_eq!(f.row(0)[a as usize], 1.0);
        assert_eq!(f.row(0).iter().sum::<f64>(), 1.0);
        assert_eq!(f.row(1)[a as usize], 0.5);
        assert_eq!(f.row(1)[b as usize], 0.5);
    }

    #[test]
    fn save_load_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.bin");
        let f = FeatureMatrix::new(3, vec![0.0, 0.5, 1.0, 0.25, 0.25, 0.5], vec![3, 1]).unwrap();
        f.save(&path).unwrap();
        assert_eq!(FeatureMatrix::load(&path).unwrap(), f);
        let mut csv = Vec::new();
        f.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert_eq!(text, "label,f0,f1,f2\n3,0,0.5,1\n1,0.25,0.25,0.5\n");
    }

    #[test]
    fn shape_validation() {
        assert!(FeatureMatrix::new(3, vec![0.0; 5], vec![0, 1]).is_err());
        assert!(FeatureMatrix::new(1, vec![f64::NAN], vec![0]).is_err());
    }
}
