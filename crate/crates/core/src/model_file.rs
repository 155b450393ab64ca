//! Binary model files and their text metadata sidecar.
//!
//! Layout (all integers and floats little-endian):
//!
//! | bytes            | content                         |
//! |------------------|---------------------------------|
//! | 4                | magic `SNET`                    |
//! | 4                | format version (`u32`, = 1)     |
//! | 8                | `m` (`u64`)                     |
//! | 8                | `n` (`u64`)                     |
//! | 8 * n * (m + n)  | `W`, row-major `f64`            |
//! | 8 * (m + n)      | `a`                             |
//! | 8 * n            | `b`                             |
//!
//! The sidecar `<model>.meta.toml` records how the parameters were produced.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ModelParams, UpdateSource};

pub const MAGIC: &[u8; 4] = b"SNET";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelMetadata {
    pub format_version: u32,
    pub m: usize,
    pub n: usize,
    pub seed: u64,
    pub r_x: f64,
    pub r_h: f64,
    pub d: f64,
    pub update_source: UpdateSource,
    pub training_samples: usize,
    pub training_steps: u64,
    pub vocabulary: String,
}

pub fn write_params<W: Write>(params: &ModelParams, mut out: W) -> Result<()> {
    out.write_all(MAGIC)?;
    out.write_all(&FORMAT_VERSION.to_le_bytes())?;
    out.write_all(&(params.input_dim() as u64).to_le_bytes())?;
    out.write_all(&(params.state_dim() as u64).to_le_bytes())?;
    for v in params
        .weights()
        .iter()
        .chain(params.input_biases())
        .chain(params.hidden_biases())
    {
        out.write_all(&v.to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

pub(crate) fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}

pub(crate) fn read_f64s<R: Read>(r: &mut R, len: usize) -> Result<Vec<f64>> {
    let mut bytes = vec![0u8; len * 8];
    r.read_exact(&mut bytes).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => Error::Format("file is truncated".into()),
        _ => Error::Io(e),
    })?;
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect())
}

pub fn read_params<R: Read>(mut input: R) -> Result<ModelParams> {
    let mut magic = [0u8; 4];
    input
        .read_exact(&mut magic)
        .map_err(|_| Error::Format("file too short for a model header".into()))?;
    if &magic != MAGIC {
        return Err(Error::Format(format!("bad magic {magic:?}, expected SNET")));
    }
    let version = read_u32(&mut input)?;
    if version != FORMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported model format version {version}"
        )));
    }
    let m = read_u64(&mut input)? as usize;
    let n = read_u64(&mut input)? as usize;
    let cols = m
        .checked_add(n)
        .and_then(|c| c.checked_mul(n).map(|w| (c, w)))
        .filter(|&(_, w)| w <= (1 << 32))
        .ok_or_else(|| Error::Format(format!("implausible model dimensions m={m} n={n}")))?;
    let w = read_f64s(&mut input, cols.1)?;
    let a = read_f64s(&mut input, cols.0)?;
    let b = read_f64s(&mut input, n)?;
    let mut rest = [0u8; 1];
    if input.read(&mut rest)? != 0 {
        return Err(Error::Format(
            "trailing bytes after model parameters".into(),
        ));
    }
    ModelParams::from_parts(m, n, w, a, b).map_err(|e| Error::Format(e.to_string()))
}

pub fn metadata_path(model_path: &Path) -> PathBuf {
    let mut name = model_path.as_os_str().to_owned();
    name.push(".meta.toml");
    PathBuf::from(name)
}

/// Writes the model and, when given, its metadata sidecar.
pub fn save(path: &Path, params: &ModelParams, meta: Option<&ModelMetadata>) -> Result<()> {
    write_params(params, BufWriter::new(File::create(path)?))?;
    if let Some(meta) = meta {
        let text = toml::to_string(meta).map_err(|e| Error::Format(e.to_string()))?;
        std::fs::write(metadata_path(path), text)?;
    }
    Ok(())
}

pub fn load(path: &Path) -> Result<ModelParams> {
    read_params(BufReader::new(File::open(path)?))
}

pub fn load_metadata(model_path: &Path) -> Result<Option<ModelMetadata>> {
    let path = metadata_path(model_path);
    if !path.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(path)?;
    toml::from_str(&text)
        .map(Some)
        .map_err(|e| Error::Format(format!("model metadata: {e}")))
}
