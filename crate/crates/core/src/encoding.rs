//! Character vocabulary, one-hot encoding and dataset ingestion.
//!
//! The default vocabulary covers the 96 ASCII code points 32 (space) through
//! 127 (DEL), in code-point order. Anything outside that range, including
//! non-ASCII characters, maps to the space index. Smaller models fold the
//! same 96 indices modulo `m`.

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::binary::BinaryVector;
use crate::error::{Error, Result};

pub const ASCII_FIRST: u32 = 32;
pub const ASCII_SIZE: usize = 96;
pub const NUM_CLASSES: usize = 4;
pub const CLASS_NAMES: [&str; NUM_CLASSES] = ["World", "Sports", "Business", "Sci/Tech"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Vocabulary {
    size: usize,
    lowercase: bool,
}

impl Default for Vocabulary {
    fn default() -> Self {
        Self::ascii()
    }
}

impl Vocabulary {
    /// ASCII 32..=127, one index per code point.
    pub fn ascii() -> Self {
        Vocabulary {
            size: ASCII_SIZE,
            lowercase: false,
        }
    }

    /// The ASCII vocabulary folded onto `size` indices (`index % size`).
    pub fn folded(size: usize) -> Result<Self> {
        if size == 0 || size > ASCII_SIZE {
            return Err(Error::Argument(format!(
                "vocabulary size must be in 1..={ASCII_SIZE}, got {size}"
            )));
        }
        Ok(Vocabulary {
            size,
            lowercase: false,
        })
    }

    pub fn with_lowercase(mut self, lowercase: bool) -> Self {
        self.lowercase = lowercase;
        self
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn fallback_index(&self) -> usize {
        0
    }

    /// Short self-description stored in run metadata.
    pub fn describe(&self) -> String {
        let mut s = String::from("ascii-32-127");
        if self.size != ASCII_SIZE {
            s.push_str(&format!("-mod-{}", self.size));
        }
        if self.lowercase {
            s.push_str("-lowercase");
        }
        s
    }

    pub fn encode_char(&self, c: char) -> usize {
        let c = if self.lowercase {
            c.to_ascii_lowercase()
        } else {
            c
        };
        let code = c as u32;
        let base = if (ASCII_FIRST..ASCII_FIRST + ASCII_SIZE as u32).contains(&code) {
            (code - ASCII_FIRST) as usize
        } else {
            return self.fallback_index();
        };
        base % self.size
    }

    pub fn one_hot(&self, c: char) -> BinaryVector {
        BinaryVector::one_hot(self.size, self.encode_char(c)).expect("index below vocabulary size")
    }

    pub fn encode(&self, record: &Record) -> Result<Sample> {
        if record.text.is_empty() {
            return Err(Error::Data("sample text is empty".into()));
        }
        let chars = record
            .text
            .chars()
            .map(|c| self.encode_char(c) as u8)
            .collect();
        Ok(Sample {
            label: record.label,
            chars,
        })
    }

    pub fn encode_all(&self, records: &[Record]) -> Result<Vec<Sample>> {
        records
            .iter()
            .enumerate()
            .map(|(i, r)| {
                self.encode(r)
                    .map_err(|e| Error::Data(format!("sample {i}: {e}")))
            })
            .collect()
    }
}

/// A labelled text, as stored on disk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub label: u8,
    pub text: String,
}

/// A labelled sequence of vocabulary indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub label: u8,
    pub chars: Vec<u8>,
}

impl Sample {
    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    pub split: Split,
    pub records: Vec<Record>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    /// `class,title,description`, classes 1-4, RFC 4180 quoting.
    AgNewsCsv,
    /// `label<sep>text` with tab or comma separators (auto-detected).
    Preprocessed,
    /// One `{"label": .., "text": ..}` object per line, labels 0-3.
    Jsonl,
}

impl std::str::FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "agnews-csv" => Ok(InputFormat::AgNewsCsv),
            "preprocessed" => Ok(InputFormat::Preprocessed),
            "jsonl" | "canonical-jsonl" => Ok(InputFormat::Jsonl),
            other => Err(Error::Argument(format!(
                "unknown input format {other:?} (agnews-csv, preprocessed, jsonl)"
            ))),
        }
    }
}

impl InputFormat {
    /// Guesses the format from the file extension.
    pub fn from_extension(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()? {
            "csv" => Some(InputFormat::AgNewsCsv),
            "jsonl" | "json" => Some(InputFormat::Jsonl),
            "tsv" | "txt" => Some(InputFormat::Preprocessed),
            _ => None,
        }
    }
}

pub fn ingest(path: &Path, format: InputFormat, split: Split) -> Result<Dataset> {
    let file = File::open(path)?;
    ingest_reader(BufReader::new(file), format, split)
}

pub fn ingest_reader<R: Read>(reader: R, format: InputFormat, split: Split) -> Result<Dataset> {
    let records = match format {
        InputFormat::AgNewsCsv => read_agnews_csv(reader)?,
        InputFormat::Preprocessed => read_preprocessed(reader)?,
        InputFormat::Jsonl => read_jsonl(reader)?,
    };
    Ok(Dataset { split, records })
}

fn check_text(text: String, row: usize) -> Result<String> {
    if text.is_empty() {
        Err(Error::Data(format!("row {row}: empty text")))
    } else {
        Ok(text)
    }
}

fn parse_label(field: &str, row: usize, base: u8) -> Result<u8> {
    let raw: i64 = field.trim().parse().map_err(|_| Error::Parse {
        row,
        msg: format!("label {field:?} is not an integer"),
    })?;
    let label = raw - base as i64;
    if (0..NUM_CLASSES as i64).contains(&label) {
        Ok(label as u8)
    } else {
        Err(Error::Data(format!(
            "row {row}: unknown label {raw} (expected {base}..={})",
            base as usize + NUM_CLASSES - 1
        )))
    }
}

fn is_header(label_field: &str) -> bool {
    matches!(
        label_field.trim().to_ascii_lowercase().as_str(),
        "class" | "label" | "class index"
    )
}

fn read_agnews_csv<R: Read>(reader: R) -> Result<Vec<Record>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut out = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row_no = i + 1;
        let rec = row.map_err(|e| Error::Parse {
            row: row_no,
            msg: e.to_string(),
        })?;
        if row_no == 1 && rec.get(0).is_some_and(is_header) {
            continue;
        }
        if rec.len() != 3 {
            return Err(Error::Parse {
                row: row_no,
                msg: format!(
                    "expected 3 fields (class,title,description), found {}",
                    rec.len()
                ),
            });
        }
        let label = parse_label(&rec[0], row_no, 1)?;
        let text = [&rec[1], &rec[2]]
            .iter()
            .filter(|s| !s.is_empty())
            .copied()
            .collect::<Vec<_>>()
            .join(" ");
        out.push(Record {
            label,
            text: check_text(text, row_no)?,
        });
    }
    Ok(out)
}

fn read_preprocessed<R: Read>(reader: R) -> Result<Vec<Record>> {
    let mut rows: Vec<(usize, String, String)> = Vec::new();
    let mut tab: Option<bool> = None;
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let row_no = i + 1;
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let use_tab = *tab.get_or_insert_with(|| line.contains('\t'));
        let sep = if use_tab { '\t' } else { ',' };
        let (label, text) = line.split_once(sep).ok_or_else(|| Error::Parse {
            row: row_no,
            msg: format!("expected label{}text", if use_tab { "<TAB>" } else { "," }),
        })?;
        if rows.is_empty() && is_header(label) {
            continue;
        }
        let text = if !use_tab && text.len() >= 2 && text.starts_with('"') && text.ends_with('"') {
            text[1..text.len() - 1].replace("\"\"", "\"")
        } else {
            text.to_string()
        };
        rows.push((row_no, label.to_string(), text));
    }
    // Labels are 1-4 unless a 0 appears, in which case they are 0-3.
    let zero_based = rows.iter().any(|(_, l, _)| l.trim() == "0");
    let base = if zero_based { 0 } else { 1 };
    rows.into_iter()
        .map(|(row, label, text)| {
            Ok(Record {
                label: parse_label(&label, row, base)?,
                text: check_text(text, row)?,
            })
        })
        .collect()
}

fn read_jsonl<R: Read>(reader: R) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let row_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: Record = serde_json::from_str(&line).map_err(|e| Error::Parse {
            row: row_no,
            msg: e.to_string(),
        })?;
        if rec.label as usize >= NUM_CLASSES {
            return Err(Error::Data(format!(
                "row {row_no}: unknown label {}",
                rec.label
            )));
        }
        out.push(Record {
            label: rec.label,
            text: check_text(rec.text, row_no)?,
        });
    }
    Ok(out)
}

/// Writes records as canonical JSONL (`label` then `text`, one per line).
pub fn export_jsonl<W: Write>(records: &[Record], mut out: W) -> Result<()> {
    for r in records {
        let line = serde_json::to_string(r).map_err(|e| Error::Format(e.to_string()))?;
        out.write_all(line.as_bytes())?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}
