//! The end-to-end protocol: disjoint per-trial training subsets, a single
//! unsupervised pass, featurization of held-out subsets, a ridge readout and
//! test accuracy, alongside the character-frequency baseline.
//!
//! Everything is a deterministic function of [`ExperimentConfig`]. The run
//! seed drives the Fisher-Yates shuffle of the training set; trial `i` draws
//! its parameters from `derive_seed(seed, i)`, so a trial's result does not
//! depend on how many other trials run.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::binary::BinaryVector;
use crate::classifier::{accuracy, RidgeClassifier};
use crate::encoding::{self, Dataset, InputFormat, Sample, Split, Vocabulary};
use crate::error::{Error, Result};
use crate::features::{baseline_featurize, featurize_stream, FeatureMode};
use crate::model::{LearningConfig, ModelParams, UpdateSource};
use crate::model_file::{self, ModelMetadata};
use crate::rng::{derive_seed, SplitMix64};
use crate::synthetic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Micro,
    Small,
    Full,
}

impl std::str::FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "micro" => Ok(Scale::Micro),
            "small" => Ok(Scale::Small),
            "full" => Ok(Scale::Full),
            other => Err(Error::Argument(format!(
                "unknown scale {other:?} (micro, small, full)"
            ))),
        }
    }
}

/// Which feature sets a run evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunMode {
    #[default]
    Both,
    Model,
    Baseline,
}

impl std::str::FromStr for RunMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "both" => Ok(RunMode::Both),
            "model" => Ok(RunMode::Model),
            "baseline" => Ok(RunMode::Baseline),
            other => Err(Error::Argument(format!(
                "unknown run mode {other:?} (both, model, baseline)"
            ))),
        }
    }
}

impl RunMode {
    fn model(self) -> bool {
        self != RunMode::Baseline
    }

    fn baseline(self) -> bool {
        self != RunMode::Model
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub m: usize,
    pub n: usize,
    pub r_x: f64,
    pub r_h: f64,
    pub d: f64,
    pub unsup_samples: usize,
    pub sup_samples: usize,
    pub trials: usize,
    pub seed: u64,
    pub lambda: f64,
    pub feature_mode: FeatureMode,
    pub update_source: UpdateSource,
    /// Steps per telemetry window.
    pub telemetry_window: usize,
    /// Also write every step's errors and density.
    pub raw_telemetry: bool,
    pub lowercase: bool,
    pub mode: RunMode,
    /// Worker threads across trials.
    pub jobs: usize,
    pub train_path: Option<PathBuf>,
    pub test_path: Option<PathBuf>,
    /// Size of the generated test split when no dataset paths are given.
    pub synthetic_test: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            m: 96,
            n: 4000,
            r_x: 0.01,
            r_h: 1e-6,
            d: 0.1,
            unsup_samples: 5000,
            sup_samples: 5000,
            trials: 5,
            seed: 1,
            lambda: 1.0,
            feature_mode: FeatureMode::AverageState,
            update_source: UpdateSource::NextState,
            telemetry_window: 1000,
            raw_telemetry: false,
            lowercase: false,
            mode: RunMode::Both,
            jobs: 1,
            train_path: None,
            test_path: None,
            synthetic_test: 7600,
        }
    }
}

impl ExperimentConfig {
    pub fn preset(scale: Scale) -> Self {
        let full = ExperimentConfig::default();
        match scale {
            Scale::Full => full,
            Scale::Small => ExperimentConfig {
                n: 500,
                unsup_samples: 1000,
                sup_samples: 1000,
                synthetic_test: 1000,
                ..full
            },
            Scale::Micro => ExperimentConfig {
                m: 8,
                n: 16,
                unsup_samples: 10,
                sup_samples: 10,
                synthetic_test: 40,
                telemetry_window: 100,
                ..full
            },
        }
    }

    /// Rewrites this configuration's dimensions and sample counts to a preset,
    /// keeping seed, data paths and other settings.
    pub fn apply_scale(&mut self, scale: Scale) {
        let p = Self::preset(scale);
        self.m = p.m;
        self.n = p.n;
        self.unsup_samples = p.unsup_samples;
        self.sup_samples = p.sup_samples;
        self.synthetic_test = p.synthetic_test;
        self.telemetry_window = p.telemetry_window;
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serialises")
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("m", self.m),
            ("n", self.n),
            ("unsup_samples", self.unsup_samples),
            ("sup_samples", self.sup_samples),
            ("trials", self.trials),
            ("telemetry_window", self.telemetry_window),
            ("jobs", self.jobs),
        ] {
            if v == 0 {
                return Err(Error::Config(format!("{name} must be at least 1")));
            }
        }
        if self.m > encoding::ASCII_SIZE {
            return Err(Error::Config(format!(
                "m = {} exceeds the {}-character vocabulary",
                self.m,
                encoding::ASCII_SIZE
            )));
        }
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return Err(Error::Config(format!(
                "lambda must be >= 0, got {}",
                self.lambda
            )));
        }
        if self.train_path.is_some() != self.test_path.is_some() {
            return Err(Error::Config(
                "train_path and test_path must be given together".into(),
            ));
        }
        self.learning_config().map(|_| ())
    }

    pub fn learning_config(&self) -> Result<LearningConfig> {
        Ok(
            LearningConfig::uniform(self.m, self.n, self.r_x, self.r_h, self.d)?
                .with_update_source(self.update_source),
        )
    }

    pub fn vocabulary(&self) -> Result<Vocabulary> {
        let v = if self.m == encoding::ASCII_SIZE {
            Vocabulary::ascii()
        } else {
            Vocabulary::folded(self.m)?
        };
        Ok(v.with_lowercase(self.lowercase))
    }

    pub fn samples_per_trial(&self) -> usize {
        self.unsup_samples + self.sup_samples
    }

    pub fn trial_seed(&self, trial: usize) -> u64 {
        derive_seed(self.seed, trial as u64)
    }
}

/// Indices into the training set for one trial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialSplit {
    pub unsup: Vec<usize>,
    pub sup: Vec<usize>,
}

/// Shuffles `0..train_len` with the run seed and cuts contiguous,
/// pairwise-disjoint blocks of `unsup + sup` indices, one per trial.
pub fn partition_trials(train_len: usize, cfg: &ExperimentConfig) -> Result<Vec<TrialSplit>> {
    let per_trial = cfg.samples_per_trial();
    let needed = per_trial * cfg.trials;
    if needed > train_len {
        return Err(Error::Config(format!(
            "{} trials x {per_trial} samples need {needed} training samples, only {train_len} available",
            cfg.trials
        )));
    }
    let mut order: Vec<usize> = (0..train_len).collect();
    SplitMix64::new(cfg.seed).shuffle(&mut order);
    Ok((0..cfg.trials)
        .map(|t| {
            let block = &order[t * per_trial..(t + 1) * per_trial];
            TrialSplit {
                unsup: block[..cfg.unsup_samples].to_vec(),
                sup: block[cfg.unsup_samples..].to_vec(),
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TelemetryRecord {
    /// Number of training steps completed at the end of the window.
    pub step: u64,
    pub state_err: f64,
    pub input_err: f64,
    pub density: f64,
}

/// Per-step signals, kept only when raw telemetry is requested.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawStep {
    pub state_err: u32,
    pub input_err: u32,
    pub density: f64,
}

/// Averages step signals over fixed windows; a trailing partial window is
/// flushed by [`Telemetry::finish`].
#[derive(Debug, Clone)]
pub struct Telemetry {
    window: usize,
    steps: u64,
    in_window: usize,
    sums: (u64, u64, f64),
    records: Vec<TelemetryRecord>,
    raw: Option<Vec<RawStep>>,
}

impl Telemetry {
    pub fn new(window: usize, keep_raw: bool) -> Self {
        Telemetry {
            window: window.max(1),
            steps: 0,
            in_window: 0,
            sums: (0, 0, 0.0),
            records: Vec::new(),
            raw: keep_raw.then(Vec::new),
        }
    }

    pub fn record(&mut self, state_err: usize, input_err: usize, density: f64) {
        self.steps += 1;
        self.in_window += 1;
        self.sums.0 += state_err as u64;
        self.sums.1 += input_err as u64;
        self.sums.2 += density;
        if let Some(raw) = &mut self.raw {
            raw.push(RawStep {
                state_err: state_err as u32,
                input_err: input_err as u32,
                density,
            });
        }
        if self.in_window == self.window {
            self.flush();
        }
    }

    fn flush(&mut self) {
        if self.in_window == 0 {
            return;
        }
        let k = self.in_window as f64;
        self.records.push(TelemetryRecord {
            step: self.steps,
            state_err: self.sums.0 as f64 / k,
            input_err: self.sums.1 as f64 / k,
            density: self.sums.2 / k,
        });
        self.in_window = 0;
        self.sums = (0, 0, 0.0);
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn finish(mut self) -> (Vec<TelemetryRecord>, Option<Vec<RawStep>>) {
        self.flush();
        (self.records, self.raw)
    }
}

pub fn write_telemetry_csv<W: Write>(records: &[TelemetryRecord], mut out: W) -> Result<()> {
    writeln!(out, "step,state_err,input_err,density")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{}",
            r.step, r.state_err, r.input_err, r.density
        )?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_raw_csv<W: Write>(raw: &[RawStep], mut out: W) -> Result<()> {
    writeln!(out, "step,state_err,input_err,density")?;
    for (i, r) in raw.iter().enumerate() {
        writeln!(
            out,
            "{},{},{},{}",
            i + 1,
            r.state_err,
            r.input_err,
            r.density
        )?;
    }
    out.flush()?;
    Ok(())
}

/// True when the mean density over a window falls below `0.01 * d`.
pub fn detect_collapse(densities: &[f64], d: f64) -> Result<bool> {
    if densities.is_empty() {
        return Err(Error::Argument(
            "collapse check needs a non-empty window".into(),
        ));
    }
    let mean = densities.iter().sum::<f64>() / densities.len() as f64;
    Ok(mean < 0.01 * d)
}

pub struct TrainOutcome {
    pub params: ModelParams,
    pub telemetry: Vec<TelemetryRecord>,
    pub raw: Option<Vec<RawStep>>,
    pub steps: u64,
    pub final_state: BinaryVector,
}

/// One pass over `samples`, one character per step, carrying the state
/// across sample boundaries from an initial zero state.
pub fn train_unsupervised(
    mut params: ModelParams,
    cfg: &LearningConfig,
    samples: &[Sample],
    window: usize,
    keep_raw: bool,
) -> Result<TrainOutcome> {
    let m = params.input_dim();
    let mut h = BinaryVector::zeros(params.state_dim());
    let mut telemetry = Telemetry::new(window, keep_raw);
    for sample in samples {
        for &c in &sample.chars {
            let x = BinaryVector::one_hot(m, c as usize)?;
            let trace = params.train_step(cfg, &x, &h)?;
            telemetry.record(trace.state_err, trace.input_err, trace.density);
            h = trace.h_next;
        }
    }
    let steps = telemetry.steps();
    let (records, raw) = telemetry.finish();
    Ok(TrainOutcome {
        params,
        telemetry: records,
        raw,
        steps,
        final_state: h,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub trial: usize,
    pub param_seed: u64,
    pub model_accuracy: Option<f64>,
    pub baseline_accuracy: Option<f64>,
    pub collapse: bool,
    pub training_steps: u64,
    #[serde(skip)]
    pub elapsed_secs: f64,
    #[serde(skip)]
    pub telemetry: Vec<TelemetryRecord>,
    #[serde(skip)]
    pub raw: Option<Vec<RawStep>>,
    #[serde(skip)]
    pub params: Option<ModelParams>,
}

/// Data for one trial, already encoded.
pub struct TrialData<'a> {
    pub unsup: Vec<&'a Sample>,
    pub sup: Vec<&'a Sample>,
}

fn owned(samples: &[&Sample]) -> Vec<Sample> {
    samples.iter().map(|s| (*s).clone()).collect()
}

pub fn run_trial(
    cfg: &ExperimentConfig,
    trial: usize,
    data: &TrialData<'_>,
    test: &[Sample],
) -> Result<TrialResult> {
    let started = Instant::now();
    let param_seed = cfg.trial_seed(trial);
    let sup = owned(&data.sup);
    let truth: Vec<u8> = test.iter().map(|s| s.label).collect();

    let mut result = TrialResult {
        trial,
        param_seed,
        model_accuracy: None,
        baseline_accuracy: None,
        collapse: false,
        training_steps: 0,
        elapsed_secs: 0.0,
        telemetry: Vec::new(),
        raw: None,
        params: None,
    };

    if cfg.mode.model() {
        let learning = cfg.learning_config()?;
        let params = ModelParams::init(cfg.m, cfg.n, param_seed)?;
        let unsup = owned(&data.unsup);
        let outcome = train_unsupervised(
            params,
            &learning,
            &unsup,
            cfg.telemetry_window,
            cfg.raw_telemetry,
        )?;
        result.collapse = outcome
            .telemetry
            .iter()
            .any(|r| detect_collapse(&[r.density], cfg.d).unwrap_or(false));
        if result.collapse {
            log::warn!("trial {trial}: hidden state collapsed towards zero during training");
        }
        log::info!(
            "trial {trial}: {} training steps in {:.1}s",
            outcome.steps,
            started.elapsed().as_secs_f64()
        );
        let train_x = featurize_stream(&outcome.params, &sup, cfg.feature_mode)?;
        let clf = RidgeClassifier::fit(&train_x, cfg.lambda)?;
        drop(train_x);
        let test_x = featurize_stream(&outcome.params, test, cfg.feature_mode)?;
        let acc = accuracy(&clf.predict(&test_x)?, &truth)?;
        log::info!(
            "trial {trial}: model accuracy {acc:.4} (ridge residual {:.2e})",
            clf.residual()
        );
        result.model_accuracy = Some(acc);
        result.training_steps = outcome.steps;
        result.telemetry = outcome.telemetry;
        result.raw = outcome.raw;
        result.params = Some(outcome.params);
    }

    if cfg.mode.baseline() {
        let train_x = baseline_featurize(&sup, cfg.m)?;
        let clf = RidgeClassifier::fit(&train_x, cfg.lambda)?;
        let test_x = baseline_featurize(test, cfg.m)?;
        let acc = accuracy(&clf.predict(&test_x)?, &truth)?;
        log::info!("trial {trial}: baseline accuracy {acc:.4}");
        result.baseline_accuracy = Some(acc);
    }

    result.elapsed_secs = started.elapsed().as_secs_f64();
    Ok(result)
}

/// Where the training and test data came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataSource {
    pub kind: String,
    pub train: String,
    pub test: String,
    pub train_size: usize,
    pub test_size: usize,
}

fn load_split(path: &Path, split: Split) -> Result<Dataset> {
    let format = InputFormat::from_extension(path).unwrap_or(InputFormat::AgNewsCsv);
    encoding::ingest(path, format, split)
}

/// Loads the configured datasets, or generates the synthetic corpus.
pub fn load_data(cfg: &ExperimentConfig) -> Result<(Dataset, Dataset, DataSource)> {
    match (&cfg.train_path, &cfg.test_path) {
        (Some(train), Some(test)) => {
            let tr = load_split(train, Split::Train)?;
            let te = load_split(test, Split::Test)?;
            let source = DataSource {
                kind: "files".into(),
                train: train.display().to_string(),
                test: test.display().to_string(),
                train_size: tr.len(),
                test_size: te.len(),
            };
            Ok((tr, te, source))
        }
        _ => {
            let train_size = cfg.samples_per_trial() * cfg.trials;
            let (tr, te) = synthetic::train_test(cfg.seed, train_size, cfg.synthetic_test);
            let source = DataSource {
                kind: "synthetic".into(),
                train: format!("synthetic(seed={})", cfg.seed),
                test: format!("synthetic(seed={})", cfg.seed),
                train_size,
                test_size: cfg.synthetic_test,
            };
            Ok((tr, te, source))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub config: ExperimentConfig,
    pub vocabulary: String,
    pub data: DataSource,
    pub prng: String,
    pub multiclass: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub metadata: RunMetadata,
    pub trials: Vec<TrialResult>,
    pub mean_model_accuracy: Option<f64>,
    pub mean_baseline_accuracy: Option<f64>,
}

fn mean(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let v: Option<Vec<f64>> = values.collect();
    v.filter(|v| !v.is_empty())
        .map(|v| v.iter().sum::<f64>() / v.len() as f64)
}

impl Report {
    /// Table of per-trial accuracies, one row per trial plus a mean row.
    pub fn to_csv(&self) -> String {
        let fmt = |v: Option<f64>| v.map(|a| a.to_string()).unwrap_or_default();
        let mut s = String::from("trial,model_accuracy,baseline_accuracy\n");
        for t in &self.trials {
            let _ = writeln!(
                s,
                "{},{},{}",
                t.trial + 1,
                fmt(t.model_accuracy),
                fmt(t.baseline_accuracy)
            );
        }
        let _ = writeln!(
            s,
            "mean,{},{}",
            fmt(self.mean_model_accuracy),
            fmt(self.mean_baseline_accuracy)
        );
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    /// Largest minus smallest model accuracy across trials.
    pub fn model_spread(&self) -> Option<f64> {
        let v: Option<Vec<f64>> = self.trials.iter().map(|t| t.model_accuracy).collect();
        let v = v?;
        let max = v.iter().cloned().fold(f64::MIN, f64::max);
        let min = v.iter().cloned().fold(f64::MAX, f64::min);
        (!v.is_empty()).then_some(max - min)
    }
}

/// Runs every trial and returns the report (no files written).
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let vocab = cfg.vocabulary()?;
    let (train, test, source) = load_data(cfg)?;
    let splits = partition_trials(train.len(), cfg)?;
    let train_samples = vocab.encode_all(&train.records)?;
    let test_samples = vocab.encode_all(&test.records)?;
    drop(train);
    drop(test);

    let run = |t: usize| -> Result<TrialResult> {
        let split = &splits[t];
        let data = TrialData {
            unsup: split.unsup.iter().map(|&i| &train_samples[i]).collect(),
            sup: split.sup.iter().map(|&i| &train_samples[i]).collect(),
        };
        run_trial(cfg, t, &data, &test_samples)
            .map_err(|e| annotate(e, &format!("trial {}", t + 1)))
    };

    let mut trials: Vec<TrialResult> = if cfg.jobs > 1 && cfg.trials > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        pool.install(|| {
            (0..cfg.trials)
                .into_par_iter()
                .map(run)
                .collect::<Result<Vec<_>>>()
        })?
    } else {
        (0..cfg.trials).map(run).collect::<Result<Vec<_>>>()?
    };
    trials.sort_by_key(|t| t.trial);

    let metadata = RunMetadata {
        config: cfg.clone(),
        vocabulary: vocab.describe(),
        data: source,
        prng: "splitmix64; shuffle = Fisher-Yates seeded with run seed; trial seed = seed ^ mix64((trial + 1) * 0x9E3779B97F4A7C15)".into(),
        multiclass: "one-hot indicator ridge regression, unpenalised intercept, argmax (ties -> lowest class)".into(),
    };
    Ok(Report {
        mean_model_accuracy: mean(trials.iter().map(|t| t.model_accuracy)),
        mean_baseline_accuracy: mean(trials.iter().map(|t| t.baseline_accuracy)),
        metadata,
        trials,
    })
}

fn annotate(e: Error, context: &str) -> Error {
    match e {
        Error::Data(m) => Error::Data(format!("{context}: {m}")),
        Error::Config(m) => Error::Config(format!("{context}: {m}")),
        Error::InvalidNumeric(m) => Error::InvalidNumeric(format!("{context}: {m}")),
        Error::NumericOverflow(m) => Error::NumericOverflow(format!("{context}: {m}")),
        Error::Singular(m) => Error::Singular(format!("{context}: {m}")),
        other => other,
    }
}

pub const RESULTS_CSV: &str = "results.csv";
pub const RESULTS_JSON: &str = "results.json";
pub const CONFIG_SNAPSHOT: &str = "config.toml";

pub fn trial_dir(out_dir: &Path, trial: usize) -> PathBuf {
    out_dir.join(format!("trial-{}", trial + 1))
}

/// Runs the experiment and writes every artifact under `out_dir`:
///
/// - `results.csv`, `results.json`, `config.toml`
/// - `trial-<k>/model.snet` (+ `.meta.toml`) and `trial-<k>/telemetry.csv`
/// - `trial-<k>/telemetry-raw.csv` when raw telemetry is enabled
///
/// Returns the report and the written paths.
pub fn reproduce(cfg: &ExperimentConfig, out_dir: &Path) -> Result<(Report, Vec<PathBuf>)> {
    let report = run_experiment(cfg)?;
    fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    let vocab = report.metadata.vocabulary.clone();

    for t in &report.trials {
        let dir = trial_dir(out_dir, t.trial);
        fs::create_dir_all(&dir)?;
        if let Some(params) = &t.params {
            let path = dir.join("model.snet");
            let meta = ModelMetadata {
                format_version: model_file::FORMAT_VERSION,
                m: cfg.m,
                n: cfg.n,
                seed: t.param_seed,
                r_x: cfg.r_x,
                r_h: cfg.r_h,
                d: cfg.d,
                update_source: cfg.update_source,
                training_samples: cfg.unsup_samples,
                training_steps: t.training_steps,
                vocabulary: vocab.clone(),
            };
            model_file::save(&path, params, Some(&meta))?;
            written.push(model_file::metadata_path(&path));
            written.push(path);
            let tpath = dir.join("telemetry.csv");
            write_telemetry_csv(&t.telemetry, BufWriter::new(fs::File::create(&tpath)?))?;
            written.push(tpath);
            if let Some(raw) = &t.raw {
                let rpath = dir.join("telemetry-raw.csv");
                write_raw_csv(raw, BufWriter::new(fs::File::create(&rpath)?))?;
                written.push(rpath);
            }
        }
    }
    for (name, body) in [
        (RESULTS_CSV, report.to_csv()),
        (RESULTS_JSON, report.to_json()),
        (CONFIG_SNAPSHOT, cfg.to_toml()),
    ] {
        let path = out_dir.join(name);
        fs::write(&path, body)?;
        written.push(path);
    }
    Ok((report, written))
}
