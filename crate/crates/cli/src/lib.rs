//! Command implementations behind the `snet` binary.
//!
//! Each `cmd_*` function takes parsed arguments, does its work through
//! `snet-core`, writes a [`RunManifest`] next to its outputs and returns a
//! short human-readable summary.

use std::fmt::Write as _;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use snet_core::encoding::{self, InputFormat, ASCII_FIRST, ASCII_SIZE};
use snet_core::experiment::{self, ExperimentConfig, RunMode, Scale};
use snet_core::model::FrozenRunner;
use snet_core::model_file::{self, ModelMetadata};
use snet_core::{
    baseline_featurize, featurize_stream, BinaryVector, Dataset, Error, FeatureMatrix, FeatureMode,
    ModelParams, Result, RidgeClassifier, Split, UpdateSource, Vocabulary,
};

pub mod manifest;

pub use manifest::RunManifest;
use manifest::{manifest_path, unix_now};

#[derive(Debug, Parser)]
#[command(
    name = "snet",
    version,
    about = "Binary recurrent network: training, features, classification"
)]
pub struct Cli {
    /// Log verbosity (error, warn, info, debug, trace).
    #[arg(long, global = true, default_value = "info")]
    pub log: String,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert a labelled text dataset to canonical JSONL.
    Ingest(IngestArgs),
    /// One unsupervised pass over a dataset; writes a model file.
    Train(TrainArgs),
    /// Turn samples into feature vectors with a trained model or the baseline.
    Featurize(FeaturizeArgs),
    /// Fit the ridge classifier to a feature file.
    Fit(FitArgs),
    /// Score a classifier on a feature file.
    Evaluate(EvaluateArgs),
    /// Reconstruct past inputs and states backwards from a state.
    Rollback(RollbackArgs),
    /// Run the full multi-trial experiment and write every artifact.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    /// agnews-csv, preprocessed or jsonl (default: from the extension).
    #[arg(long)]
    pub format: Option<InputFormat>,
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Dataset file (any format accepted by `ingest`).
    #[arg(long, short)]
    pub input: PathBuf,
    /// agnews-csv, preprocessed or jsonl (default: from the extension).
    #[arg(long)]
    pub format: Option<InputFormat>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Model file to write (a `.meta.toml` sidecar is written alongside).
    #[arg(long, short)]
    pub output: PathBuf,
    /// Experiment configuration (TOML); flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Seed for parameter initialisation.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub r_x: Option<f64>,
    #[arg(long)]
    pub r_h: Option<f64>,
    #[arg(long)]
    pub d: Option<f64>,
    /// prev-state or next-state.
    #[arg(long)]
    pub update_source: Option<UpdateSource>,
    /// Train on the first N samples (default: all, or `unsup_samples` from --config).
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub lowercase: bool,
    /// Write windowed telemetry CSV here.
    #[arg(long)]
    pub telemetry: Option<PathBuf>,
    #[arg(long)]
    pub telemetry_window: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FeaturizeArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Trained model file.
    #[arg(
        long,
        required_unless_present = "baseline",
        conflicts_with = "baseline"
    )]
    pub model: Option<PathBuf>,
    /// Character-frequency features instead of model states.
    #[arg(long)]
    pub baseline: bool,
    /// Vocabulary size for --baseline (96, or fewer for folded indices).
    #[arg(long, default_value_t = ASCII_SIZE)]
    pub vocab_size: usize,
    /// average-state or final-state.
    #[arg(long)]
    pub mode: Option<FeatureMode>,
    #[arg(long)]
    pub lowercase: bool,
    /// Experiment configuration (TOML) supplying feature_mode and lowercase.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Binary feature file to write (labels go to `<output>.labels`).
    #[arg(long, short)]
    pub output: PathBuf,
    /// Also write the features as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long, short)]
    pub features: PathBuf,
    /// Ridge strength (default 1.0, or `lambda` from --config).
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long, short)]
    pub classifier: PathBuf,
    #[arg(long, short)]
    pub features: PathBuf,
    /// JSON summary to write.
    #[arg(long, short)]
    pub output: PathBuf,
    /// Also write per-row predictions as CSV.
    #[arg(long)]
    pub predictions: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RollbackArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Run this text through the model first and roll back from its final state.
    #[arg(long, required_unless_present = "state", conflicts_with = "state")]
    pub text: Option<String>,
    /// Roll back from this state, given as a 0/1 string of length n.
    #[arg(long)]
    pub state: Option<String>,
    /// Number of reconstruction steps.
    #[arg(long, short, default_value_t = 1)]
    pub k: usize,
    #[arg(long)]
    pub lowercase: bool,
    /// Write the trace here as well as to stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Experiment configuration (TOML); flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// micro, small or full. Sets m, n, sample counts and telemetry window.
    #[arg(long)]
    pub scale: Option<Scale>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Worker threads across trials.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// both, model or baseline.
    #[arg(long)]
    pub mode: Option<RunMode>,
    /// Training data; needs --test. Without both, a synthetic corpus is used.
    #[arg(long, requires = "test")]
    pub train: Option<PathBuf>,
    #[arg(long, requires = "train")]
    pub test: Option<PathBuf>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// prev-state or next-state.
    #[arg(long)]
    pub update_source: Option<UpdateSource>,
    /// average-state or final-state.
    #[arg(long)]
    pub feature_mode: Option<FeatureMode>,
    /// Also write per-step telemetry.
    #[arg(long)]
    pub raw_telemetry: bool,
}

fn load_dataset(data: &DataArgs) -> Result<Dataset> {
    let format = match data.format {
        Some(f) => f,
        None => InputFormat::from_extension(&data.input).ok_or_else(|| {
            Error::Argument(format!(
                "cannot infer the format of {}; pass --format",
                data.input.display()
            ))
        })?,
    };
    encoding::ingest(&data.input, format, Split::Train)
}

fn load_config(path: Option<&Path>) -> Result<ExperimentConfig> {
    match path {
        Some(p) => ExperimentConfig::load(p),
        None => Ok(ExperimentConfig::default()),
    }
}

/// The vocabulary a model with `m` inputs was trained with.
pub fn vocabulary_for(m: usize, lowercase: bool) -> Result<Vocabulary> {
    let v = if m == ASCII_SIZE {
        Vocabulary::ascii()
    } else {
        Vocabulary::folded(m)?
    };
    Ok(v.with_lowercase(lowercase))
}

fn model_lowercase(model: &Path) -> Result<bool> {
    Ok(model_file::load_metadata(model)?
        .map(|m| m.vocabulary.ends_with("-lowercase"))
        .unwrap_or(false))
}

fn json<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("value serialises")
}

pub fn cmd_ingest(args: &IngestArgs) -> Result<String> {
    let started = unix_now();
    let data = DataArgs {
        input: args.input.clone(),
        format: args.format,
    };
    let dataset = load_dataset(&data)?;
    encoding::export_jsonl(
        &dataset.records,
        BufWriter::new(fs::File::create(&args.output)?),
    )?;
    let mut manifest = RunManifest::new(
        "ingest",
        serde_json::json!({ "format": args.format.map(|f| format!("{f:?}")) }),
        started,
    );
    manifest.add_inputs([args.input.as_path()])?;
    manifest.add_artifacts([args.output.as_path()])?;
    manifest.write(&manifest_path(&args.output))?;
    Ok(format!(
        "wrote {} records to {}",
        dataset.len(),
        args.output.display()
    ))
}

pub fn cmd_train(args: &TrainArgs) -> Result<String> {
    let started = unix_now();
    let mut cfg = load_config(args.config.as_deref())?;
    let mut limit = args.config.as_ref().map(|_| cfg.unsup_samples);
    macro_rules! set {
        ($($f:ident),*) => { $(if let Some(v) = args.$f { cfg.$f = v; })* };
    }
    set!(seed, m, n, r_x, r_h, d, update_source, telemetry_window);
    cfg.lowercase |= args.lowercase;
    if let Some(s) = args.samples {
        limit = Some(s);
    }
    if limit == Some(0) {
        return Err(Error::Argument("--samples must be at least 1".into()));
    }
    let learning = cfg.learning_config()?;
    let vocab = cfg.vocabulary()?;

    let dataset = load_dataset(&args.data)?;
    let take = limit.unwrap_or(dataset.len());
    if take > dataset.len() {
        return Err(Error::Data(format!(
            "asked for {take} training samples, {} has {}",
            args.data.input.display(),
            dataset.len()
        )));
    }
    let samples = vocab.encode_all(&dataset.records[..take])?;
    let params = ModelParams::init(cfg.m, cfg.n, cfg.seed)?;
    let outcome =
        experiment::train_unsupervised(params, &learning, &samples, cfg.telemetry_window, false)?;

    let meta = ModelMetadata {
        format_version: model_file::FORMAT_VERSION,
        m: cfg.m,
        n: cfg.n,
        seed: cfg.seed,
        r_x: cfg.r_x,
        r_h: cfg.r_h,
        d: cfg.d,
        update_source: cfg.update_source,
        training_samples: take,
        training_steps: outcome.steps,
        vocabulary: vocab.describe(),
    };
    model_file::save(&args.output, &outcome.params, Some(&meta))?;
    let meta_path = model_file::metadata_path(&args.output);
    let mut artifacts = vec![args.output.clone(), meta_path];
    if let Some(t) = &args.telemetry {
        experiment::write_telemetry_csv(&outcome.telemetry, BufWriter::new(fs::File::create(t)?))?;
        artifacts.push(t.clone());
    }

    let mut manifest = RunManifest::new("train", json(&cfg), started);
    manifest.add_inputs(
        args.config
            .iter()
            .map(|p| p.as_path())
            .chain([args.data.input.as_path()]),
    )?;
    manifest.add_artifacts(artifacts.iter().map(|p| p.as_path()))?;
    manifest.write(&manifest_path(&args.output))?;

    let last = outcome.telemetry.last();
    Ok(format!(
        "trained on {take} samples ({} steps); final window state_err {:.3}, input_err {:.3}, density {:.4}",
        outcome.steps,
        last.map_or(0.0, |r| r.state_err),
        last.map_or(0.0, |r| r.input_err),
        last.map_or(0.0, |r| r.density),
    ))
}

pub fn cmd_featurize(args: &FeaturizeArgs) -> Result<String> {
    let started = unix_now();
    let cfg = load_config(args.config.as_deref())?;
    let mode = args.mode.unwrap_or(cfg.feature_mode);
    let dataset = load_dataset(&args.data)?;
    let mut inputs = vec![args.data.input.clone()];
    inputs.extend(args.config.clone());

    let (features, vocab) = match &args.model {
        Some(model) => {
            let params = model_file::load(model)?;
            let lowercase = args.lowercase || cfg.lowercase || model_lowercase(model)?;
            let vocab = vocabulary_for(params.input_dim(), lowercase)?;
            let samples = vocab.encode_all(&dataset.records)?;
            inputs.push(model.clone());
            (featurize_stream(&params, &samples, mode)?, vocab)
        }
        None => {
            let vocab = vocabulary_for(args.vocab_size, args.lowercase || cfg.lowercase)?;
            let samples = vocab.encode_all(&dataset.records)?;
            (baseline_featurize(&samples, vocab.size())?, vocab)
        }
    };
    features.save(&args.output)?;
    let mut artifacts = vec![
        args.output.clone(),
        FeatureMatrix::labels_path(&args.output),
    ];
    if let Some(csv) = &args.csv {
        features.write_csv(BufWriter::new(fs::File::create(csv)?))?;
        artifacts.push(csv.clone());
    }

    let mut manifest = RunManifest::new(
        "featurize",
        serde_json::json!({
            "kind": if args.baseline { "baseline" } else { "model" },
            "feature_mode": json(&mode),
            "vocabulary": vocab.describe(),
        }),
        started,
    );
    manifest.add_inputs(inputs.iter().map(|p| p.as_path()))?;
    manifest.add_artifacts(artifacts.iter().map(|p| p.as_path()))?;
    manifest.write(&manifest_path(&args.output))?;
    Ok(format!(
        "wrote {} x {} features to {}",
        features.rows(),
        features.dim(),
        args.output.display()
    ))
}

pub fn cmd_fit(args: &FitArgs) -> Result<String> {
    let started = unix_now();
    let cfg = load_config(args.config.as_deref())?;
    let lambda = args.lambda.unwrap_or(cfg.lambda);
    let features = FeatureMatrix::load(&args.features)?;
    let clf = RidgeClassifier::fit(&features, lambda)?;
    clf.save(&args.output)?;

    let mut manifest = RunManifest::new(
        "fit",
        serde_json::json!({ "lambda": lambda, "residual": clf.residual() }),
        started,
    );
    let labels = FeatureMatrix::labels_path(&args.features);
    manifest.add_inputs(
        [args.features.as_path(), labels.as_path()]
            .into_iter()
            .chain(args.config.iter().map(|p| p.as_path())),
    )?;
    manifest.add_artifacts([args.output.as_path()])?;
    manifest.write(&manifest_path(&args.output))?;
    Ok(format!(
        "fitted {} rows x {} features, lambda {lambda}, normal-equation residual {:.3e}",
        features.rows(),
        features.dim(),
        clf.residual()
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluation {
    pub rows: usize,
    pub accuracy: f64,
    /// `confusion[truth][predicted]`.
    pub confusion: [[usize; 4]; 4],
}

pub fn cmd_evaluate(args: &EvaluateArgs) -> Result<Evaluation> {
    let started = unix_now();
    let clf = RidgeClassifier::load(&args.classifier)?;
    let features = FeatureMatrix::load(&args.features)?;
    let predicted = clf.predict(&features)?;
    let truth = features.labels();
    let mut confusion = [[0usize; 4]; 4];
    for (&t, &p) in truth.iter().zip(&predicted) {
        confusion[t as usize][p as usize] += 1;
    }
    let eval = Evaluation {
        rows: truth.len(),
        accuracy: snet_core::accuracy(&predicted, truth)?,
        confusion,
    };
    fs::write(
        &args.output,
        serde_json::to_string_pretty(&eval).expect("evaluation serialises") + "\n",
    )?;
    let mut artifacts = vec![args.output.clone()];
    if let Some(path) = &args.predictions {
        let mut s = String::from("row,label,predicted\n");
        for (i, (&t, &p)) in truth.iter().zip(&predicted).enumerate() {
            let _ = writeln!(s, "{i},{t},{p}");
        }
        fs::write(path, s)?;
        artifacts.push(path.clone());
    }

    let mut manifest = RunManifest::new("evaluate", serde_json::json!({}), started);
    let labels = FeatureMatrix::labels_path(&args.features);
    manifest.add_inputs([
        args.classifier.as_path(),
        args.features.as_path(),
        labels.as_path(),
    ])?;
    manifest.add_artifacts(artifacts.iter().map(|p| p.as_path()))?;
    manifest.write(&manifest_path(&args.output))?;
    Ok(eval)
}

/// Where a rollback starts from.
#[derive(Debug, Clone)]
pub enum RollbackStart {
    /// Run the text through the frozen model from the zero state first.
    Text(String),
    State(BinaryVector),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RollbackStep {
    /// 1 reconstructs the most recent input and the state before it.
    pub depth: usize,
    /// Active positions of the reconstructed input.
    pub input_active: Vec<usize>,
    /// Input index actually presented at this position, when known.
    pub true_input: Option<usize>,
    pub state_active: usize,
    /// Hamming distance to the recorded state, when known.
    pub state_err: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RollbackTrace {
    pub n: usize,
    /// Characters consumed before the rollback started.
    pub consumed: usize,
    pub start_active: usize,
    pub steps: Vec<RollbackStep>,
}

/// Chains `k` reconstructions backwards and scores them against the
/// recorded trajectory when the start came from text.
pub fn rollback_trace(
    params: &ModelParams,
    vocab: &Vocabulary,
    start: &RollbackStart,
    k: usize,
) -> Result<RollbackTrace> {
    if vocab.size() != params.input_dim() {
        return Err(Error::Argument(format!(
            "vocabulary of {} does not match model input size {}",
            vocab.size(),
            params.input_dim()
        )));
    }
    let (inputs, states, h) = match start {
        RollbackStart::Text(text) => {
            if text.is_empty() {
                return Err(Error::Argument("rollback text is empty".into()));
            }
            let inputs: Vec<usize> = text.chars().map(|c| vocab.encode_char(c)).collect();
            let mut runner = FrozenRunner::new(params);
            let mut states = vec![runner.state().clone()];
            for &c in &inputs {
                states.push(runner.advance(c)?.clone());
            }
            let h = states.last().cloned().expect("at least the initial state");
            (inputs, states, h)
        }
        RollbackStart::State(h) => {
            if h.len() != params.state_dim() {
                return Err(Error::Argument(format!(
                    "state has {} bits, model has n = {}",
                    h.len(),
                    params.state_dim()
                )));
            }
            (Vec::new(), Vec::new(), h.clone())
        }
    };
    let t = inputs.len();
    let chain = params.rollback(&h, k)?;
    let steps = chain
        .iter()
        .enumerate()
        .map(|(j, (x, hr))| {
            let depth = j + 1;
            let known = depth <= t;
            Ok(RollbackStep {
                depth,
                input_active: x.iter_ones().collect(),
                true_input: known.then(|| inputs[t - depth]),
                state_active: hr.count_ones(),
                state_err: if known {
                    Some(hr.hamming(&states[t - depth])?)
                } else {
                    None
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RollbackTrace {
        n: params.state_dim(),
        consumed: t,
        start_active: h.count_ones(),
        steps,
    })
}

fn show_index(vocab: &Vocabulary, i: usize) -> String {
    if vocab.size() == ASCII_SIZE {
        let c = char::from_u32(ASCII_FIRST + i as u32).unwrap_or(' ');
        if c.is_ascii_graphic() || c == ' ' {
            format!("{c:?}")
        } else {
            format!("#{i}")
        }
    } else {
        format!("#{i}")
    }
}

pub fn format_trace(trace: &RollbackTrace, vocab: &Vocabulary) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "start: state after {} characters, {} of {} units active",
        trace.consumed, trace.start_active, trace.n
    );
    let _ = writeln!(s, "depth  true   state_err  agreement  active  input");
    for st in &trace.steps {
        let shown: Vec<String> = st
            .input_active
            .iter()
            .map(|&i| show_index(vocab, i))
            .collect();
        let truth = st
            .true_input
            .map_or("-".to_string(), |i| show_index(vocab, i));
        let (err, agree) = match st.state_err {
            Some(e) => (e.to_string(), format!("{}/{}", trace.n - e, trace.n)),
            None => ("-".into(), "-".into()),
        };
        let _ = writeln!(
            s,
            "{:<6} {:<6} {:<10} {:<10} {:<7} {{{}}}",
            st.depth,
            truth,
            err,
            agree,
            st.state_active,
            shown.join(", ")
        );
    }
    s
}

pub fn cmd_rollback(args: &RollbackArgs) -> Result<String> {
    let started = unix_now();
    let params = model_file::load(&args.model)?;
    let vocab = vocabulary_for(
        params.input_dim(),
        args.lowercase || model_lowercase(&args.model)?,
    )?;
    let start = match (&args.text, &args.state) {
        (Some(t), _) => RollbackStart::Text(t.clone()),
        (None, Some(bits)) => RollbackStart::State(
            bits.parse()
                .map_err(|e: Error| Error::Argument(format!("--state: {e}")))?,
        ),
        (None, None) => return Err(Error::Argument("give --text or --state".into())),
    };
    let trace = rollback_trace(&params, &vocab, &start, args.k)?;
    let text = format_trace(&trace, &vocab);
    if let Some(out) = &args.output {
        fs::write(out, &text)?;
        let mut manifest = RunManifest::new(
            "rollback",
            serde_json::json!({ "k": args.k, "text": args.text, "state": args.state }),
            started,
        );
        manifest.add_inputs([args.model.as_path()])?;
        manifest.add_artifacts([out.as_path()])?;
        manifest.write(&manifest_path(out))?;
    }
    Ok(text)
}

/// Merges config file, scale preset and flags, in that order of precedence
/// (later wins).
pub fn reproduce_config(args: &ReproduceArgs) -> Result<ExperimentConfig> {
    let mut cfg = load_config(args.config.as_deref())?;
    if let Some(scale) = args.scale {
        cfg.apply_scale(scale);
    }
    macro_rules! set {
        ($($f:ident),*) => { $(if let Some(v) = args.$f { cfg.$f = v; })* };
    }
    set!(
        seed,
        trials,
        jobs,
        mode,
        lambda,
        update_source,
        feature_mode
    );
    if args.train.is_some() {
        cfg.train_path = args.train.clone();
        cfg.test_path = args.test.clone();
    }
    cfg.raw_telemetry |= args.raw_telemetry;
    cfg.validate()?;
    Ok(cfg)
}

pub const MANIFEST_NAME: &str = "manifest.json";

pub fn cmd_reproduce(args: &ReproduceArgs) -> Result<String> {
    let started = unix_now();
    let cfg = reproduce_config(args)?;
    let (report, written) = experiment::reproduce(&cfg, &args.out)?;
    let mut manifest = RunManifest::new("reproduce", json(&cfg), started);
    manifest.add_inputs(
        args.config
            .iter()
            .chain(cfg.train_path.iter())
            .chain(cfg.test_path.iter())
            .map(|p| p.as_path()),
    )?;
    manifest.add_artifacts(written.iter().map(|p| p.as_path()))?;
    manifest.write(&args.out.join(MANIFEST_NAME))?;

    let mut s = report.to_csv();
    if report.trials.iter().any(|t| t.collapse) {
        s.push_str("warning: hidden state collapse detected in at least one trial\n");
    }
    let _ = write!(s, "artifacts in {}", args.out.display());
    Ok(s)
}

pub fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Ingest(a) => cmd_ingest(a),
        Command::Train(a) => cmd_train(a),
        Command::Featurize(a) => cmd_featurize(a),
        Command::Fit(a) => cmd_fit(a),
        Command::Evaluate(a) => {
            cmd_evaluate(a).map(|e| format!("accuracy {:.4} on {} rows", e.accuracy, e.rows))
        }
        Command::Rollback(a) => cmd_rollback(a),
        Command::Reproduce(a) => cmd_reproduce(a),
    }
}
