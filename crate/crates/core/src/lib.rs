//! A stateful recurrent network with binary activations and a single weight
//! matrix, trained without gradients by reconstructing its previous input
//! and state, plus the pipeline that turns its states into text features
//! for a ridge-regression topic classifier.

pub mod binary;
pub mod classifier;
pub mod encoding;
pub mod error;
pub mod experiment;
pub mod features;
mod linalg;
pub mod model;
pub mod model_file;
pub mod rng;
pub mod synthetic;

#[cfg(test)]
mod reference;

pub use binary::BinaryVector;
pub use classifier::{accuracy, RidgeClassifier};
pub use encoding::{Dataset, Record, Sample, Split, Vocabulary};
pub use error::{Error, ErrorKind, Result};
pub use features::{baseline_featurize, featurize_stream, FeatureMatrix, FeatureMode};
pub use model::{heaviside, LearningConfig, ModelParams, StepTrace, UpdateSource};
