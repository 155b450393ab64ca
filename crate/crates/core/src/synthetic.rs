//! Seeded synthetic four-topic news-like corpus.
//!
//! Used when no real dataset is supplied (CI, smoke runs, benchmarks). Words
//! are built from a shared syllable inventory, so every topic has roughly
//! the same character distribution; topics differ only in which words they
//! prefer. Each sample mixes Zipf-weighted common words with words from its
//! topic's own lexicon.

use crate::encoding::{Dataset, Record, Split, NUM_CLASSES};
use crate::rng::{derive_seed, SplitMix64};

const ONSETS: &[&str] = &[
    "b", "c", "d", "f", "g", "h", "j", "k", "l", "m", "n", "p", "r", "s", "t", "v", "w", "z", "br",
    "ch", "cl", "dr", "fl", "gr", "pl", "pr", "sh", "sl", "st", "th", "tr",
];
const VOWELS: &[&str] = &["a", "e", "i", "o", "u", "ai", "ea", "ee", "ou", "y"];
const CODAS: &[&str] = &["", "", "", "n", "r", "s", "t", "l", "m", "nd", "st", "ck"];

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticConfig {
    pub common_words: usize,
    pub topic_words: usize,
    /// Probability that a word slot is filled from the topic lexicon.
    pub topic_share: f64,
    pub min_words: usize,
    pub max_words: usize,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            common_words: 300,
            topic_words: 120,
            topic_share: 0.3,
            min_words: 20,
            max_words: 45,
        }
    }
}

fn pick<'a>(rng: &mut SplitMix64, items: &[&'a str]) -> &'a str {
    items[rng.next_below(items.len() as u64) as usize]
}

fn make_word(rng: &mut SplitMix64) -> String {
    let syllables = 1 + rng.next_below(3) as usize;
    let mut w = String::new();
    for _ in 0..syllables {
        w.push_str(pick(rng, ONSETS));
        w.push_str(pick(rng, VOWELS));
        w.push_str(pick(rng, CODAS));
    }
    w
}

/// Distinct words, in generation order.
fn lexicon(
    rng: &mut SplitMix64,
    count: usize,
    taken: &mut std::collections::HashSet<String>,
) -> Vec<String> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let w = make_word(rng);
        if taken.insert(w.clone()) {
            out.push(w);
        }
    }
    out
}

/// Cumulative Zipf(1) weights over `len` ranks.
fn zipf_cdf(len: usize) -> Vec<f64> {
    let mut acc = 0.0;
    let mut cdf: Vec<f64> = (1..=len)
        .map(|r| {
            acc += 1.0 / r as f64;
            acc
        })
        .collect();
    for c in &mut cdf {
        *c /= acc;
    }
    cdf
}

fn draw<'a>(rng: &mut SplitMix64, words: &'a [String], cdf: &[f64]) -> &'a str {
    let u = rng.next_open01();
    let idx = cdf.partition_point(|&c| c < u).min(words.len() - 1);
    &words[idx]
}

pub struct SyntheticCorpus {
    cfg: SyntheticConfig,
    common: Vec<String>,
    topics: Vec<Vec<String>>,
    common_cdf: Vec<f64>,
    topic_cdf: Vec<f64>,
}

impl SyntheticCorpus {
    pub fn new(seed: u64, cfg: SyntheticConfig) -> Self {
        let mut rng = SplitMix64::new(derive_seed(seed, 0x5EED));
        let mut taken = std::collections::HashSet::new();
        let common = lexicon(&mut rng, cfg.common_words, &mut taken);
        let topics = (0..NUM_CLASSES)
            .map(|_| lexicon(&mut rng, cfg.topic_words, &mut taken))
            .collect();
        SyntheticCorpus {
            common_cdf: zipf_cdf(cfg.common_words),
            topic_cdf: zipf_cdf(cfg.topic_words),
            cfg,
            common,
            topics,
        }
    }

    pub fn sample(&self, rng: &mut SplitMix64, label: u8) -> Record {
        let span = (self.cfg.max_words - self.cfg.min_words + 1) as u64;
        let words = self.cfg.min_words + rng.next_below(span) as usize;
        let mut text = String::new();
        for i in 0..words {
            let word = if rng.next_open01() < self.cfg.topic_share {
                draw(rng, &self.topics[label as usize], &self.topic_cdf).to_string()
            } else if rng.next_below(40) == 0 {
                (rng.next_below(2000)).to_string()
            } else {
                draw(rng, &self.common, &self.common_cdf).to_string()
            };
            if i == 0 {
                let mut chars = word.chars();
                if let Some(first) = chars.next() {
                    text.extend(first.to_uppercase());
                    text.push_str(chars.as_str());
                }
            } else {
                text.push_str(&word);
            }
            if i + 1 == words {
                text.push('.');
            } else if rng.next_below(12) == 0 {
                text.push_str(", ");
            } else {
                text.push(' ');
            }
        }
        Record { label, text }
    }

    /// `count` samples with uniformly drawn labels.
    pub fn generate(&self, seed: u64, count: usize, split: Split) -> Dataset {
        let mut rng = SplitMix64::new(seed);
        let records = (0..count)
            .map(|_| {
                let label = rng.next_below(NUM_CLASSES as u64) as u8;
                self.sample(&mut rng, label)
            })
            .collect();
        Dataset { split, records }
    }

    /// `count` samples cycling through the labels, so classes are balanced.
    pub fn generate_balanced(&self, seed: u64, count: usize, split: Split) -> Dataset {
        let mut rng = SplitMix64::new(seed);
        let records = (0..count)
            .map(|i| self.sample(&mut rng, (i % NUM_CLASSES) as u8))
            .collect();
        Dataset { split, records }
    }
}

/// Train and test splits drawn from one corpus.
pub fn train_test(seed: u64, train: usize, test: usize) -> (Dataset, Dataset) {
    let corpus = SyntheticCorpus::new(seed, SyntheticConfig::default());
    (
        corpus.generate(derive_seed(seed, 1), train, Split::Train),
        corpus.generate_balanced(derive_seed(seed, 2), test, Split::Test),
    )
}
