//! Semantic coherence, exclusivity, topic labels and K selection.

mod coherence;
mod frex;
mod select;

use alloc::string::String;
use alloc::vec::Vec;

pub use coherence::{semantic_coherence, top_words};
pub use frex::{exclusivity, frex_scores, label_topics, render_labels, TopicLabels};
pub use select::{candidate_ks, plot_transform, SweepEntry, SweepResult, SPIKE_PERCENTILE};

use crate::corpus::{DocumentTermMatrix, Vocabulary};
use crate::linalg::Matrix;
use crate::Result;

/// Words per topic for coherence and exclusivity scores.
pub const SCORE_WORDS: usize = 10;
/// Words per topic in label tables.
pub const LABEL_WORDS: usize = 7;
pub const EXCLUSIVITY_WEIGHT: f64 = 0.7;
pub const LABEL_FREX_WEIGHT: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct DiagnosticsConfig {
    pub score_words: usize,
    pub label_words: usize,
    pub exclusivity_weight: f64,
    pub label_frex_weight: f64,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        Self {
            score_words: SCORE_WORDS,
            label_words: LABEL_WORDS,
            exclusivity_weight: EXCLUSIVITY_WEIGHT,
            label_frex_weight: LABEL_FREX_WEIGHT,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopicDiagnostics {
    pub k: usize,
    pub coherence: Vec<f64>,
    pub exclusivity: Vec<f64>,
    /// Unweighted mean over topics.
    pub mean_coherence: f64,
    pub mean_exclusivity: f64,
    pub top_prob_words: Vec<Vec<String>>,
    pub top_frex_words: Vec<Vec<String>>,
}

/// All per-topic diagnostics of a fitted beta.
pub fn diagnose(
    beta: &Matrix,
    dtm: &DocumentTermMatrix,
    vocab: &Vocabulary,
    config: &DiagnosticsConfig,
) -> Result<TopicDiagnostics> {
    let m = config.score_words.min(beta.cols());
    let coherence = semantic_coherence(&top_words(beta, m), dtm);
    let exclusivity = exclusivity(beta, config.exclusivity_weight, m);
    let labels = label_topics(beta, vocab, config.label_words, config.label_frex_weight)?;
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    Ok(TopicDiagnostics {
        k: beta.rows(),
        mean_coherence: mean(&coherence),
        mean_exclusivity: mean(&exclusivity),
        coherence,
        exclusivity,
        top_prob_words: labels.iter().map(|l| l.prob.clone()).collect(),
        top_frex_words: labels.iter().map(|l| l.frex.clone()).collect(),
    })
}
