//! Run configuration: a JSON file whose values command-line flags override.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use topicscope_core::analysis::{PairConvention, CORRELATION_BIN_WIDTH, PREVALENCE_BIN_WIDTH, TOP_PAIRS};
use topicscope_core::corpus::YearScaling;
use topicscope_core::diagnostics::DiagnosticsConfig;
use topicscope_core::inference::{FitConfig, InitStrategy};

use crate::ingest::InputFormat;
use crate::{AppError, AppResult};

pub const DEFAULT_MIN_DF: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PreprocessOptions {
    /// Replaces the bundled stopword list.
    pub stopwords: Option<PathBuf>,
    /// Extra boilerplate phrases, added to the defaults.
    pub boilerplate: Option<PathBuf>,
    pub min_df: usize,
    pub year_scaling: YearScaling,
}

impl Default for PreprocessOptions {
    fn default() -> Self {
        Self {
            stopwords: None,
            boilerplate: None,
            min_df: DEFAULT_MIN_DF,
            year_scaling: YearScaling::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelOptions {
    pub k: Option<usize>,
    /// `LO:HI[:STEP]`.
    pub sweep: Option<String>,
    pub seed: Option<u64>,
    pub rel_tol: f64,
    pub max_em_iters: usize,
    pub ridge: f64,
    pub init: InitStrategy,
}

impl Default for ModelOptions {
    fn default() -> Self {
        let fit = FitConfig::default();
        Self {
            k: None,
            sweep: None,
            seed: None,
            rel_tol: fit.rel_tol,
            max_em_iters: fit.max_em_iters,
            ridge: fit.ridge,
            init: fit.init,
        }
    }
}

impl ModelOptions {
    pub fn fit_config(&self, seed: u64) -> FitConfig {
        FitConfig {
            seed,
            max_em_iters: self.max_em_iters,
            rel_tol: self.rel_tol,
            ridge: self.ridge,
            init: self.init,
        }
    }

    pub fn require_seed(&self) -> AppResult<u64> {
        self.seed.ok_or_else(|| AppError::input("--seed is required for fit and sweep"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum CorrelationSource {
    /// Pearson correlation of document-topic proportions.
    #[default]
    Theta,
    /// Correlation implied by the topic covariance (K-1 free topics).
    Sigma,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisOptions {
    pub correlation_bin_width: f64,
    pub prevalence_bin_width: f64,
    pub top_pairs: usize,
    pub pair_convention: PairConvention,
    pub correlation_source: CorrelationSource,
    pub svg: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            correlation_bin_width: CORRELATION_BIN_WIDTH,
            prevalence_bin_width: PREVALENCE_BIN_WIDTH,
            top_pairs: TOP_PAIRS,
            pair_convention: PairConvention::default(),
            correlation_source: CorrelationSource::default(),
            svg: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub format: Option<InputFormat>,
    /// Directory of ingest artifacts.
    pub corpus: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub preprocess: PreprocessOptions,
    pub model: ModelOptions,
    pub diagnostics: DiagnosticsConfig,
    pub analysis: AnalysisOptions,
}

impl RunConfig {
    pub fn load(path: &Path) -> AppResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| AppError::input(format!("{}: {e}", path.display())))
    }

    pub fn echo(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }

    pub fn require_out(&self) -> AppResult<&Path> {
        self.out.as_deref().ok_or_else(|| AppError::input("--out is required"))
    }

    pub fn require_corpus(&self) -> AppResult<&Path> {
        self.corpus.as_deref().ok_or_else(|| AppError::input("--corpus is required"))
    }

    /// Checks numeric ranges that would otherwise fail deep inside a run.
    pub fn validate(&self) -> AppResult<()> {
        let a = &self.analysis;
        if !(a.correlation_bin_width > 0.0 && a.prevalence_bin_width > 0.0) {
            return Err(AppError::input("bin widths must be positive"));
        }
        if self.preprocess.min_df == 0 {
            return Err(AppError::input("min_df must be at least 1"));
        }
        let m = &self.model;
        if !(m.rel_tol > 0.0) || m.max_em_iters == 0 || !(m.ridge >= 0.0) {
            return Err(AppError::input("rel_tol and max_em_iters must be positive, ridge non-negative"));
        }
        if let Some(k) = m.k {
            if k < 2 {
                return Err(AppError::input(format!("--k must be at least 2 (got {k})")));
            }
        }
        let d = &self.diagnostics;
        if d.score_words < 2 || d.label_words == 0 {
            return Err(AppError::input("score_words must be >= 2 and label_words >= 1"));
        }
        for (name, w) in
            [("exclusivity_weight", d.exclusivity_weight), ("label_frex_weight", d.label_frex_weight)]
        {
            if !(0.0..=1.0).contains(&w) {
                return Err(AppError::input(format!("{name} must lie in [0, 1]")));
            }
        }
        Ok(())
    }
}

/// Parses `LO:HI[:STEP]`; HI is included when `HI - LO` is a multiple of STEP.
pub fn parse_sweep(spec: &str) -> AppResult<Vec<usize>> {
    let bad = || {
        AppError::input(format!("--sweep {spec:?}: expected LO:HI[:STEP] with 2 <= LO <= HI and STEP >= 1"))
    };
    let parts: Vec<usize> =
        spec.split(':').map(|p| p.trim().parse::<usize>().map_err(|_| bad())).collect::<AppResult<_>>()?;
    let (lo, hi, step) = match parts[..] {
        [lo, hi] => (lo, hi, 1),
        [lo, hi, step] => (lo, hi, step),
        _ => return Err(bad()),
    };
    if lo < 2 || hi < lo || step == 0 {
        return Err(bad());
    }
    Ok((lo..=hi).step_by(step).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_ranges() {
        assert_eq!(parse_sweep("5:9:2").unwrap(), vec![5, 7, 9]);
        assert_eq!(parse_sweep("20:100:1").unwrap().len(), 81);
        assert_eq!(parse_sweep("5:8:2").unwrap(), vec![5, 7]);
        assert_eq!(parse_sweep("5:15").unwrap().len(), 11);
        for bad in ["1:5", "5:4", "5:9:0", "a:b", "5"] {
            assert!(parse_sweep(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn partial_config_keeps_defaults() {
        let c: RunConfig = serde_json::from_str(r#"{"model": {"k": 12, "seed": 3}}"#).unwrap();
        assert_eq!(c.model.k, Some(12));
        assert_eq!(c.model.max_em_iters, 500);
        assert_eq!(c.preprocess.min_df, 5);
        assert_eq!(c.analysis.top_pairs, 10);
        assert!(serde_json::from_str::<RunConfig>(r#"{"modle": {}}"#).is_err());
    }

    #[test]
    fn echo_round_trips() {
        let c = RunConfig::default();
        let back: RunConfig = serde_json::from_value(c.echo()).unwrap();
        assert_eq!(back, c);
    }
}
