//! Fitting a range of K with per-K checkpoints, then proposing candidates.

use std::path::{Path, PathBuf};

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use topicscope_core::diagnostics::{
    candidate_ks, diagnose, plot_transform, DiagnosticsConfig, SweepEntry, SweepResult,
};
use topicscope_core::inference::fit;
use topicscope_core::rng::derive_seed;

use crate::config::ModelOptions;
use crate::formats::{fmt_sig, read_file, sha256_hex, vocab_hash, write_file, CorpusArtifacts};
use crate::{AppError, AppResult};

pub const SWEEP_FILE: &str = "sweep.csv";

/// Contents of `k_<K>.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    #[serde(flatten)]
    pub entry: SweepEntry,
    /// Hash of the corpus vocabulary and every setting that affects the fit.
    pub fingerprint: String,
}

#[derive(Debug, Clone, Default)]
pub struct SweepOutcome {
    pub result: SweepResult,
    /// K values whose fit failed, with the reason.
    pub failures: Vec<(usize, String)>,
    /// K values taken from existing checkpoints.
    pub resumed: Vec<usize>,
}

pub fn checkpoint_path(dir: &Path, k: usize) -> PathBuf {
    dir.join(format!("k_{k}.json"))
}

fn fingerprint(
    corpus: &CorpusArtifacts,
    model: &ModelOptions,
    diag: &DiagnosticsConfig,
    seed: u64,
) -> String {
    let desc = serde_json::json!({
        "vocab": vocab_hash(corpus.vocab.terms()),
        "dtm_nnz": corpus.dtm.nnz(),
        "n_docs": corpus.dtm.n_docs(),
        "fit": model.fit_config(seed),
        "diagnostics": diag,
    });
    sha256_hex(desc.to_string().as_bytes())
}

fn load_checkpoint(path: &Path, fp: &str) -> Option<SweepEntry> {
    let text = read_file(path).ok()?;
    match serde_json::from_str::<Checkpoint>(&text) {
        Ok(c) if c.fingerprint == fp => Some(c.entry),
        Ok(_) => {
            warn!("{} was written with different settings; refitting", path.display());
            None
        }
        Err(e) => {
            warn!("ignoring unreadable checkpoint {}: {e}", path.display());
            None
        }
    }
}

fn fit_one(
    corpus: &CorpusArtifacts,
    k: usize,
    seed: u64,
    model: &ModelOptions,
    diag: &DiagnosticsConfig,
) -> AppResult<SweepEntry> {
    let result = fit(&corpus.dtm, &corpus.design.x, k, &model.fit_config(seed))?;
    let d = diagnose(&result.params.beta, &corpus.dtm, &corpus.vocab, diag)?;
    Ok(SweepEntry {
        k,
        se: d.mean_coherence,
        ex: d.mean_exclusivity,
        elbo: *result.elbo_trace.last().expect("at least one E-step"),
        seed,
        converged: result.converged,
        em_iters: result.elbo_trace.len(),
    })
}

/// Fits every K (concurrently), reusing checkpoints whose settings match.
/// K `k` is fitted with seed `derive_seed(base_seed, k)`.
pub fn k_sweep(
    corpus: &CorpusArtifacts,
    ks: &[usize],
    model: &ModelOptions,
    diag: &DiagnosticsConfig,
    base_seed: u64,
    checkpoint_dir: &Path,
) -> AppResult<SweepOutcome> {
    std::fs::create_dir_all(checkpoint_dir).map_err(|e| AppError::io(checkpoint_dir, e))?;
    let runs: Vec<(usize, bool, AppResult<SweepEntry>)> = ks
        .par_iter()
        .map(|&k| {
            let seed = derive_seed(base_seed, k);
            let fp = fingerprint(corpus, model, diag, seed);
            let path = checkpoint_path(checkpoint_dir, k);
            if let Some(entry) = load_checkpoint(&path, &fp) {
                return (k, true, Ok(entry));
            }
            let run = fit_one(corpus, k, seed, model, diag).and_then(|entry| {
                let ck = Checkpoint { entry: entry.clone(), fingerprint: fp };
                let tmp = path.with_extension("json.tmp");
                write_file(&tmp, serde_json::to_string_pretty(&ck).expect("checkpoint serializes") + "\n")?;
                std::fs::rename(&tmp, &path).map_err(|e| AppError::io(&path, e))?;
                info!("K = {k}: SE {:.4} EX {:.4} ({} EM iterations)", entry.se, entry.ex, entry.em_iters);
                Ok(entry)
            });
            (k, false, run)
        })
        .collect();

    let mut out = SweepOutcome::default();
    for (k, resumed, run) in runs {
        match run {
            Ok(entry) => {
                if resumed {
                    out.resumed.push(k);
                }
                out.result.entries.push(entry);
            }
            Err(e) => {
                warn!("K = {k} failed: {e}");
                out.failures.push((k, e.to_string()));
            }
        }
    }
    out.result.entries.sort_by_key(|e| e.k);
    out.result.candidates = if out.result.entries.len() >= 3 {
        candidate_ks(&out.result.entries)?
    } else {
        warn!("fewer than three successful K values; no candidates proposed");
        Vec::new()
    };
    Ok(out)
}

/// `k,se,ex,se_hat,ex_hat,candidate`, the hatted columns rescaled for a
/// shared plot axis.
pub fn render_sweep_csv(result: &SweepResult) -> String {
    let mut s = String::from("k,se,ex,se_hat,ex_hat,candidate\n");
    for e in &result.entries {
        let (se_hat, ex_hat) = plot_transform(e.se, e.ex);
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            e.k,
            fmt_sig(e.se, 6),
            fmt_sig(e.ex, 6),
            fmt_sig(se_hat, 6),
            fmt_sig(ex_hat, 6),
            result.candidates.contains(&e.k)
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_csv_layout() {
        let e = |k, se| SweepEntry { k, se, ex: 9.0, elbo: -1.0, seed: 1, converged: true, em_iters: 3 };
        let r = SweepResult { entries: vec![e(5, -100.0), e(6, -90.5)], candidates: vec![6], k_star: None };
        assert_eq!(
            render_sweep_csv(&r),
            "k,se,ex,se_hat,ex_hat,candidate\n5,-100,9,10,5,false\n6,-90.5,9,10.95,5,true\n"
        );
    }
}
