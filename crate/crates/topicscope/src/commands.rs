//! The four subcommands. Each validates its paths before doing any work.

use std::path::{Path, PathBuf};

use log::info;
use serde::Serialize;
use topicscope_core::analysis::{multi_k_correlation_comparison, sigma_correlations, topic_correlations};
use topicscope_core::corpus::{
    build_design, build_dtm, build_vocabulary, retain_with_abstracts, tokenize_document, Boilerplate,
    PreprocessConfig, StopwordList, TokenizedDocument,
};
use topicscope_core::inference::fit;
use topicscope_core::linalg::Matrix;

use crate::config::{parse_sweep, CorrelationSource, RunConfig};
use crate::formats::{
    canonical_theta, csv_err, finish_csv, read_boilerplate, read_file, read_stopwords, render_theta,
    vocab_hash, write_file, CorpusArtifacts, ModelFile, DROP_LOG_FILE, MODEL_FILE, THETA_FILE,
};
use crate::ingest::read_records;
use crate::report::{export_report, Report, ReportInputs};
use crate::sweep::{k_sweep, render_sweep_csv, SweepOutcome, SWEEP_FILE};
use crate::{AppError, AppResult};

pub const CHECKPOINT_DIR: &str = "checkpoints";

fn require_file(path: &Path) -> AppResult<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(AppError::input(format!("{}: no such file", path.display())))
    }
}

fn require_dir(path: &Path) -> AppResult<()> {
    if path.is_dir() {
        Ok(())
    } else {
        Err(AppError::input(format!("{}: no such directory", path.display())))
    }
}

fn check_corpus_dir(dir: &Path) -> AppResult<()> {
    require_dir(dir)?;
    for name in [
        crate::formats::DTM_FILE,
        crate::formats::DOC_IDS_FILE,
        crate::formats::VOCAB_FILE,
        crate::formats::DESIGN_FILE,
    ] {
        require_file(&dir.join(name))?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IngestSummary {
    pub records: usize,
    pub missing_abstract: usize,
    pub no_tokens: usize,
    pub documents: usize,
    pub terms: usize,
}

/// Records to corpus artifacts plus `drop_log.csv` (`id,reason`).
pub fn cmd_ingest(cfg: &RunConfig) -> AppResult<IngestSummary> {
    let input = cfg.input.as_deref().ok_or_else(|| AppError::input("--input is required"))?;
    require_file(input)?;
    let out = cfg.require_out()?;
    let pre = &cfg.preprocess;
    if let Some(p) = &pre.stopwords {
        require_file(p)?;
    }
    if let Some(p) = &pre.boilerplate {
        require_file(p)?;
    }

    let records = read_records(input, cfg.format)?;
    if let Some(r) = records.iter().find(|r| r.id.contains(['\n', '\r'])) {
        return Err(AppError::input(format!("record id {:?} contains a line break", r.id)));
    }
    let n_records = records.len();
    let retained = retain_with_abstracts(records)?;
    let stopwords = match &pre.stopwords {
        Some(p) => read_stopwords(p)?,
        None => StopwordList::default_english(),
    };
    let boilerplate = match &pre.boilerplate {
        Some(p) => Boilerplate::with_extra(read_boilerplate(p)?.iter().map(String::as_str)),
        None => Boilerplate::default(),
    };
    let config = PreprocessConfig { stopwords, ..PreprocessConfig::default() };
    let tokenized: Vec<TokenizedDocument> =
        retained.documents.iter().map(|d| tokenize_document(d, &boilerplate, &config)).collect();
    let vocab = build_vocabulary(&tokenized, pre.min_df)?;
    let built = build_dtm(&tokenized, &vocab)?;
    let design = build_design(&retained.documents, built.dtm.doc_ids(), pre.year_scaling)?;
    let artifacts = CorpusArtifacts { dtm: built.dtm, vocab, design };
    artifacts.save(out)?;

    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(vec![]);
    w.write_record(["id", "reason"]).map_err(csv_err)?;
    for id in &retained.excluded {
        w.write_record([id.as_str(), "missing_abstract"]).map_err(csv_err)?;
    }
    for id in &built.dropped {
        w.write_record([id.as_str(), "no_tokens"]).map_err(csv_err)?;
    }
    write_file(&out.join(DROP_LOG_FILE), finish_csv(w)?)?;

    let summary = IngestSummary {
        records: n_records,
        missing_abstract: retained.excluded.len(),
        no_tokens: built.dropped.len(),
        documents: artifacts.dtm.n_docs(),
        terms: artifacts.vocab.len(),
    };
    info!("ingested {} of {} records, {} terms", summary.documents, summary.records, summary.terms);
    Ok(summary)
}

/// Fits at `model.k` and writes `model.json` plus the full report. A fit
/// that hits the EM cap still writes everything (flagged in the manifest)
/// and then returns [`AppError::Convergence`].
pub fn cmd_fit(cfg: &RunConfig, sweep_csv: Option<&Path>) -> AppResult<Report> {
    let corpus_dir = cfg.require_corpus()?;
    let out = cfg.require_out()?;
    if cfg.model.sweep.is_some() {
        return Err(AppError::input("fit takes --k, not --sweep"));
    }
    let k = cfg.model.k.ok_or_else(|| AppError::input("--k is required for fit"))?;
    let seed = cfg.model.require_seed()?;
    check_corpus_dir(corpus_dir)?;
    if let Some(p) = sweep_csv {
        require_file(p)?;
    }

    let corpus = CorpusArtifacts::load(corpus_dir)?;
    let sweep_text = sweep_csv.map(read_file).transpose()?;
    let result = fit(&corpus.dtm, &corpus.design.x, k, &cfg.model.fit_config(seed))?;
    let model_json = ModelFile::new(&result, &corpus, cfg.echo()).render();
    let raw_theta = result.theta();
    let theta = canonical_theta(&raw_theta);
    let theta_csv = render_theta(&raw_theta);
    let report = export_report(
        &ReportInputs {
            theta: &theta,
            theta_csv: &theta_csv,
            params: &result.params,
            corpus: &corpus,
            model_json: Some(&model_json),
            sweep_csv: sweep_text.as_deref(),
            comparison: None,
            converged: result.converged,
            analysis: &cfg.analysis,
            diagnostics: &cfg.diagnostics,
        },
        out,
    )?;
    if !result.converged {
        return Err(AppError::Convergence(format!(
            "EM did not converge within {} iterations; outputs in {} are flagged unconverged",
            cfg.model.max_em_iters,
            out.display()
        )));
    }
    Ok(report)
}

/// Fits every K of `model.sweep`, writes `sweep.csv` and per-K checkpoints.
/// Succeeds when at least one K fitted.
pub fn cmd_sweep(cfg: &RunConfig) -> AppResult<SweepOutcome> {
    let corpus_dir = cfg.require_corpus()?;
    let out = cfg.require_out()?;
    if cfg.model.k.is_some() {
        return Err(AppError::input("sweep takes --sweep, not --k"));
    }
    let spec = cfg.model.sweep.as_deref().ok_or_else(|| AppError::input("--sweep is required for sweep"))?;
    let ks = parse_sweep(spec)?;
    let seed = cfg.model.require_seed()?;
    check_corpus_dir(corpus_dir)?;

    let corpus = CorpusArtifacts::load(corpus_dir)?;
    let outcome = k_sweep(&corpus, &ks, &cfg.model, &cfg.diagnostics, seed, &out.join(CHECKPOINT_DIR))?;
    if outcome.result.entries.is_empty() {
        let detail: Vec<String> = outcome.failures.iter().map(|(k, e)| format!("K = {k}: {e}")).collect();
        return Err(AppError::input(format!("no K value fitted: {}", detail.join("; "))));
    }
    write_file(&out.join(SWEEP_FILE), render_sweep_csv(&outcome.result))?;
    Ok(outcome)
}

/// Options specific to `report`.
#[derive(Debug, Clone, Default)]
pub struct ReportArgs {
    /// Directory holding `model.json` and `theta.csv`.
    pub model_dir: PathBuf,
    /// Further fit directories to compare correlation densities against.
    pub compare: Vec<PathBuf>,
    pub sweep_csv: Option<PathBuf>,
}

struct StoredFit {
    model_json: String,
    model: ModelFile,
    theta_csv: String,
    theta: Matrix,
}

fn load_fit(dir: &Path, corpus: &CorpusArtifacts) -> AppResult<StoredFit> {
    let model_path = dir.join(MODEL_FILE);
    let model_json = read_file(&model_path)?;
    let model: ModelFile = serde_json::from_str(&model_json)
        .map_err(|e| AppError::input(format!("{}: {e}", model_path.display())))?;
    if model.vocab_hash != vocab_hash(corpus.vocab.terms()) {
        return Err(AppError::Mismatch(format!(
            "{}: vocabulary hash differs from the corpus artifacts",
            model_path.display()
        )));
    }
    let theta_path = dir.join(THETA_FILE);
    let theta_csv = read_file(&theta_path)?;
    let theta = crate::formats::parse_theta(&theta_csv)?;
    if theta.rows() != corpus.dtm.n_docs() || theta.cols() != model.k {
        return Err(AppError::Mismatch(format!(
            "{}: {} x {} but the model expects {} x {}",
            theta_path.display(),
            theta.rows(),
            theta.cols(),
            corpus.dtm.n_docs(),
            model.k
        )));
    }
    Ok(StoredFit { model_json, model, theta_csv, theta })
}

/// Recomputes the report from a stored fit without refitting.
pub fn cmd_report(cfg: &RunConfig, args: &ReportArgs) -> AppResult<Report> {
    let corpus_dir = cfg.require_corpus()?;
    let out = cfg.require_out()?;
    check_corpus_dir(corpus_dir)?;
    for dir in std::iter::once(&args.model_dir).chain(&args.compare) {
        require_file(&dir.join(MODEL_FILE))?;
        require_file(&dir.join(THETA_FILE))?;
    }
    if let Some(p) = &args.sweep_csv {
        require_file(p)?;
    }

    let corpus = CorpusArtifacts::load(corpus_dir)?;
    let main = load_fit(&args.model_dir, &corpus)?;
    let params = main.model.params()?;
    let comparison = if args.compare.is_empty() {
        None
    } else {
        let corr_of = |f: &StoredFit| -> AppResult<Matrix> {
            Ok(match cfg.analysis.correlation_source {
                CorrelationSource::Theta => topic_correlations(&f.theta)?,
                CorrelationSource::Sigma => sigma_correlations(&f.model.params()?.sigma)?,
            })
        };
        let mut fits = vec![(main.model.k, corr_of(&main)?)];
        for dir in &args.compare {
            let other = load_fit(dir, &corpus)?;
            fits.push((other.model.k, corr_of(&other)?));
        }
        Some(multi_k_correlation_comparison(
            &fits,
            cfg.analysis.pair_convention,
            cfg.analysis.correlation_bin_width,
        )?)
    };
    let sweep_text = args.sweep_csv.as_deref().map(read_file).transpose()?;
    export_report(
        &ReportInputs {
            theta: &main.theta,
            theta_csv: &main.theta_csv,
            params: &params,
            corpus: &corpus,
            model_json: Some(&main.model_json),
            sweep_csv: sweep_text.as_deref(),
            comparison: comparison.as_ref(),
            converged: main.model.converged,
            analysis: &cfg.analysis,
            diagnostics: &cfg.diagnostics,
        },
        out,
    )
}
