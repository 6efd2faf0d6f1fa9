//! Report files for a fitted model and the manifest that hashes them.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use topicscope_core::analysis::{
    correlation_report, prevalence_stats, sigma_correlations, topic_correlations, CorrelationComparison,
    CorrelationReport, PrevalenceReport,
};
use topicscope_core::diagnostics::{diagnose, DiagnosticsConfig, TopicDiagnostics};
use topicscope_core::inference::ModelParams;
use topicscope_core::linalg::Matrix;

use crate::config::{AnalysisOptions, CorrelationSource};
use crate::formats::{create_dir, fmt_sig, sha256_hex, write_file, CorpusArtifacts, MODEL_FILE, THETA_FILE};
use crate::svg::density_svg;
use crate::sweep::SWEEP_FILE;
use crate::AppResult;

pub const MANIFEST_FILE: &str = "manifest.json";

/// Everything a report is computed from.
pub struct ReportInputs<'a> {
    /// Canonical theta (as stored in `theta.csv`).
    pub theta: &'a Matrix,
    /// Exact bytes of `theta.csv`.
    pub theta_csv: &'a str,
    pub params: &'a ModelParams,
    pub corpus: &'a CorpusArtifacts,
    pub model_json: Option<&'a str>,
    pub sweep_csv: Option<&'a str>,
    pub comparison: Option<&'a CorrelationComparison>,
    pub converged: bool,
    pub analysis: &'a AnalysisOptions,
    pub diagnostics: &'a DiagnosticsConfig,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub k: usize,
    /// False when the fit stopped at the EM iteration cap.
    pub converged: bool,
    /// File name to SHA-256 hex digest.
    pub files: BTreeMap<String, String>,
}

/// The computed analyses, returned alongside the manifest.
pub struct Report {
    pub manifest: Manifest,
    pub correlations: CorrelationReport,
    pub prevalence: PrevalenceReport,
    pub diagnostics: TopicDiagnostics,
}

fn square_csv(m: &Matrix) -> String {
    let names: Vec<String> = (1..=m.cols()).map(|k| format!("topic_{k}")).collect();
    let mut s = format!("topic,{}\n", names.join(","));
    for (i, name) in names.iter().enumerate() {
        let row: Vec<String> = m.row(i).iter().map(|&v| fmt_sig(v, 6)).collect();
        let _ = writeln!(s, "{name},{}", row.join(","));
    }
    s
}

fn stats_csv(r: &CorrelationReport) -> String {
    let s = &r.stats;
    format!(
        "min,mean,median,max,sd\n{},{},{},{},{}\n",
        fmt_sig(s.min, 6),
        fmt_sig(s.mean, 6),
        fmt_sig(s.median, 6),
        fmt_sig(s.max, 6),
        fmt_sig(s.std_dev, 6)
    )
}

/// Topics are 1-based; `r` has four decimals.
fn pairs_csv(r: &CorrelationReport) -> String {
    let mut s = String::from("rank,topic_i,topic_j,r\n");
    for (rank, p) in r.top_pairs.iter().enumerate() {
        let _ = writeln!(s, "{},{},{},{:.4}", rank + 1, p.i + 1, p.j + 1, p.r);
    }
    s
}

fn hist_csv(bins: &[topicscope_core::analysis::HistogramBin]) -> String {
    let mut s = String::from("bin_left,bin_right,density\n");
    for b in bins {
        let _ = writeln!(s, "{},{},{}", fmt_sig(b.left, 6), fmt_sig(b.right, 6), fmt_sig(b.density, 6));
    }
    s
}

fn prevalence_csv(p: &PrevalenceReport) -> String {
    format!(
        "n_values,mean,theoretical_mean,share_below_theoretical\n{},{},{},{}\n",
        p.n_values,
        fmt_sig(p.mean, 6),
        fmt_sig(p.theoretical_mean, 6),
        fmt_sig(p.share_below_theoretical, 6)
    )
}

fn labels_csv(d: &TopicDiagnostics) -> String {
    let mut s = String::from("topic,rank,prob_word,frex_word\n");
    for (t, (prob, frex)) in d.top_prob_words.iter().zip(&d.top_frex_words).enumerate() {
        for (rank, (p, f)) in prob.iter().zip(frex).enumerate() {
            let _ = writeln!(s, "{},{},{p},{f}", t + 1, rank + 1);
        }
    }
    s
}

fn labels_txt(d: &TopicDiagnostics) -> String {
    let labels: Vec<_> = d
        .top_prob_words
        .iter()
        .zip(&d.top_frex_words)
        .map(|(p, f)| topicscope_core::diagnostics::TopicLabels { prob: p.clone(), frex: f.clone() })
        .collect();
    topicscope_core::diagnostics::render_labels(&labels)
}

fn topic_csv(d: &TopicDiagnostics) -> String {
    let mut s = String::from("topic,coherence,exclusivity\n");
    for (t, (c, e)) in d.coherence.iter().zip(&d.exclusivity).enumerate() {
        let _ = writeln!(s, "{},{},{}", t + 1, fmt_sig(*c, 6), fmt_sig(*e, 6));
    }
    s
}

fn comparison_csvs(c: &CorrelationComparison) -> (String, String) {
    let mut means = String::from("k,mean_correlation\n");
    for (k, m) in c.ks.iter().zip(&c.means) {
        let _ = writeln!(means, "{k},{}", fmt_sig(*m, 6));
    }
    let cols: Vec<String> = c.ks.iter().enumerate().map(|(i, k)| format!("k{k}_{}", i + 1)).collect();
    let mut series = format!("bin_left,bin_right,{}\n", cols.join(","));
    for (b, (l, r)) in c.grid.iter().enumerate() {
        let vals: Vec<String> = c.series.iter().map(|s| fmt_sig(s[b], 6)).collect();
        let _ = writeln!(series, "{},{},{}", fmt_sig(*l, 6), fmt_sig(*r, 6), vals.join(","));
    }
    (means, series)
}

/// Analyses of one fit, written to `out_dir` with a manifest of hashes.
pub fn export_report(inputs: &ReportInputs<'_>, out_dir: &Path) -> AppResult<Report> {
    let a = inputs.analysis;
    let corr = match a.correlation_source {
        CorrelationSource::Theta => topic_correlations(inputs.theta)?,
        CorrelationSource::Sigma => sigma_correlations(&inputs.params.sigma)?,
    };
    let correlations = correlation_report(corr, a.pair_convention, a.top_pairs, a.correlation_bin_width)?;
    let prevalence = prevalence_stats(inputs.theta, a.prevalence_bin_width)?;
    let diagnostics =
        diagnose(&inputs.params.beta, &inputs.corpus.dtm, &inputs.corpus.vocab, inputs.diagnostics)?;

    let mut files: Vec<(&str, String)> = vec![
        (THETA_FILE, inputs.theta_csv.to_string()),
        ("correlations.csv", square_csv(&correlations.corr)),
        ("corr_stats.csv", stats_csv(&correlations)),
        ("top_pairs.csv", pairs_csv(&correlations)),
        ("corr_hist.csv", hist_csv(&correlations.histogram)),
        ("prevalence_hist.csv", hist_csv(&prevalence.histogram)),
        ("prevalence_stats.csv", prevalence_csv(&prevalence)),
        ("labels.txt", labels_txt(&diagnostics)),
        ("labels.csv", labels_csv(&diagnostics)),
        ("topic_diagnostics.csv", topic_csv(&diagnostics)),
    ];
    if let Some(m) = inputs.model_json {
        files.push((MODEL_FILE, m.to_string()));
    }
    if let Some(s) = inputs.sweep_csv {
        files.push((SWEEP_FILE, s.to_string()));
    }
    if let Some(c) = inputs.comparison {
        let (means, series) = comparison_csvs(c);
        files.push(("corr_compare_means.csv", means));
        files.push(("corr_compare_hist.csv", series));
    }
    if a.svg {
        files.push((
            "corr_density.svg",
            density_svg("Topic correlations", "r", &correlations.histogram, Some(correlations.stats.mean)),
        ));
        files.push((
            "prevalence_density.svg",
            density_svg(
                "Topic prevalence",
                "theta",
                &prevalence.histogram,
                Some(prevalence.theoretical_mean),
            ),
        ));
    }

    create_dir(out_dir)?;
    let mut hashes = BTreeMap::new();
    for (name, body) in &files {
        write_file(&out_dir.join(name), body)?;
        hashes.insert(name.to_string(), sha256_hex(body.as_bytes()));
    }
    let manifest = Manifest { k: inputs.params.k(), converged: inputs.converged, files: hashes };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    write_file(&out_dir.join(MANIFEST_FILE), text)?;
    Ok(Report { manifest, correlations, prevalence, diagnostics })
}

#[cfg(test)]
mod tests {
    use super::*;
    use topicscope_core::analysis::{CorrelationStats, PairConvention, TopicPair};

    #[test]
    fn table_layouts() {
        let corr = Matrix::identity(3);
        let r = CorrelationReport {
            k: 3,
            corr,
            convention: PairConvention::Unique,
            offdiag_values: vec![],
            stats: CorrelationStats {
                min: -0.1358,
                mean: -0.0142,
                median: -0.022,
                max: 0.3442,
                std_dev: 0.0457,
            },
            top_pairs: vec![TopicPair { i: 28, j: 30, r: 0.344_21 }],
            histogram: vec![],
        };
        assert_eq!(stats_csv(&r), "min,mean,median,max,sd\n-0.1358,-0.0142,-0.022,0.3442,0.0457\n");
        assert_eq!(pairs_csv(&r), "rank,topic_i,topic_j,r\n1,29,31,0.3442\n");
        assert!(square_csv(&r.corr).starts_with("topic,topic_1,topic_2,topic_3\ntopic_1,1,0,0\n"));
    }
}
