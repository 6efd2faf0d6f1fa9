//! On-disk artifacts: corpus matrices, model files and number rendering.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use topicscope_core::corpus::{DocumentTermMatrix, PrevalenceDesign, StopwordList, Vocabulary};
use topicscope_core::inference::{FitResult, ModelParams};
use topicscope_core::linalg::Matrix;

use crate::{AppError, AppResult};

pub const DTM_FILE: &str = "dtm.txt";
pub const DOC_IDS_FILE: &str = "doc_ids.txt";
pub const VOCAB_FILE: &str = "vocab.txt";
pub const DESIGN_FILE: &str = "design.csv";
pub const DROP_LOG_FILE: &str = "drop_log.csv";
pub const MODEL_FILE: &str = "model.json";
pub const THETA_FILE: &str = "theta.csv";

/// `%g`-style rendering with `sig` significant digits: fixed notation for
/// decimal exponents in `[-4, sig)`, scientific otherwise, trailing zeros
/// removed.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "NaN".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let m = strip_zeros(mantissa);
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> AppResult<()> {
    fs::write(path, contents).map_err(|e| AppError::io(path, e))
}

pub fn read_file(path: &Path) -> AppResult<String> {
    fs::read_to_string(path).map_err(|e| AppError::io(path, e))
}

pub fn create_dir(path: &Path) -> AppResult<()> {
    fs::create_dir_all(path).map_err(|e| AppError::io(path, e))
}

/// Lines with `#` comments and surrounding whitespace removed; blank lines skipped.
fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(|l| l.split_once('#').map_or(l, |(head, _)| head).trim()).filter(|l| !l.is_empty())
}

pub fn read_stopwords(path: &Path) -> AppResult<StopwordList> {
    Ok(StopwordList::parse(&read_file(path)?))
}

/// One phrase per line; `#` starts a comment.
pub fn read_boilerplate(path: &Path) -> AppResult<Vec<String>> {
    Ok(content_lines(&read_file(path)?).map(String::from).collect())
}

pub fn render_dtm(dtm: &DocumentTermMatrix) -> String {
    let mut s = format!("{} {} {}\n", dtm.n_docs(), dtm.n_terms(), dtm.nnz());
    for (d, v, c) in dtm.triples() {
        let _ = writeln!(s, "{d} {v} {c}");
    }
    s
}

pub fn parse_dtm(text: &str, doc_ids: Vec<String>) -> AppResult<DocumentTermMatrix> {
    let bad = |line: usize, what: &str| AppError::input(format!("{DTM_FILE} line {line}: {what}"));
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| bad(1, "missing header"))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| bad(1, "header must be \"D V NNZ\"")))
        .collect::<AppResult<_>>()?;
    let [d, v, nnz] = dims[..] else { return Err(bad(1, "header must be \"D V NNZ\"")) };
    if doc_ids.len() != d {
        return Err(AppError::Mismatch(format!(
            "{DTM_FILE} declares {d} documents but {DOC_IDS_FILE} lists {}",
            doc_ids.len()
        )));
    }
    let mut triples = Vec::with_capacity(nnz);
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        let entry = match f[..] {
            [a, b, c] => (a.parse(), b.parse(), c.parse()),
            _ => return Err(bad(i + 1, "expected \"d v count\"")),
        };
        match entry {
            (Ok(a), Ok(b), Ok(c)) => triples.push((a, b, c)),
            _ => return Err(bad(i + 1, "expected \"d v count\"")),
        }
    }
    if triples.len() != nnz {
        return Err(bad(1, &format!("header declares {nnz} entries, found {}", triples.len())));
    }
    Ok(DocumentTermMatrix::from_triples(d, v, doc_ids, triples)?)
}

pub fn render_lines<S: AsRef<str>>(items: &[S]) -> String {
    let mut s = String::new();
    for item in items {
        s.push_str(item.as_ref());
        s.push('\n');
    }
    s
}

/// Hash of the vocabulary as stored in `vocab.txt`.
pub fn vocab_hash(terms: &[String]) -> String {
    sha256_hex(render_lines(terms).as_bytes())
}

/// Design columns at full round-trip precision, one row per document.
pub fn render_design(design: &PrevalenceDesign, doc_ids: &[String]) -> AppResult<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(vec![]);
    let mut header = vec!["doc_id".to_string()];
    header.extend(design.column_names.iter().cloned());
    w.write_record(&header).map_err(csv_err)?;
    for (d, id) in doc_ids.iter().enumerate() {
        let mut rec = vec![id.clone()];
        rec.extend(design.x.row(d).iter().map(|v| format!("{v}")));
        w.write_record(&rec).map_err(csv_err)?;
    }
    finish_csv(w)
}

pub fn parse_design(text: &str) -> AppResult<(PrevalenceDesign, Vec<String>)> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| AppError::input(format!("{DESIGN_FILE}: {e}")))?.clone();
    if header.get(0) != Some("doc_id") || header.len() < 2 {
        return Err(AppError::input(format!("{DESIGN_FILE}: header must start with doc_id")));
    }
    let names: Vec<String> = header.iter().skip(1).map(String::from).collect();
    let mut ids = Vec::new();
    let mut data = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| AppError::input(format!("{DESIGN_FILE}: {e}")))?;
        ids.push(rec[0].to_string());
        for v in rec.iter().skip(1) {
            data.push(
                v.parse::<f64>()
                    .map_err(|_| AppError::input(format!("{DESIGN_FILE}: {v:?} is not a number")))?,
            );
        }
    }
    let x = Matrix::from_row_major(ids.len(), names.len(), data)?;
    Ok((PrevalenceDesign::new(x, names)?, ids))
}

/// The typed corpus produced by `ingest`.
#[derive(Debug, Clone)]
pub struct CorpusArtifacts {
    pub dtm: DocumentTermMatrix,
    pub vocab: Vocabulary,
    pub design: PrevalenceDesign,
}

impl CorpusArtifacts {
    pub fn save(&self, dir: &Path) -> AppResult<()> {
        create_dir(dir)?;
        write_file(&dir.join(DTM_FILE), render_dtm(&self.dtm))?;
        write_file(&dir.join(DOC_IDS_FILE), render_lines(self.dtm.doc_ids()))?;
        write_file(&dir.join(VOCAB_FILE), render_lines(self.vocab.terms()))?;
        write_file(&dir.join(DESIGN_FILE), render_design(&self.design, self.dtm.doc_ids())?)
    }

    pub fn load(dir: &Path) -> AppResult<Self> {
        let ids: Vec<String> = read_file(&dir.join(DOC_IDS_FILE))?.lines().map(String::from).collect();
        let dtm = parse_dtm(&read_file(&dir.join(DTM_FILE))?, ids)?;
        let terms: Vec<String> = read_file(&dir.join(VOCAB_FILE))?.lines().map(String::from).collect();
        if terms.len() != dtm.n_terms() {
            return Err(AppError::Mismatch(format!(
                "{VOCAB_FILE} has {} terms but {DTM_FILE} has {} columns",
                terms.len(),
                dtm.n_terms()
            )));
        }
        let vocab = Vocabulary::from_sorted(terms, dtm.doc_freq())?;
        let (design, design_ids) = parse_design(&read_file(&dir.join(DESIGN_FILE))?)?;
        if design_ids != dtm.doc_ids() {
            return Err(AppError::Mismatch(format!("{DESIGN_FILE} rows do not match {DOC_IDS_FILE}")));
        }
        Ok(Self { dtm, vocab, design })
    }
}

pub fn render_theta(theta: &Matrix) -> String {
    let mut s = (1..=theta.cols()).map(|k| format!("topic_{k}")).collect::<Vec<_>>().join(",");
    s.push('\n');
    for d in 0..theta.rows() {
        let row: Vec<String> = theta.row(d).iter().map(|&v| fmt_sig(v, 6)).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

/// Reads `theta.csv` and rescales each row to sum to one, so analyses of a
/// stored theta are exact simplex data regardless of the rounding on disk.
pub fn parse_theta(text: &str) -> AppResult<Matrix> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| AppError::input(format!("{THETA_FILE}: empty")))?;
    let k = header.split(',').count();
    let mut data = Vec::new();
    let mut rows = 0;
    for (i, line) in lines.enumerate() {
        let vals: Vec<f64> = line
            .split(',')
            .map(|v| v.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| AppError::input(format!("{THETA_FILE} line {}: not numeric", i + 2)))?;
        if vals.len() != k {
            return Err(AppError::input(format!("{THETA_FILE} line {}: expected {k} values", i + 2)));
        }
        let s: f64 = vals.iter().sum();
        data.extend(vals.iter().map(|v| v / s));
        rows += 1;
    }
    Ok(Matrix::from_row_major(rows, k, data)?)
}

/// Canonical theta used by every report: the values as `theta.csv` stores them.
pub fn canonical_theta(theta: &Matrix) -> Matrix {
    parse_theta(&render_theta(theta)).expect("rendered theta parses")
}

/// Serialized fitted model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelFile {
    pub k: usize,
    pub vocab_hash: String,
    pub n_docs: usize,
    pub n_terms: usize,
    /// K rows of V probabilities.
    pub beta: Vec<Vec<f64>>,
    /// P rows of K-1 coefficients, in design column order.
    pub gamma: Vec<Vec<f64>>,
    pub sigma: Vec<Vec<f64>>,
    pub covariates: Vec<String>,
    pub config_echo: serde_json::Value,
    pub elbo_trace: Vec<f64>,
    pub converged: bool,
}

fn rows_of(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

impl ModelFile {
    pub fn new(fit: &FitResult, corpus: &CorpusArtifacts, config_echo: serde_json::Value) -> Self {
        Self {
            k: fit.k(),
            vocab_hash: vocab_hash(corpus.vocab.terms()),
            n_docs: corpus.dtm.n_docs(),
            n_terms: corpus.dtm.n_terms(),
            beta: rows_of(&fit.params.beta),
            gamma: rows_of(&fit.params.gamma),
            sigma: rows_of(&fit.params.sigma),
            covariates: corpus.design.column_names.clone(),
            config_echo,
            elbo_trace: fit.elbo_trace.clone(),
            converged: fit.converged,
        }
    }

    pub fn params(&self) -> AppResult<ModelParams> {
        let params = ModelParams {
            beta: Matrix::from_rows(&self.beta)?,
            gamma: Matrix::from_rows(&self.gamma)?,
            sigma: Matrix::from_rows(&self.sigma)?,
        };
        if params.k() != self.k {
            return Err(AppError::Mismatch(format!("{MODEL_FILE}: k does not match beta")));
        }
        Ok(params)
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model serializes");
        s.push('\n');
        s
    }

    pub fn load(path: &Path) -> AppResult<Self> {
        serde_json::from_str(&read_file(path)?)
            .map_err(|e| AppError::input(format!("{}: {e}", path.display())))
    }
}

pub fn csv_err(e: csv::Error) -> AppError {
    AppError::input(format!("csv: {e}"))
}

pub fn finish_csv(w: csv::Writer<Vec<u8>>) -> AppResult<String> {
    let bytes = w.into_inner().map_err(|e| AppError::input(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits_like_printf_g() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (0.015625, "0.015625"),
            (-0.0142, "-0.0142"),
            (123456.7, "123457"),
            (1234567.0, "1.23457e+06"),
            (0.00001234, "1.234e-05"),
            (0.0001234, "0.0001234"),
            (1.0 / 3.0, "0.333333"),
            (2.5e-10, "2.5e-10"),
            (-100.0, "-100"),
            (0.9999996, "1"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt_sig(x, 6), want, "{x}");
        }
    }

    #[test]
    fn dtm_round_trip() {
        let dtm = DocumentTermMatrix::from_triples(
            2,
            3,
            vec!["a".into(), "b".into()],
            vec![(0, 0, 2), (0, 2, 1), (1, 1, 4)],
        )
        .unwrap();
        let text = render_dtm(&dtm);
        assert_eq!(text, "2 3 3\n0 0 2\n0 2 1\n1 1 4\n");
        assert_eq!(parse_dtm(&text, vec!["a".into(), "b".into()]).unwrap(), dtm);
        assert!(parse_dtm("2 3 4\n0 0 2\n", vec!["a".into(), "b".into()]).is_err());
    }

    #[test]
    fn theta_round_trip_is_on_the_simplex() {
        let theta = Matrix::from_rows(&[vec![0.1234567, 0.8765433], vec![1.0 / 3.0, 2.0 / 3.0]]).unwrap();
        let text = render_theta(&theta);
        assert!(text.starts_with("topic_1,topic_2\n0.123457,0.876543\n"));
        let back = parse_theta(&text).unwrap();
        for d in 0..2 {
            assert!((back.row(d).iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn comments_and_blank_lines_skipped() {
        let lines: Vec<&str> = content_lines("# list\nfoo\n\n bar # trailing\n").collect();
        assert_eq!(lines, vec!["foo", "bar"]);
    }
}
