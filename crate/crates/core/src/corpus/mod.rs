//! From raw abstracts to model inputs: cleaning, tokenization, vocabulary,
//! document-term matrix and the prevalence design matrix.

mod clean;
mod design;
pub mod porter;
mod preprocess;
mod stopwords;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

pub use clean::{normalize_equilibrium, strip_boilerplate, Boilerplate, DEFAULT_BOILERPLATE};
pub use design::{build_design, PrevalenceDesign, YearScaling};
pub use preprocess::{preprocess, PreprocessConfig};
pub use stopwords::{StopwordList, PUBLISHING_STOPWORDS, SMART_STOPWORDS};

use crate::{Error, Result};

/// One bibliographic record.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RawDocument {
    pub id: String,
    pub abstract_text: String,
    pub journal: String,
    pub year: i32,
}

/// Records that survived ingestion plus the number dropped for having no
/// abstract.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Retained {
    pub documents: Vec<RawDocument>,
    pub excluded: Vec<String>,
}

impl Retained {
    pub fn exclusion_count(&self) -> usize {
        self.excluded.len()
    }
}

/// Drops records with a blank abstract and validates ids and years.
pub fn retain_with_abstracts(records: Vec<RawDocument>) -> Result<Retained> {
    let mut seen = BTreeSet::new();
    let mut out = Retained::default();
    for rec in records {
        if !seen.insert(rec.id.clone()) {
            return Err(Error::Validation(alloc::format!("duplicate id {:?}", rec.id)));
        }
        if rec.abstract_text.trim().is_empty() {
            out.excluded.push(rec.id);
            continue;
        }
        if rec.year <= 0 {
            return Err(Error::Validation(alloc::format!(
                "record {:?} has non-positive year {}",
                rec.id,
                rec.year
            )));
        }
        out.documents.push(rec);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizedDocument {
    pub id: String,
    pub tokens: Vec<String>,
}

/// Full cleaning pipeline for one abstract.
pub fn tokenize_document(
    doc: &RawDocument,
    boilerplate: &Boilerplate,
    config: &PreprocessConfig,
) -> TokenizedDocument {
    let text = normalize_equilibrium(&boilerplate.strip(&doc.abstract_text));
    TokenizedDocument { id: doc.id.clone(), tokens: preprocess(&text, config) }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    terms: Vec<String>,
    doc_freq: Vec<usize>,
}

impl Vocabulary {
    /// Builds a vocabulary from terms already sorted and unique.
    pub fn from_sorted(terms: Vec<String>, doc_freq: Vec<usize>) -> Result<Self> {
        if terms.len() != doc_freq.len() {
            return Err(Error::Dimension("terms and doc_freq lengths differ".into()));
        }
        if terms.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Validation("vocabulary terms must be sorted and unique".into()));
        }
        Ok(Self { terms, doc_freq })
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn doc_freq(&self) -> &[usize] {
        &self.doc_freq
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.terms.binary_search_by(|t| t.as_str().cmp(term)).ok()
    }

    pub fn term(&self, index: usize) -> &str {
        &self.terms[index]
    }
}

/// Terms present in at least `min_df` documents, sorted lexicographically.
pub fn build_vocabulary(docs: &[TokenizedDocument], min_df: usize) -> Result<Vocabulary> {
    if min_df == 0 {
        return Err(Error::Config("min_df must be at least 1".into()));
    }
    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    for doc in docs {
        let unique: BTreeSet<&str> = doc.tokens.iter().map(String::as_str).collect();
        for t in unique {
            *df.entry(t).or_default() += 1;
        }
    }
    let (terms, doc_freq): (Vec<String>, Vec<usize>) =
        df.into_iter().filter(|&(_, n)| n >= min_df).map(|(t, n)| (String::from(t), n)).unzip();
    if terms.is_empty() {
        return Err(Error::Config(alloc::format!("no term appears in at least {min_df} documents")));
    }
    Ok(Vocabulary { terms, doc_freq })
}

/// Word counts of one document, sorted by term index.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseRow {
    pub terms: Vec<u32>,
    pub counts: Vec<u32>,
}

impl SparseRow {
    pub fn new(terms: Vec<u32>, counts: Vec<u32>) -> Self {
        debug_assert_eq!(terms.len(), counts.len());
        Self { terms, counts }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| u64::from(c)).sum()
    }

    pub fn nnz(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.terms.iter().map(|&t| t as usize).zip(self.counts.iter().copied())
    }

    pub fn count_of(&self, term: usize) -> u32 {
        self.terms.binary_search(&(term as u32)).map_or(0, |i| self.counts[i])
    }
}

/// Sparse document-term matrix. Every row has at least one entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocumentTermMatrix {
    n_terms: usize,
    doc_ids: Vec<String>,
    rows: Vec<SparseRow>,
}

impl DocumentTermMatrix {
    pub fn new(n_terms: usize, doc_ids: Vec<String>, rows: Vec<SparseRow>) -> Result<Self> {
        if doc_ids.len() != rows.len() {
            return Err(Error::Dimension("one id per row required".into()));
        }
        for (d, row) in rows.iter().enumerate() {
            if row.terms.is_empty() {
                return Err(Error::Validation(alloc::format!("row {d} is empty")));
            }
            if row.terms.len() != row.counts.len()
                || row.terms.windows(2).any(|w| w[0] >= w[1])
                || row.terms.iter().any(|&t| t as usize >= n_terms)
                || row.counts.contains(&0)
            {
                return Err(Error::Validation(alloc::format!("row {d} is malformed")));
            }
        }
        Ok(Self { n_terms, doc_ids, rows })
    }

    /// Builds from (doc, term, count) triples; duplicate cells are summed.
    pub fn from_triples(
        n_docs: usize,
        n_terms: usize,
        doc_ids: Vec<String>,
        triples: impl IntoIterator<Item = (usize, usize, u32)>,
    ) -> Result<Self> {
        let mut cells: Vec<BTreeMap<u32, u32>> = (0..n_docs).map(|_| BTreeMap::new()).collect();
        for (d, v, c) in triples {
            if d >= n_docs || v >= n_terms {
                return Err(Error::Validation(alloc::format!("entry ({d}, {v}) out of range")));
            }
            *cells[d].entry(v as u32).or_default() += c;
        }
        let rows = cells
            .into_iter()
            .map(|m| {
                let (terms, counts) = m.into_iter().filter(|&(_, c)| c > 0).unzip();
                SparseRow { terms, counts }
            })
            .collect();
        Self::new(n_terms, doc_ids, rows)
    }

    pub fn n_docs(&self) -> usize {
        self.rows.len()
    }

    pub fn n_terms(&self) -> usize {
        self.n_terms
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(SparseRow::nnz).sum()
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn row(&self, d: usize) -> &SparseRow {
        &self.rows[d]
    }

    pub fn total_tokens(&self) -> u64 {
        self.rows.iter().map(SparseRow::total).sum()
    }

    /// `(doc, term, count)` in row-major order.
    pub fn triples(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.rows.iter().enumerate().flat_map(|(d, r)| r.iter().map(move |(v, c)| (d, v, c)))
    }

    /// Number of documents containing each term.
    pub fn doc_freq(&self) -> Vec<usize> {
        let mut df = alloc::vec![0usize; self.n_terms];
        for row in &self.rows {
            for &t in &row.terms {
                df[t as usize] += 1;
            }
        }
        df
    }

    /// Keeps the given rows in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Self {
        Self {
            n_terms: self.n_terms,
            doc_ids: indices.iter().map(|&i| self.doc_ids[i].clone()).collect(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }
}

/// The matrix and the ids of documents that had no in-vocabulary token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DtmBuild {
    pub dtm: DocumentTermMatrix,
    pub dropped: Vec<String>,
}

pub fn build_dtm(docs: &[TokenizedDocument], vocab: &Vocabulary) -> Result<DtmBuild> {
    let mut ids = Vec::new();
    let mut rows = Vec::new();
    let mut dropped = Vec::new();
    for doc in docs {
        let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
        for tok in &doc.tokens {
            if let Some(v) = vocab.index_of(tok) {
                *counts.entry(v as u32).or_default() += 1;
            }
        }
        if counts.is_empty() {
            dropped.push(doc.id.clone());
            continue;
        }
        let (terms, counts) = counts.into_iter().unzip();
        ids.push(doc.id.clone());
        rows.push(SparseRow { terms, counts });
    }
    Ok(DtmBuild { dtm: DocumentTermMatrix::new(vocab.len(), ids, rows)?, dropped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;

    fn docs(lists: &[&[&str]]) -> Vec<TokenizedDocument> {
        lists
            .iter()
            .enumerate()
            .map(|(i, toks)| TokenizedDocument {
                id: alloc::format!("d{i}"),
                tokens: toks.iter().map(|s| String::from(*s)).collect(),
            })
            .collect()
    }

    fn raw(id: &str, abs: &str) -> RawDocument {
        RawDocument { id: id.into(), abstract_text: abs.into(), journal: "AER".into(), year: 2000 }
    }

    #[test]
    fn blank_abstracts_are_excluded() {
        let recs = vec![raw("1", "Prices."), raw("2", "   "), raw("3", "Wages.")];
        let r = retain_with_abstracts(recs).unwrap();
        assert_eq!(r.documents.len(), 2);
        assert_eq!(r.exclusion_count(), 1);
        assert_eq!(r.excluded, vec!["2"]);
        assert_eq!(retain_with_abstracts(Vec::new()).unwrap().exclusion_count(), 0);
    }

    #[test]
    fn full_corpus_exclusion_count() {
        let recs: Vec<_> =
            (0..11_792).map(|i| raw(&alloc::format!("{i}"), if i < 3_143 { "" } else { "text" })).collect();
        let r = retain_with_abstracts(recs).unwrap();
        assert_eq!(r.documents.len(), 8_649);
        assert_eq!(r.exclusion_count(), 3_143);
    }

    #[test]
    fn duplicate_ids_rejected() {
        let err = retain_with_abstracts(vec![raw("1", "a"), raw("1", "b")]).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }

    #[test]
    fn vocabulary_thresholds() {
        let d = docs(&[&["a", "b"], &["a"], &["c"]]);
        let v = build_vocabulary(&d, 2).unwrap();
        assert_eq!(v.terms(), &["a"]);
        assert_eq!(v.doc_freq(), &[2]);
        let v = build_vocabulary(&d, 1).unwrap();
        assert_eq!(v.terms(), &["a", "b", "c"]);
        assert_eq!(v.doc_freq(), &[2, 1, 1]);
        let v = build_vocabulary(&docs(&[&["a"]]), 1).unwrap();
        assert_eq!((v.terms(), v.doc_freq()), (&[String::from("a")][..], &[1][..]));
        assert!(matches!(build_vocabulary(&d, 4), Err(Error::Config(_))));
        assert!(matches!(build_vocabulary(&d, 0), Err(Error::Config(_))));
    }

    #[test]
    fn dtm_drops_out_of_vocabulary_documents() {
        let d = docs(&[&["a", "a", "b"], &["c"]]);
        let vocab = Vocabulary::from_sorted(vec!["a".into(), "b".into()], vec![1, 1]).unwrap();
        let b = build_dtm(&d, &vocab).unwrap();
        assert_eq!(b.dtm.n_docs(), 1);
        assert_eq!(b.dropped, vec!["d1"]);
        assert_eq!(b.dtm.triples().collect::<Vec<_>>(), vec![(0, 0, 2), (0, 1, 1)]);
    }

    #[test]
    fn dtm_small_cases() {
        let vocab = Vocabulary::from_sorted(vec!["a".into()], vec![1]).unwrap();
        let b = build_dtm(&docs(&[&["a"]]), &vocab).unwrap();
        assert_eq!(b.dtm.triples().collect::<Vec<_>>(), vec![(0, 0, 1)]);
        let b = build_dtm(&docs(&[&["a"], &["a"]]), &vocab).unwrap();
        assert_eq!(b.dtm.triples().collect::<Vec<_>>(), vec![(0, 0, 1), (1, 0, 1)]);
    }

    #[test]
    fn triples_roundtrip() {
        let dtm = DocumentTermMatrix::from_triples(
            2,
            3,
            vec!["x".into(), "y".into()],
            vec![(0, 2, 1), (1, 0, 4), (0, 0, 2)],
        )
        .unwrap();
        assert_eq!(dtm.triples().collect::<Vec<_>>(), vec![(0, 0, 2), (0, 2, 1), (1, 0, 4)]);
        assert_eq!(dtm.total_tokens(), 7);
        assert!(DocumentTermMatrix::from_triples(1, 1, vec!["x".into()], vec![(0, 3, 1)]).is_err());
    }
}
