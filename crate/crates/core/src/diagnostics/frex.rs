use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use super::coherence::top_indices;
use crate::corpus::Vocabulary;
use crate::linalg::Matrix;
use crate::{Error, Result};

/// Empirical CDF of each value within `values`: `#{u : values[u] <= x} / n`.
fn ecdf(values: &[f64]) -> Vec<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = values.len() as f64;
    values.iter().map(|x| sorted.partition_point(|s| s.total_cmp(x).is_le()) as f64 / n).collect()
}

/// K x V FREX scores: the weighted harmonic mean of the within-topic CDF of
/// exclusivity `beta_kv / sum_j beta_jv` (weight `w`) and of frequency
/// `beta_kv` (weight `1 - w`).
pub fn frex_scores(beta: &Matrix, w: f64) -> Matrix {
    let (k, v) = (beta.rows(), beta.cols());
    let col_sums: Vec<f64> = (0..v).map(|u| (0..k).map(|t| beta[(t, u)]).sum()).collect();
    let mut out = Matrix::zeros(k, v);
    for t in 0..k {
        let row = beta.row(t);
        let excl: Vec<f64> = row.iter().zip(&col_sums).map(|(b, s)| b / s).collect();
        let f_ex = ecdf(&excl);
        let f_fr = ecdf(row);
        for u in 0..v {
            out[(t, u)] = 1.0 / (w / f_ex[u] + (1.0 - w) / f_fr[u]);
        }
    }
    out
}

/// Per-topic sum of FREX scores over the topic's `m` highest-FREX words.
pub fn exclusivity(beta: &Matrix, w: f64, m: usize) -> Vec<f64> {
    let frex = frex_scores(beta, w);
    (0..beta.rows())
        .map(|t| {
            let row = frex.row(t);
            top_indices(row, m).into_iter().map(|u| row[u]).sum()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopicLabels {
    /// Highest-probability terms.
    pub prob: Vec<String>,
    /// Highest-FREX terms.
    pub frex: Vec<String>,
}

/// The `m` top-beta and top-FREX terms of every topic. Ties go to the
/// lexicographically smaller term.
pub fn label_topics(beta: &Matrix, vocab: &Vocabulary, m: usize, w: f64) -> Result<Vec<TopicLabels>> {
    if m > beta.cols() {
        return Err(Error::Config(alloc::format!(
            "{m} label words requested from a vocabulary of {}",
            beta.cols()
        )));
    }
    if vocab.len() != beta.cols() {
        return Err(Error::Dimension("vocabulary does not match beta".into()));
    }
    let frex = frex_scores(beta, w);
    let names = |idx: Vec<usize>| idx.into_iter().map(|u| String::from(vocab.term(u))).collect();
    Ok((0..beta.rows())
        .map(|t| TopicLabels {
            prob: names(top_indices(beta.row(t), m)),
            frex: names(top_indices(frex.row(t), m)),
        })
        .collect())
}

/// Two lines per topic:
///
/// ```text
/// Topic 1 Highest Prob: polici, social, network
///         FREX: polici, network, social
/// ```
pub fn render_labels(labels: &[TopicLabels]) -> String {
    let mut out = String::new();
    for (t, l) in labels.iter().enumerate() {
        let head = alloc::format!("Topic {}", t + 1);
        let _ = writeln!(out, "{head} Highest Prob: {}", l.prob.join(", "));
        let _ = writeln!(out, "{:width$} FREX: {}", "", l.frex.join(", "), width = head.len());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn vocab(terms: &[&str]) -> Vocabulary {
        Vocabulary::from_sorted(terms.iter().map(|s| String::from(*s)).collect(), vec![1; terms.len()])
            .unwrap()
    }

    #[test]
    fn single_topic_uses_frequency_only() {
        let beta = Matrix::from_rows(&[vec![0.5, 0.3, 0.2]]).unwrap();
        let f = frex_scores(&beta, 0.7);
        // F_ex == 1 everywhere; F_freq = (1, 2/3, 1/3).
        for (u, ff) in [1.0, 2.0 / 3.0, 1.0 / 3.0].iter().enumerate() {
            let want = 1.0 / (0.7 + 0.3 / ff);
            assert!((f[(0, u)] - want).abs() < 1e-15);
        }
    }

    #[test]
    fn hand_computed_two_topic_fixture() {
        let beta = Matrix::from_rows(&[vec![0.6, 0.3, 0.1], vec![0.2, 0.2, 0.6]]).unwrap();
        // topic 0: excl = (0.75, 0.6, 1/7) -> F_ex = (1, 2/3, 1/3); F_fr = (1, 2/3, 1/3)
        // topic 1: excl = (0.25, 0.4, 6/7) -> F_ex = (1/3, 2/3, 1); F_fr = (2/3, 2/3, 1)
        let w = 0.7;
        let h = |fe: f64, ff: f64| 1.0 / (w / fe + (1.0 - w) / ff);
        let want = [
            [h(1.0, 1.0), h(2.0 / 3.0, 2.0 / 3.0), h(1.0 / 3.0, 1.0 / 3.0)],
            [h(1.0 / 3.0, 2.0 / 3.0), h(2.0 / 3.0, 2.0 / 3.0), h(1.0, 1.0)],
        ];
        let f = frex_scores(&beta, w);
        for t in 0..2 {
            for u in 0..3 {
                assert!((f[(t, u)] - want[t][u]).abs() < 1e-9);
            }
        }
        let ex = exclusivity(&beta, w, 2);
        assert!((ex[0] - (want[0][0] + want[0][1])).abs() < 1e-9);
        assert!((ex[1] - (want[1][2] + want[1][1])).abs() < 1e-9);
    }

    #[test]
    fn concentrated_topic_labels() {
        let beta = Matrix::from_rows(&[vec![0.97, 0.01, 0.01, 0.01], vec![0.1, 0.3, 0.3, 0.3]]).unwrap();
        let l = label_topics(&beta, &vocab(&["a", "b", "c", "d"]), 2, 0.5).unwrap();
        assert_eq!(l[0].prob[0], "a");
        assert_eq!(l[0].frex[0], "a");
        assert_eq!(l[1].prob, vec!["b", "c"]);
        assert!(label_topics(&beta, &vocab(&["a", "b", "c", "d"]), 5, 0.5).is_err());
    }

    #[test]
    fn rare_exclusive_word_outranks_common_shared_word() {
        // "common" is the most probable word of topic 0 but equally likely
        // in topic 1; "rare" has low probability but belongs to topic 0 only.
        let beta =
            Matrix::from_rows(&[vec![0.40, 0.05, 0.20, 0.20, 0.15], vec![0.40, 0.0001, 0.2999, 0.15, 0.15]])
                .unwrap();
        let v = vocab(&["common", "rare", "x", "y", "z"]);
        let l = label_topics(&beta, &v, 2, 0.5).unwrap();
        assert_eq!(l[0].prob, vec!["common", "x"]);
        assert_eq!(l[0].frex, vec!["y", "common"]);
        // Worked by hand: F_ex = (3/5, 1, 1/5, 4/5, 3/5), F_freq = (1, 1/5, 4/5, 4/5, 2/5).
        let f = frex_scores(&beta, 0.5);
        let want = [0.75, 1.0 / 3.0, 0.32, 0.8, 0.48];
        for u in 0..5 {
            assert!((f[(0, u)] - want[u]).abs() < 1e-12);
        }
        assert!(f[(0, 1)] > f[(0, 2)] && beta[(0, 1)] < beta[(0, 2)]);
    }

    #[test]
    fn label_layout() {
        let labels = vec![TopicLabels {
            prob: vec!["polici".into(), "social".into()],
            frex: vec!["network".into(), "polici".into()],
        }];
        assert_eq!(
            render_labels(&labels),
            "Topic 1 Highest Prob: polici, social\n        FREX: network, polici\n"
        );
    }
}
