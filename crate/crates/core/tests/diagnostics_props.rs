use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use topicscope_core::corpus::{DocumentTermMatrix, Vocabulary};
use topicscope_core::diagnostics::{
    exclusivity, label_topics, plot_transform, semantic_coherence, top_words,
};
use topicscope_core::linalg::Matrix;

fn random_dtm(r: &mut ChaCha8Rng, d: usize, v: usize) -> DocumentTermMatrix {
    // Every term occurs somewhere, as in a DTM built from a vocabulary.
    let mut triples: Vec<(usize, usize, u32)> = (0..v).map(|t| (t % d, t, 1)).collect();
    for doc in 0..d {
        triples.push((doc, r.random_range(0..v), 1));
        for term in 0..v {
            if r.random_bool(0.3) {
                triples.push((doc, term, r.random_range(1..4)));
            }
        }
    }
    DocumentTermMatrix::from_triples(d, v, (0..d).map(|i| format!("d{i}")).collect(), triples).unwrap()
}

fn random_beta(r: &mut ChaCha8Rng, k: usize, v: usize) -> Matrix {
    let mut beta = Matrix::zeros(k, v);
    for t in 0..k {
        let row = beta.row_mut(t);
        row.iter_mut().for_each(|b| *b = r.random_range(0.0..1.0f64).powi(3) + 1e-6);
        let s: f64 = row.iter().sum();
        row.iter_mut().for_each(|b| *b /= s);
    }
    beta
}

/// Scans documents for every word pair independently of the library's
/// incidence table.
fn coherence_oracle(top: &[usize], dtm: &DocumentTermMatrix) -> f64 {
    let docs: Vec<BTreeSet<usize>> =
        dtm.rows().iter().map(|r| r.terms.iter().map(|&t| t as usize).collect()).collect();
    let df = |w: usize| docs.iter().filter(|s| s.contains(&w)).count() as f64;
    let co = |a: usize, b: usize| docs.iter().filter(|s| s.contains(&a) && s.contains(&b)).count() as f64;
    let mut total = 0.0;
    for m in 1..top.len() {
        for l in 0..m {
            total += ((co(top[m], top[l]) + 1.0) / df(top[l])).ln();
        }
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn coherence_matches_pairwise_scan(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let d = r.random_range(2..=20);
        let v = r.random_range(5..=30);
        let k = r.random_range(2..=4);
        let dtm = random_dtm(&mut r, d, v);
        let beta = random_beta(&mut r, k, v);
        let m = r.random_range(2..=v.min(10));
        let top = top_words(&beta, m);
        let got = semantic_coherence(&top, &dtm);
        for t in 0..k {
            let want = coherence_oracle(&top[t], &dtm);
            prop_assert!((got[t] - want).abs() <= 1e-12 * want.abs().max(1.0));
        }
    }

    #[test]
    fn coherence_ignores_document_order(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let dtm = random_dtm(&mut r, 15, 20);
        let beta = random_beta(&mut r, 3, 20);
        let top = top_words(&beta, 6);
        let rev: Vec<usize> = (0..15).rev().collect();
        prop_assert_eq!(semantic_coherence(&top, &dtm), semantic_coherence(&top, &dtm.select_rows(&rev)));
    }

    #[test]
    fn plot_transform_is_affine(a in -500.0f64..0.0, b in -500.0f64..0.0, c in 5.0f64..12.0, d in 5.0f64..12.0) {
        let (sa, ea) = plot_transform(a, c);
        let (sb, eb) = plot_transform(b, d);
        prop_assert!(((sa - sb) - (a - b) / 10.0).abs() < 1e-9);
        prop_assert!(((ea - eb) - (c - d) * 5.0).abs() < 1e-9);
    }

    #[test]
    fn labels_are_reproducible(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let beta = random_beta(&mut r, 3, 12);
        let vocab = Vocabulary::from_sorted((0..12).map(|i| format!("w{i:02}")).collect(), vec![1; 12]).unwrap();
        prop_assert_eq!(label_topics(&beta, &vocab, 7, 0.5).unwrap(), label_topics(&beta, &vocab, 7, 0.5).unwrap());
    }
}

#[test]
fn plot_transform_anchor_grid() {
    for i in 0..100 {
        let se = -100.0 + i as f64;
        let ex = 8.0 + 0.05 * i as f64;
        assert_eq!(plot_transform(se, ex), (se / 10.0 + 20.0, (ex - 8.0) * 5.0));
    }
    assert_eq!(plot_transform(-100.0, 8.0), (10.0, 0.0));
}

/// Moving mass of a topic's top word away from the other topics never lowers
/// the topic's exclusivity and raises it once the word's rank changes.
#[test]
fn exclusivity_rises_with_sharper_top_word() {
    let base = Matrix::from_rows(&[
        vec![0.30, 0.05, 0.12, 0.08, 0.15, 0.10, 0.20],
        vec![0.10, 0.30, 0.05, 0.20, 0.10, 0.15, 0.10],
        vec![0.20, 0.10, 0.25, 0.05, 0.20, 0.10, 0.10],
    ])
    .unwrap();
    let top = 0;
    let mut prev = exclusivity(&base, 0.7, 3)[0];
    for step in 1..=4 {
        let scale = 1.0 - 0.2 * step as f64;
        let mut beta = base.clone();
        for t in 1..3 {
            beta[(t, top)] *= scale;
            let s: f64 = beta.row(t).iter().sum();
            beta.row_mut(t).iter_mut().for_each(|b| *b /= s);
        }
        let ex = exclusivity(&beta, 0.7, 3)[0];
        assert!(ex >= prev, "step {step}: {ex} < {prev}");
        prev = ex;
    }
    assert!(prev > exclusivity(&base, 0.7, 3)[0]);
}
