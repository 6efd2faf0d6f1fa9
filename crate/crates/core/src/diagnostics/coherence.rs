use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::DocumentTermMatrix;
use crate::linalg::Matrix;

/// Indices of the `m` largest entries of each beta row; ties go to the
/// smaller index (the lexicographically smaller term).
pub fn top_words(beta: &Matrix, m: usize) -> Vec<Vec<usize>> {
    (0..beta.rows()).map(|t| top_indices(beta.row(t), m)).collect()
}

pub(crate) fn top_indices(scores: &[f64], m: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    idx.truncate(m);
    idx
}

/// `C_k = sum_{m>=2} sum_{l<m} log((D(v_m, v_l) + 1) / D(v_l))` with
/// document frequencies `D(.)` and co-document frequencies `D(., .)`.
///
/// # Panics
/// If a top word occurs in no document.
pub fn semantic_coherence(top: &[Vec<usize>], dtm: &DocumentTermMatrix) -> Vec<f64> {
    // Map each distinct top word to a column of a small incidence table.
    let mut slot = vec![usize::MAX; dtm.n_terms()];
    let mut words = Vec::new();
    for &w in top.iter().flatten() {
        if slot[w] == usize::MAX {
            slot[w] = words.len();
            words.push(w);
        }
    }
    let n = words.len();
    let mut co = vec![0u64; n * n];
    let mut present = Vec::with_capacity(n);
    for row in dtm.rows() {
        present.clear();
        present.extend(row.terms.iter().map(|&t| slot[t as usize]).filter(|&s| s != usize::MAX));
        for &a in &present {
            for &b in &present {
                co[a * n + b] += 1;
            }
        }
    }
    top.iter()
        .map(|list| {
            let mut c = 0.0;
            for m in 1..list.len() {
                for l in 0..m {
                    let (sm, sl) = (slot[list[m]], slot[list[l]]);
                    let df = co[sl * n + sl];
                    assert!(df > 0, "top word {} occurs in no document", list[l]);
                    c += libm::log((co[sm * n + sl] as f64 + 1.0) / df as f64);
                }
            }
            c
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::SparseRow;
    use alloc::string::String;

    fn dtm(rows: &[&[u32]], v: usize) -> DocumentTermMatrix {
        let ids = (0..rows.len()).map(|i| alloc::format!("{i}")).collect::<Vec<String>>();
        let rows = rows.iter().map(|r| SparseRow::new(r.to_vec(), vec![1; r.len()])).collect();
        DocumentTermMatrix::new(v, ids, rows).unwrap()
    }

    #[test]
    fn hand_counted_pair() {
        // docs {[a,b],[a],[c]}
        let d = dtm(&[&[0, 1], &[0], &[2]], 3);
        assert_eq!(semantic_coherence(&[vec![0, 1]], &d), vec![0.0]);
        // reversed order conditions on b: log((1 + 1) / 1)
        assert_eq!(semantic_coherence(&[vec![1, 0]], &d), vec![libm::log(2.0)]);
    }

    #[test]
    fn non_positive_when_pairs_are_not_saturated() {
        // Every D(v_m, v_l) + 1 <= D(v_l).
        let d = dtm(&[&[0, 1, 2], &[0], &[1], &[2], &[0, 1]], 3);
        let c = semantic_coherence(&[vec![0, 1, 2]], &d);
        assert!(c[0] <= 0.0);
    }

    #[test]
    fn top_word_ties_prefer_lower_index() {
        let beta = Matrix::from_rows(&[vec![0.25, 0.25, 0.5]]).unwrap();
        assert_eq!(top_words(&beta, 3), vec![vec![2, 0, 1]]);
    }
}
