//! Anchor-word initialization of beta.
//!
//! Builds the expected word co-occurrence matrix, picks K anchor rows by
//! greedy farthest-point selection on the row-normalized matrix, then writes
//! every word's conditional co-occurrence profile as a convex combination of
//! the anchors. Dense in the vocabulary size, so meant for moderate V.

use alloc::vec;
use alloc::vec::Vec;

use super::mstep::normalize_rows_with_floor;
use crate::corpus::DocumentTermMatrix;
use crate::linalg::{dot, Matrix};
use crate::{Error, Result};

const RECOVER_ITERS: usize = 500;

pub(crate) fn anchor_beta(dtm: &DocumentTermMatrix, k: usize) -> Result<Matrix> {
    let v = dtm.n_terms();
    let mut q = vec![0.0; v * v];
    let mut used = 0usize;
    for row in dtm.rows() {
        let n = row.total() as f64;
        if n < 2.0 {
            continue;
        }
        used += 1;
        let norm = 1.0 / (n * (n - 1.0));
        for (a, ca) in row.iter() {
            let ca = f64::from(ca);
            for (b, cb) in row.iter() {
                let cb = f64::from(cb);
                let pair = if a == b { ca * (ca - 1.0) } else { ca * cb };
                q[a * v + b] += pair * norm;
            }
        }
    }
    if used == 0 {
        return Err(Error::Config("anchor initialization needs documents with two or more tokens".into()));
    }
    // p(w) marginals, then rows conditioned on the first word.
    let marginal: Vec<f64> = (0..v).map(|a| q[a * v..(a + 1) * v].iter().sum::<f64>()).collect();
    let mut cond = q;
    for a in 0..v {
        let s = marginal[a];
        if s > 0.0 {
            cond[a * v..(a + 1) * v].iter_mut().for_each(|x| *x /= s);
        }
    }
    let row = |a: usize| &cond[a * v..(a + 1) * v];

    let anchors = select_anchors(&cond, v, k, &marginal)?;
    let basis: Vec<&[f64]> = anchors.iter().map(|&a| row(a)).collect();
    let mut gram = Matrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            gram[(i, j)] = dot(basis[i], basis[j]);
        }
    }
    let lipschitz = 2.0 * gram.trace().max(1e-300);

    let mut beta = Matrix::zeros(k, v);
    for w in 0..v {
        if marginal[w] <= 0.0 {
            continue;
        }
        let target = row(w);
        let b: Vec<f64> = basis.iter().map(|a| dot(a, target)).collect();
        let mut c = vec![1.0 / k as f64; k];
        for _ in 0..RECOVER_ITERS {
            let gc = gram.mul_vec(&c);
            let step: Vec<f64> = (0..k).map(|t| c[t] - 2.0 * (gc[t] - b[t]) / lipschitz).collect();
            c = project_simplex(&step);
        }
        for t in 0..k {
            beta[(t, w)] = c[t] * marginal[w];
        }
    }
    for t in 0..k {
        let s: f64 = beta.row(t).iter().sum();
        if s > 0.0 {
            beta.row_mut(t).iter_mut().for_each(|x| *x /= s);
        }
    }
    normalize_rows_with_floor(&mut beta);
    Ok(beta)
}

/// Greedy Gram-Schmidt selection of the rows farthest from the span of
/// those already chosen. Only words with positive marginal are candidates.
fn select_anchors(cond: &[f64], v: usize, k: usize, marginal: &[f64]) -> Result<Vec<usize>> {
    let candidates: Vec<usize> = (0..v).filter(|&a| marginal[a] > 0.0).collect();
    if candidates.len() < k {
        return Err(Error::Config("fewer co-occurring words than topics".into()));
    }
    let mut residual: Vec<Vec<f64>> = candidates.iter().map(|&a| cond[a * v..(a + 1) * v].to_vec()).collect();
    let mut chosen = Vec::with_capacity(k);
    for _ in 0..k {
        let (best, norm2) = residual
            .iter()
            .enumerate()
            .filter(|(i, _)| !chosen.contains(&candidates[*i]))
            .map(|(i, r)| (i, dot(r, r)))
            .fold((usize::MAX, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best == usize::MAX || norm2 <= 0.0 {
            return Err(Error::Config("co-occurrence matrix has rank below K".into()));
        }
        chosen.push(candidates[best]);
        let inv = 1.0 / libm::sqrt(norm2);
        let axis: Vec<f64> = residual[best].iter().map(|x| x * inv).collect();
        for r in residual.iter_mut() {
            let proj = dot(r, &axis);
            r.iter_mut().zip(&axis).for_each(|(x, a)| *x -= proj * a);
        }
    }
    Ok(chosen)
}

/// Euclidean projection onto the probability simplex.
fn project_simplex(y: &[f64]) -> Vec<f64> {
    let mut u = y.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut tau = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        cum += ui;
        let t = (cum - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            tau = t;
        }
    }
    y.iter().map(|&x| (x - tau).max(0.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_lands_on_simplex() {
        let p = project_simplex(&[0.4, 2.0, -1.0]);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert_eq!(p, alloc::vec![0.0, 1.0, 0.0]);
        let p = project_simplex(&[0.2, 0.3, 0.5]);
        assert!((p[2] - 0.5).abs() < 1e-15);
    }
}
