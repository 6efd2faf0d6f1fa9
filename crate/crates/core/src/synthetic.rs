//! Corpora drawn from the generative model with known parameters.
//!
//! Used for recovery tests and the bundled demonstration corpus.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::corpus::{DocumentTermMatrix, SparseRow};
use crate::inference::softmax_augmented;
use crate::linalg::{Cholesky, Matrix};
use crate::{rng, Error, Result};

#[derive(Debug, Clone)]
pub struct SyntheticSpec {
    pub n_docs: usize,
    pub n_terms: usize,
    pub k: usize,
    /// Document lengths are uniform on `[mean/2, 3 mean/2]`.
    pub mean_doc_len: usize,
    /// Symmetric Dirichlet concentration of the true topics.
    pub beta_concentration: f64,
    /// P x (K-1) with P = 3 for the design `[1, group, trend]`.
    pub gamma: Matrix,
    pub sigma: Matrix,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub dtm: DocumentTermMatrix,
    /// Columns: intercept, binary group, standardized trend.
    pub x: Matrix,
    pub beta: Matrix,
    pub eta: Matrix,
    pub theta: Matrix,
}

/// Block-diagonal covariance: `n_blocks` equal blocks over `dim`
/// coordinates with variance `var` and within-block correlation `rho`.
pub fn block_sigma(dim: usize, n_blocks: usize, var: f64, rho: f64) -> Matrix {
    let size = dim.div_ceil(n_blocks.max(1));
    let mut s = Matrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            if i == j {
                s[(i, j)] = var;
            } else if i / size == j / size {
                s[(i, j)] = rho * var;
            }
        }
    }
    s
}

/// Which block of [`block_sigma`] a coordinate belongs to.
pub fn block_of(i: usize, dim: usize, n_blocks: usize) -> usize {
    i / dim.div_ceil(n_blocks.max(1))
}

const DOC_STREAM_OFFSET: u64 = 1 << 32;

pub fn generate(spec: &SyntheticSpec) -> Result<SyntheticCorpus> {
    let (d, v, k) = (spec.n_docs, spec.n_terms, spec.k);
    if k < 2 || d < 2 || v < k || spec.mean_doc_len < 2 {
        return Err(Error::Config("synthetic corpus needs K >= 2, D >= 2, V >= K, length >= 2".into()));
    }
    if spec.gamma.rows() != 3 || spec.gamma.cols() != k - 1 {
        return Err(Error::Dimension("gamma must be 3 x (K-1)".into()));
    }
    let chol = Cholesky::new(&spec.sigma)?;
    let l = chol.factor();

    let conc = Gamma::new(spec.beta_concentration, 1.0)
        .map_err(|_| Error::Config("concentration must be positive".into()))?;
    let mut beta = Matrix::zeros(k, v);
    for t in 0..k {
        let mut r = rng::stream(spec.seed, t as u64);
        let row = beta.row_mut(t);
        row.iter_mut().for_each(|b| *b = conc.sample(&mut r));
        let s: f64 = row.iter().sum();
        row.iter_mut().for_each(|b| *b /= s);
    }

    let mut x = Matrix::zeros(d, 3);
    let mut eta = Matrix::zeros(d, k - 1);
    let mut theta = Matrix::zeros(d, k);
    let mut rows = Vec::with_capacity(d);
    let mut ids: Vec<String> = Vec::with_capacity(d);
    for doc in 0..d {
        let mut r = rng::stream(spec.seed, DOC_STREAM_OFFSET + doc as u64);
        x[(doc, 0)] = 1.0;
        x[(doc, 1)] = f64::from(u8::from(r.random::<f64>() < 0.5));
        x[(doc, 2)] = 2.0 * (doc as f64 / (d - 1) as f64) - 1.0;
        let z: Vec<f64> = (0..k - 1).map(|_| StandardNormal.sample(&mut r)).collect();
        let lz = l.mul_vec(&z);
        for i in 0..k - 1 {
            let mu: f64 = (0..3).map(|p| x[(doc, p)] * spec.gamma[(p, i)]).sum();
            eta[(doc, i)] = mu + lz[i];
        }
        let th = softmax_augmented(eta.row(doc));
        theta.row_mut(doc).copy_from_slice(&th);

        let half = spec.mean_doc_len / 2;
        let len = half + (r.random::<f64>() * (2 * half + 1) as f64) as usize;
        let mut counts = alloc::vec![0u32; v];
        for _ in 0..len.max(1) {
            let topic = categorical(&th, r.random());
            let word = categorical(beta.row(topic), r.random());
            counts[word] += 1;
        }
        let (terms, cs): (Vec<u32>, Vec<u32>) =
            counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(w, &c)| (w as u32, c)).unzip();
        rows.push(SparseRow::new(terms, cs));
        ids.push(format!("doc{doc:05}"));
    }
    let dtm = DocumentTermMatrix::new(v, ids, rows)?;
    Ok(SyntheticCorpus { dtm, x, beta, eta, theta })
}

fn categorical(p: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (i, &pi) in p.iter().enumerate() {
        acc += pi;
        if u < acc {
            return i;
        }
    }
    p.len() - 1
}
