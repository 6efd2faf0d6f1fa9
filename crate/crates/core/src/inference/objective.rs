use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::SparseRow;
use crate::linalg::{dot, Matrix};
use crate::{Error, Result};

/// Maps `K-1` free coordinates to the K-simplex with the last topic pinned
/// at zero. The maximum is subtracted before exponentiating.
pub fn softmax_augmented(eta: &[f64]) -> Vec<f64> {
    let m = eta.iter().copied().fold(0.0_f64, f64::max);
    let mut theta: Vec<f64> = eta.iter().map(|&e| libm::exp(e - m)).collect();
    theta.push(libm::exp(-m));
    let z: f64 = theta.iter().sum();
    theta.iter_mut().for_each(|t| *t /= z);
    theta
}

/// Value, gradient and Hessian of the per-document objective
/// `f(eta) = -1/2 (eta-mu)' Sigma^-1 (eta-mu) + sum_v c_v log sum_k theta_k beta_kv`.
#[derive(Debug, Clone, PartialEq)]
pub struct DocObjective {
    pub value: f64,
    pub gradient: Vec<f64>,
    pub hessian: Matrix,
}

/// The document's words with their beta columns gathered once.
pub(crate) struct LocalWords {
    counts: Vec<f64>,
    total: f64,
    /// nnz x K, row u holds beta[., v_u].
    beta: Vec<f64>,
    k: usize,
}

impl LocalWords {
    pub(crate) fn new(row: &SparseRow, beta: &Matrix) -> Self {
        let k = beta.rows();
        let mut cols = Vec::with_capacity(row.nnz() * k);
        for (v, _) in row.iter() {
            cols.extend((0..k).map(|t| beta[(t, v)]));
        }
        let counts: Vec<f64> = row.counts.iter().map(|&c| f64::from(c)).collect();
        let total = counts.iter().sum();
        Self { counts, total, beta: cols, k }
    }

    fn word(&self, u: usize) -> &[f64] {
        &self.beta[u * self.k..(u + 1) * self.k]
    }

    pub(crate) fn log_likelihood(&self, theta: &[f64]) -> f64 {
        self.counts.iter().enumerate().map(|(u, &c)| c * libm::log(dot(theta, self.word(u)))).sum()
    }

    /// Responsibilities `phi[u][k]`, written into `out` (nnz x K).
    pub(crate) fn phi_into(&self, theta: &[f64], out: &mut [f64]) {
        let k = self.k;
        for u in 0..self.counts.len() {
            let b = self.word(u);
            let row = &mut out[u * k..(u + 1) * k];
            let mut s = 0.0;
            for t in 0..k {
                row[t] = theta[t] * b[t];
                s += row[t];
            }
            row.iter_mut().for_each(|p| *p /= s);
        }
    }
}

fn prior_term(eta: &[f64], mu: &[f64], sigma_inv: &Matrix) -> (f64, Vec<f64>) {
    let diff: Vec<f64> = eta.iter().zip(mu).map(|(e, m)| e - m).collect();
    let sd = sigma_inv.mul_vec(&diff);
    (-0.5 * dot(&diff, &sd), sd)
}

fn non_finite(eta: &[f64]) -> Error {
    Error::NonFinite { eta: eta.to_vec() }
}

pub(crate) fn value_local(eta: &[f64], words: &LocalWords, mu: &[f64], sigma_inv: &Matrix) -> f64 {
    let theta = softmax_augmented(eta);
    prior_term(eta, mu, sigma_inv).0 + words.log_likelihood(&theta)
}

pub(crate) fn objective_local(
    eta: &[f64],
    words: &LocalWords,
    mu: &[f64],
    sigma_inv: &Matrix,
) -> Result<DocObjective> {
    let k1 = eta.len();
    let k = k1 + 1;
    let theta = softmax_augmented(eta);
    let (prior, sd) = prior_term(eta, mu, sigma_inv);
    let mut phi = vec![0.0; words.counts.len() * k];
    words.phi_into(&theta, &mut phi);

    let value = prior + words.log_likelihood(&theta);
    let mut gradient: Vec<f64> = (0..k1).map(|i| -sd[i] - words.total * theta[i]).collect();
    let mut hessian = Matrix::zeros(k1, k1);
    for i in 0..k1 {
        for j in 0..k1 {
            let dense = if i == j { theta[i] } else { 0.0 };
            hessian[(i, j)] = -sigma_inv[(i, j)] - words.total * (dense - theta[i] * theta[j]);
        }
    }
    for (u, &c) in words.counts.iter().enumerate() {
        let p = &phi[u * k..u * k + k1];
        for i in 0..k1 {
            gradient[i] += c * p[i];
            let cpi = c * p[i];
            hessian[(i, i)] += cpi;
            for j in 0..k1 {
                hessian[(i, j)] -= cpi * p[j];
            }
        }
    }
    hessian.symmetrize();
    if !value.is_finite() || gradient.iter().any(|g| !g.is_finite()) || !hessian.is_finite() {
        return Err(non_finite(eta));
    }
    Ok(DocObjective { value, gradient, hessian })
}

/// Analytic value, gradient and Hessian of the document objective.
pub fn doc_objective(
    eta: &[f64],
    row: &SparseRow,
    beta: &Matrix,
    mu: &[f64],
    sigma_inv: &Matrix,
) -> Result<DocObjective> {
    check_dims(eta, beta, mu, sigma_inv)?;
    objective_local(eta, &LocalWords::new(row, beta), mu, sigma_inv)
}

/// Objective value only.
pub fn doc_value(eta: &[f64], row: &SparseRow, beta: &Matrix, mu: &[f64], sigma_inv: &Matrix) -> Result<f64> {
    check_dims(eta, beta, mu, sigma_inv)?;
    let v = value_local(eta, &LocalWords::new(row, beta), mu, sigma_inv);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(non_finite(eta))
    }
}

fn check_dims(eta: &[f64], beta: &Matrix, mu: &[f64], sigma_inv: &Matrix) -> Result<()> {
    let k1 = eta.len();
    if beta.rows() != k1 + 1 || mu.len() != k1 || sigma_inv.rows() != k1 || sigma_inv.cols() != k1 {
        return Err(Error::Dimension(alloc::format!(
            "eta has {k1} coordinates but beta has {} topics",
            beta.rows()
        )));
    }
    Ok(())
}
