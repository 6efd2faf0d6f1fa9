use super::objective::doc_objective;
use super::{DocPosterior, ModelParams};
use crate::corpus::{DocumentTermMatrix, SparseRow};
use crate::linalg::{spd_repair, Cholesky, Matrix};
use crate::{Error, Result};

/// `f(lambda) + tr(H nu)/2 + log|nu|/2 - log|Sigma|/2 + (K-1)/2`, with `H`
/// the Hessian of `f` at `lambda`: the expected log joint under the
/// Gaussian posterior, with the word likelihood expanded to second order
/// around the mode, plus the posterior entropy. `nu = (-H)^-1` maximizes it
/// for fixed `lambda`, where it reduces to the Laplace evidence
/// `f(lambda) + log|nu|/2 - log|Sigma|/2`.
pub(crate) fn bound_terms(value: f64, neg_hessian: &Matrix, nu: &Matrix, sigma_log_det: f64) -> f64 {
    let k1 = nu.rows();
    let mut trace = 0.0;
    for i in 0..k1 {
        for j in 0..k1 {
            trace += neg_hessian[(i, j)] * nu[(j, i)];
        }
    }
    let nu_log_det = match Cholesky::new(nu) {
        Ok(ch) => ch.log_det(),
        Err(_) => spd_repair(nu).map_or(f64::NEG_INFINITY, |r| r.cholesky.log_det()),
    };
    value - 0.5 * trace - 0.5 * sigma_log_det + 0.5 * nu_log_det + 0.5 * k1 as f64
}

fn recompute(
    row: &SparseRow,
    post: &DocPosterior,
    params: &ModelParams,
    mu: &[f64],
    sigma_inv: &Matrix,
    sigma_log_det: f64,
) -> Result<f64> {
    let obj = doc_objective(&post.lambda, row, &params.beta, mu, sigma_inv)?;
    let mut neg_h = obj.hessian;
    neg_h.scale(-1.0);
    Ok(bound_terms(obj.value, &neg_h, &post.nu, sigma_log_det))
}

/// Bound contribution of one document, recomputed from its posterior.
pub fn doc_bound(row: &SparseRow, posterior: &DocPosterior, params: &ModelParams, mu: &[f64]) -> Result<f64> {
    let ch = Cholesky::new(&params.sigma)?;
    recompute(row, posterior, params, mu, &ch.inverse(), ch.log_det())
}

/// Evidence lower bound summed over documents in row order.
pub fn elbo(
    params: &ModelParams,
    posteriors: &[DocPosterior],
    dtm: &DocumentTermMatrix,
    x: &Matrix,
) -> Result<f64> {
    if dtm.n_docs() == 0 {
        return Err(Error::Config("bound of an empty corpus is undefined".into()));
    }
    if posteriors.len() != dtm.n_docs() || x.rows() != dtm.n_docs() {
        return Err(Error::Dimension("posteriors, documents and design rows differ".into()));
    }
    let ch = Cholesky::new(&params.sigma)?;
    let sigma_inv = ch.inverse();
    let log_det = ch.log_det();
    let mu = params.prior_means(x)?;
    let mut total = 0.0;
    for (d, post) in posteriors.iter().enumerate() {
        total += recompute(dtm.row(d), post, params, mu.row(d), &sigma_inv, log_det)?;
    }
    Ok(total)
}
