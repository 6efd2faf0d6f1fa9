use alloc::vec;
use alloc::vec::Vec;

use super::objective::{objective_local, value_local, LocalWords};
use super::{softmax_augmented, DocPosterior, ModelParams};
use crate::corpus::SparseRow;
use crate::linalg::{dot, spd_repair, Cholesky, Matrix};
use crate::Result;

pub const NEWTON_TOL: f64 = 1e-6;
pub const NEWTON_MAX_ITERS: usize = 250;
const MAX_HALVINGS: usize = 50;
const ARMIJO: f64 = 1e-4;

/// Quantities shared by every document's E-step under fixed parameters.
#[derive(Debug, Clone)]
pub struct EStepContext<'a> {
    pub beta: &'a Matrix,
    pub sigma: &'a Matrix,
    pub sigma_inv: Matrix,
    pub sigma_log_det: f64,
}

impl<'a> EStepContext<'a> {
    pub fn new(params: &'a ModelParams) -> Result<Self> {
        let ch = Cholesky::new(&params.sigma)?;
        Ok(Self {
            beta: &params.beta,
            sigma: &params.sigma,
            sigma_inv: ch.inverse(),
            sigma_log_det: ch.log_det(),
        })
    }

    fn k1(&self) -> usize {
        self.sigma.rows()
    }
}

/// E-step output for one document: its posterior and the token
/// responsibilities (nnz x K) at `theta`.
#[derive(Debug, Clone)]
pub(crate) struct DocEStep {
    pub posterior: DocPosterior,
    pub phi: Matrix,
}

/// Laplace posterior of one document under `params` with prior mean `mu`,
/// starting the mode search from `mu`.
pub fn e_step_doc(row: &SparseRow, params: &ModelParams, mu: &[f64]) -> Result<DocPosterior> {
    let ctx = EStepContext::new(params)?;
    Ok(e_step_with(row, &ctx, mu, mu).posterior)
}

/// Damped Newton ascent with backtracking, falling back to the gradient
/// direction when the negative Hessian cannot be factorized or the Newton
/// step finds no ascent. Never returns non-finite values: on failure the best
/// iterate so far is kept and `converged` is false.
pub(crate) fn e_step_with(row: &SparseRow, ctx: &EStepContext<'_>, mu: &[f64], start: &[f64]) -> DocEStep {
    let words = LocalWords::new(row, ctx.beta);
    let sigma_inv = &ctx.sigma_inv;
    let mut eta = start.to_vec();
    let mut current = match objective_local(&eta, &words, mu, sigma_inv) {
        Ok(o) => o,
        Err(_) => {
            eta = mu.to_vec();
            objective_local(&eta, &words, mu, sigma_inv)
                .expect("objective is finite at the prior mean when beta is floored")
        }
    };
    let mut converged = false;
    for _ in 0..NEWTON_MAX_ITERS {
        let g = &current.gradient;
        if libm::sqrt(dot(g, g)) < NEWTON_TOL {
            converged = true;
            break;
        }
        let mut neg_h = current.hessian.clone();
        neg_h.scale(-1.0);
        let newton = spd_repair(&neg_h).ok().map(|r| r.cholesky.solve(g));
        let mut accepted = None;
        let mut stalled = false;
        for dir in newton.into_iter().chain(core::iter::once(g.clone())) {
            let slope = dot(g, &dir);
            if !(slope > 0.0) {
                continue;
            }
            if slope <= 1e-14 * (1.0 + libm::fabs(current.value)) {
                stalled = true;
                break;
            }
            if let Some(next) = line_search(&eta, &dir, slope, current.value, &words, mu, sigma_inv) {
                accepted = Some(next);
                break;
            }
        }
        match accepted {
            Some(next) => match objective_local(&next, &words, mu, sigma_inv) {
                Ok(o) => {
                    eta = next;
                    current = o;
                }
                Err(_) => break,
            },
            None => {
                // Predicted gain below floating-point resolution.
                converged = stalled;
                break;
            }
        }
    }

    let theta = softmax_augmented(&eta);
    let mut neg_h = current.hessian;
    neg_h.scale(-1.0);
    let nu = match spd_repair(&neg_h) {
        Ok(r) => r.cholesky.inverse(),
        Err(_) => {
            converged = false;
            ctx.sigma.clone()
        }
    };
    let objective = super::elbo::bound_terms(current.value, &neg_h, &nu, ctx.sigma_log_det);
    let k = ctx.k1() + 1;
    let mut phi = vec![0.0; row.nnz() * k];
    words.phi_into(&theta, &mut phi);
    DocEStep {
        posterior: DocPosterior { lambda: eta, nu, theta, objective, converged },
        phi: Matrix::from_row_major(row.nnz(), k, phi).expect("nnz x K"),
    }
}

fn line_search(
    eta: &[f64],
    dir: &[f64],
    slope: f64,
    f0: f64,
    words: &LocalWords,
    mu: &[f64],
    sigma_inv: &Matrix,
) -> Option<Vec<f64>> {
    let mut step = 1.0;
    for _ in 0..MAX_HALVINGS {
        let cand: Vec<f64> = eta.iter().zip(dir).map(|(e, d)| e + step * d).collect();
        let v = value_local(&cand, words, mu, sigma_inv);
        if v.is_finite() && v >= f0 + ARMIJO * step * slope {
            return Some(cand);
        }
        step *= 0.5;
    }
    None
}

/// Token responsibilities `phi[u][k] = theta_k beta_kv / sum_j theta_j beta_jv`
/// for the document's distinct words `v_u`.
pub fn compute_phi(theta: &[f64], beta: &Matrix, row: &SparseRow) -> Matrix {
    let words = LocalWords::new(row, beta);
    let k = beta.rows();
    let mut phi = vec![0.0; row.nnz() * k];
    words.phi_into(theta, &mut phi);
    Matrix::from_row_major(row.nnz(), k, phi).expect("nnz x K")
}
