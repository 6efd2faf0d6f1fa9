//! Correlated topic model with logistic-normal prevalence.
//!
//! Each document has `eta_d ~ N(X_d gamma, Sigma)` over the first `K-1`
//! topics (topic `K` is pinned to zero), topic proportions
//! `theta_d = softmax([eta_d, 0])`, and words drawn from the mixture
//! `sum_k theta_dk beta_k`. Fitting is EM with a Laplace approximation of
//! each document posterior around its mode.

mod anchors;
mod elbo;
mod estep;
mod fit;
mod init;
mod mstep;
mod objective;

use alloc::vec::Vec;

pub use elbo::{doc_bound, elbo};
pub use estep::{compute_phi, e_step_doc, EStepContext, NEWTON_MAX_ITERS, NEWTON_TOL};
pub use fit::{fit, FitConfig, FitResult};
pub use init::{init_params, InitStrategy};
pub use mstep::{update_beta, update_gamma, update_sigma, BETA_FLOOR};
pub use objective::{doc_objective, doc_value, softmax_augmented, DocObjective};

use crate::linalg::{Cholesky, Matrix};
use crate::{Error, Result};

/// Topic-word distributions, prevalence coefficients and topic covariance.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModelParams {
    /// K x V, rows on the simplex.
    pub beta: Matrix,
    /// P x (K-1).
    pub gamma: Matrix,
    /// (K-1) x (K-1), symmetric positive definite.
    pub sigma: Matrix,
}

impl ModelParams {
    pub fn k(&self) -> usize {
        self.beta.rows()
    }

    pub fn n_terms(&self) -> usize {
        self.beta.cols()
    }

    /// Checks row-stochastic beta, dimensions, finiteness and that sigma
    /// admits a Cholesky factorization.
    pub fn validate(&self) -> Result<()> {
        let k = self.k();
        if k < 2 {
            return Err(Error::Config("K must be at least 2".into()));
        }
        if self.gamma.cols() != k - 1 || self.sigma.rows() != k - 1 || self.sigma.cols() != k - 1 {
            return Err(Error::Dimension("gamma/sigma must have K-1 columns".into()));
        }
        if !(self.beta.is_finite() && self.gamma.is_finite() && self.sigma.is_finite()) {
            return Err(Error::Validation("non-finite model parameter".into()));
        }
        for t in 0..k {
            let row = self.beta.row(t);
            let s: f64 = row.iter().sum();
            if row.iter().any(|&b| b < 0.0) || libm::fabs(s - 1.0) > 1e-10 {
                return Err(Error::Validation(alloc::format!("beta row {t} is not a distribution")));
            }
        }
        for i in 0..k - 1 {
            for j in 0..i {
                if self.sigma[(i, j)] != self.sigma[(j, i)] {
                    return Err(Error::Validation("sigma is not symmetric".into()));
                }
            }
        }
        Cholesky::new(&self.sigma).map(|_| ())
    }

    /// Prior means `X_d gamma` for every row of `x`.
    pub fn prior_means(&self, x: &Matrix) -> Result<Matrix> {
        x.matmul(&self.gamma)
    }
}

/// Laplace posterior of one document.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DocPosterior {
    /// Mode of eta, length K-1.
    pub lambda: Vec<f64>,
    /// Inverse negative Hessian at the mode.
    pub nu: Matrix,
    /// `softmax_augmented(lambda)`.
    pub theta: Vec<f64>,
    /// This document's contribution to the bound.
    pub objective: f64,
    /// Whether the Newton search met the gradient tolerance.
    pub converged: bool,
}
