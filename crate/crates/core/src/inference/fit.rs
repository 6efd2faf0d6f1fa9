use alloc::vec;
use alloc::vec::Vec;

use super::estep::{e_step_with, DocEStep, EStepContext};
use super::{init_params, update_beta, update_gamma, update_sigma, DocPosterior, InitStrategy, ModelParams};
use crate::corpus::DocumentTermMatrix;
use crate::linalg::Matrix;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct FitConfig {
    pub seed: u64,
    pub max_em_iters: usize,
    pub rel_tol: f64,
    pub ridge: f64,
    pub init: InitStrategy,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self { seed: 0, max_em_iters: 500, rel_tol: 1e-5, ridge: 1e-6, init: InitStrategy::default() }
    }
}

#[derive(Debug, Clone)]
pub struct FitResult {
    pub params: ModelParams,
    /// One per document, in the input row order.
    pub posteriors: Vec<DocPosterior>,
    /// Bound after each E-step.
    pub elbo_trace: Vec<f64>,
    pub config: FitConfig,
    /// Relative bound change fell below `rel_tol` before `max_em_iters`.
    pub converged: bool,
}

impl FitResult {
    pub fn k(&self) -> usize {
        self.params.k()
    }

    /// D x K topic proportions.
    pub fn theta(&self) -> Matrix {
        let k = self.k();
        let mut data = Vec::with_capacity(self.posteriors.len() * k);
        for p in &self.posteriors {
            data.extend_from_slice(&p.theta);
        }
        Matrix::from_row_major(self.posteriors.len(), k, data).expect("K entries per posterior")
    }
}

/// Fits the model by EM. Documents are processed in the order of their ids
/// (ties by row), so the fit does not depend on input row order; within an
/// iteration the E-step may run in parallel and results are reduced in that
/// fixed order.
pub fn fit(dtm: &DocumentTermMatrix, x: &Matrix, k: usize, config: &FitConfig) -> Result<FitResult> {
    let n = dtm.n_docs();
    if k < 2 {
        return Err(Error::Config("K must be at least 2".into()));
    }
    if k > n || k > dtm.n_terms() {
        return Err(Error::Config(alloc::format!(
            "K = {k} exceeds the number of documents ({n}) or terms ({})",
            dtm.n_terms()
        )));
    }
    if x.rows() != n {
        return Err(Error::Dimension("design and document-term matrix rows differ".into()));
    }
    if n <= x.cols() {
        return Err(Error::Config("need more documents than covariates".into()));
    }
    if config.max_em_iters == 0 {
        return Err(Error::Config("max_em_iters must be positive".into()));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| dtm.doc_ids()[a].cmp(&dtm.doc_ids()[b]).then(a.cmp(&b)));
    let dtm_c = dtm.select_rows(&order);
    let x_c = select_rows(x, &order);

    let mut params = init_params(&dtm_c, k, x.cols(), config.seed, config.init)?;
    let mut warm = Matrix::zeros(n, k - 1);
    let mut trace = Vec::new();
    let mut converged = false;
    let mut steps: Vec<DocEStep>;
    loop {
        steps = e_step_all(&dtm_c, &x_c, &params, &warm)?;
        let bound: f64 = steps.iter().map(|s| s.posterior.objective).sum();
        if !bound.is_finite() {
            return Err(Error::NonFinite { eta: Vec::new() });
        }
        let prev = trace.last().copied();
        trace.push(bound);
        if let Some(prev) = prev {
            if libm::fabs(bound - prev) / libm::fabs(prev) < config.rel_tol {
                converged = true;
                break;
            }
        }
        if trace.len() >= config.max_em_iters {
            break;
        }
        for (d, s) in steps.iter().enumerate() {
            warm.row_mut(d).copy_from_slice(&s.posterior.lambda);
        }
        let phi: Vec<Matrix> = steps.iter().map(|s| s.phi.clone()).collect();
        let beta = update_beta(&phi, &dtm_c)?;
        let gamma = update_gamma(&warm, &x_c, config.ridge)?;
        let posts: Vec<DocPosterior> = steps.iter().map(|s| s.posterior.clone()).collect();
        let sigma = update_sigma(&posts, &x_c, &gamma)?;
        params = ModelParams { beta, gamma, sigma };
    }

    let mut posteriors = vec![None; n];
    for (s, &orig) in steps.into_iter().zip(&order) {
        posteriors[orig] = Some(s.posterior);
    }
    Ok(FitResult {
        params,
        posteriors: posteriors.into_iter().map(|p| p.expect("every row visited")).collect(),
        elbo_trace: trace,
        config: config.clone(),
        converged,
    })
}

fn e_step_all(
    dtm: &DocumentTermMatrix,
    x: &Matrix,
    params: &ModelParams,
    warm: &Matrix,
) -> Result<Vec<DocEStep>> {
    let ctx = EStepContext::new(params)?;
    let mu = params.prior_means(x)?;
    let one = |d: usize| e_step_with(dtm.row(d), &ctx, mu.row(d), warm.row(d));
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        Ok((0..dtm.n_docs()).into_par_iter().map(one).collect())
    }
    #[cfg(not(feature = "parallel"))]
    {
        Ok((0..dtm.n_docs()).map(one).collect())
    }
}

fn select_rows(x: &Matrix, order: &[usize]) -> Matrix {
    let mut data = Vec::with_capacity(order.len() * x.cols());
    for &i in order {
        data.extend_from_slice(x.row(i));
    }
    Matrix::from_row_major(order.len(), x.cols(), data).expect("same width")
}
