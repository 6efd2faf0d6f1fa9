use rand_distr::{Distribution, Gamma};

use super::mstep::normalize_rows_with_floor;
use super::ModelParams;
use crate::corpus::DocumentTermMatrix;
use crate::linalg::Matrix;
use crate::{rng, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum InitStrategy {
    /// Beta rows from a symmetric Dirichlet(0.1).
    #[default]
    SeededRandom,
    /// Beta from anchor words of the row-normalized co-occurrence matrix.
    AnchorSpectral,
}

const DIRICHLET_CONCENTRATION: f64 = 0.1;

/// Starting parameters: beta per `strategy`, gamma = 0, sigma = I.
/// Topic `k` draws from random stream `k` of `seed`.
pub fn init_params(
    dtm: &DocumentTermMatrix,
    k: usize,
    p: usize,
    seed: u64,
    strategy: InitStrategy,
) -> Result<ModelParams> {
    if k < 2 {
        return Err(Error::Config("K must be at least 2".into()));
    }
    let v = dtm.n_terms();
    let beta = match strategy {
        InitStrategy::SeededRandom => dirichlet_rows(k, v, seed),
        InitStrategy::AnchorSpectral => super::anchors::anchor_beta(dtm, k)?,
    };
    Ok(ModelParams { beta, gamma: Matrix::zeros(p, k - 1), sigma: Matrix::identity(k - 1) })
}

fn dirichlet_rows(k: usize, v: usize, seed: u64) -> Matrix {
    let gamma = Gamma::new(DIRICHLET_CONCENTRATION, 1.0).expect("valid shape");
    let mut beta = Matrix::zeros(k, v);
    for t in 0..k {
        let mut r = rng::stream(seed, t as u64);
        let row = beta.row_mut(t);
        for b in row.iter_mut() {
            *b = gamma.sample(&mut r);
        }
        let s: f64 = row.iter().sum();
        if s > 0.0 {
            row.iter_mut().for_each(|b| *b /= s);
        }
    }
    normalize_rows_with_floor(&mut beta);
    beta
}
