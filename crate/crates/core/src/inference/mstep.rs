use super::DocPosterior;
use crate::corpus::DocumentTermMatrix;
use crate::linalg::{spd_repair, Cholesky, Matrix};
use crate::{Error, Result};

/// Added to every beta cell before normalization.
pub const BETA_FLOOR: f64 = 1e-8;

/// `beta_kv ∝ sum_d c_dv phi_dvk + floor`. `phi[d]` is nnz(d) x K in the
/// term order of row `d`; documents are accumulated in row order.
pub fn update_beta(phi: &[Matrix], dtm: &DocumentTermMatrix) -> Result<Matrix> {
    if phi.len() != dtm.n_docs() {
        return Err(Error::Dimension("one phi matrix per document required".into()));
    }
    let k = phi.first().map_or(0, Matrix::cols);
    let mut beta = Matrix::zeros(k, dtm.n_terms());
    for (row, p) in dtm.rows().iter().zip(phi) {
        if p.rows() != row.nnz() || p.cols() != k {
            return Err(Error::Dimension("phi does not match document support".into()));
        }
        for (u, (v, c)) in row.iter().enumerate() {
            let c = f64::from(c);
            for t in 0..k {
                beta[(t, v)] += c * p[(u, t)];
            }
        }
    }
    normalize_rows_with_floor(&mut beta);
    Ok(beta)
}

pub(crate) fn normalize_rows_with_floor(beta: &mut Matrix) {
    for t in 0..beta.rows() {
        let row = beta.row_mut(t);
        row.iter_mut().for_each(|b| *b += BETA_FLOOR);
        let s: f64 = row.iter().sum();
        row.iter_mut().for_each(|b| *b /= s);
    }
}

/// Ridge least squares `(X'X + ridge I)^-1 X' Lambda`, one column per
/// topic coordinate.
pub fn update_gamma(lambdas: &Matrix, x: &Matrix, ridge: f64) -> Result<Matrix> {
    if lambdas.rows() != x.rows() {
        return Err(Error::Dimension("lambda and design rows differ".into()));
    }
    if !(ridge >= 0.0) {
        return Err(Error::Config("ridge must be non-negative".into()));
    }
    let p = x.cols();
    let mut xtx = Matrix::zeros(p, p);
    let mut xtl = Matrix::zeros(p, lambdas.cols());
    for d in 0..x.rows() {
        let xd = x.row(d);
        let ld = lambdas.row(d);
        for i in 0..p {
            if xd[i] == 0.0 {
                continue;
            }
            for j in 0..p {
                xtx[(i, j)] += xd[i] * xd[j];
            }
            for (j, l) in ld.iter().enumerate() {
                xtl[(i, j)] += xd[i] * l;
            }
        }
    }
    let scale = (0..p).map(|i| xtx[(i, i)]).fold(0.0, f64::max);
    for i in 0..p {
        xtx[(i, i)] += ridge;
    }
    let ch = Cholesky::new(&xtx).map_err(|_| Error::SingularNormalEquations)?;
    let min_pivot = (0..p).map(|i| ch.factor()[(i, i)]).fold(f64::INFINITY, f64::min);
    if min_pivot * min_pivot <= 1e-13 * scale {
        return Err(Error::SingularNormalEquations);
    }
    Ok(ch.solve_matrix(&xtl))
}

/// `Sigma = (1/D) sum_d [nu_d + r_d r_d']` with `r_d = lambda_d - X_d gamma`,
/// symmetrized and jitter-repaired.
pub fn update_sigma(posteriors: &[DocPosterior], x: &Matrix, gamma: &Matrix) -> Result<Matrix> {
    let n = posteriors.len();
    if n < 2 {
        return Err(Error::Config("covariance update needs at least two documents".into()));
    }
    if x.rows() != n {
        return Err(Error::Dimension("posteriors and design rows differ".into()));
    }
    let k1 = gamma.cols();
    let mu = x.matmul(gamma)?;
    let mut sigma = Matrix::zeros(k1, k1);
    for (d, post) in posteriors.iter().enumerate() {
        let r: alloc::vec::Vec<f64> = post.lambda.iter().zip(mu.row(d)).map(|(l, m)| l - m).collect();
        for i in 0..k1 {
            for j in 0..k1 {
                sigma[(i, j)] += post.nu[(i, j)] + r[i] * r[j];
            }
        }
    }
    sigma.scale(1.0 / n as f64);
    sigma.symmetrize();
    Ok(spd_repair(&sigma)?.matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::SparseRow;
    use alloc::vec;
    use alloc::vec::Vec;

    fn post(lambda: Vec<f64>, nu: Matrix) -> DocPosterior {
        let theta = crate::inference::softmax_augmented(&lambda);
        DocPosterior { lambda, nu, theta, objective: 0.0, converged: true }
    }

    #[test]
    fn single_hard_assignment() {
        let dtm =
            DocumentTermMatrix::new(1, vec!["a".into()], vec![SparseRow::new(vec![0], vec![3])]).unwrap();
        let phi = Matrix::from_rows(&[vec![1.0, 0.0]]).unwrap();
        let beta = update_beta(&[phi], &dtm).unwrap();
        assert_eq!(beta[(0, 0)], 1.0);
        assert_eq!(beta[(1, 0)], 1.0);
    }

    #[test]
    fn disjoint_documents_recover_empirical_distributions() {
        let dtm = DocumentTermMatrix::new(
            4,
            vec!["a".into(), "b".into()],
            vec![SparseRow::new(vec![0, 1], vec![3, 1]), SparseRow::new(vec![2, 3], vec![2, 2])],
        )
        .unwrap();
        let hard0 = Matrix::from_rows(&[vec![1.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let hard1 = Matrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let beta = update_beta(&[hard0, hard1], &dtm).unwrap();
        let expect0 = [0.75, 0.25, 0.0, 0.0];
        let expect1 = [0.0, 0.0, 0.5, 0.5];
        for v in 0..4 {
            assert!((beta[(0, v)] - expect0[v]).abs() < 1e-7);
            assert!((beta[(1, v)] - expect1[v]).abs() < 1e-7);
        }
    }

    #[test]
    fn uniform_phi_gives_corpus_distribution() {
        let dtm = DocumentTermMatrix::new(
            3,
            vec!["a".into(), "b".into()],
            vec![SparseRow::new(vec![0, 2], vec![1, 3]), SparseRow::new(vec![1, 2], vec![2, 2])],
        )
        .unwrap();
        let u = Matrix::from_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        let beta = update_beta(&[u.clone(), u], &dtm).unwrap();
        let total = 8.0 + 3.0 * BETA_FLOOR * 2.0;
        let emp = [1.0, 2.0, 5.0];
        for t in 0..2 {
            for v in 0..3 {
                let want = (emp[v] / 2.0 + BETA_FLOOR) / (total / 2.0);
                assert!((beta[(t, v)] - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn intercept_only_gamma_is_column_mean() {
        let x = Matrix::from_rows(&[vec![1.0], vec![1.0], vec![1.0]]).unwrap();
        let l = Matrix::from_rows(&[vec![1.0, -2.0], vec![2.0, 0.0], vec![6.0, 5.0]]).unwrap();
        let g = update_gamma(&l, &x, 0.0).unwrap();
        assert!((g[(0, 0)] - 3.0).abs() < 1e-14);
        assert!((g[(0, 1)] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn hand_ols_on_three_points() {
        // y = (1, 2, 4) on x = (0, 1, 2): slope 1.5, intercept 5/6.
        let x = Matrix::from_rows(&[vec![1.0, 0.0], vec![1.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let l = Matrix::from_rows(&[vec![1.0], vec![2.0], vec![4.0]]).unwrap();
        let g = update_gamma(&l, &x, 0.0).unwrap();
        assert!((g[(0, 0)] - 5.0 / 6.0).abs() < 1e-10);
        assert!((g[(1, 0)] - 1.5).abs() < 1e-10);
    }

    #[test]
    fn exact_fit_recovers_coefficients() {
        let x = Matrix::from_rows(&[
            vec![1.0, 0.0, -1.0],
            vec![1.0, 1.0, 0.5],
            vec![1.0, 0.0, 2.0],
            vec![1.0, 1.0, -0.3],
            vec![1.0, 0.0, 0.1],
        ])
        .unwrap();
        let g_true = Matrix::from_rows(&[vec![0.5, -1.0], vec![2.0, 0.25], vec![-0.75, 1.5]]).unwrap();
        let l = x.matmul(&g_true).unwrap();
        let g = update_gamma(&l, &x, 0.0).unwrap();
        assert!(g.max_abs_diff(&g_true) < 1e-9);
    }

    #[test]
    fn collinear_design_needs_ridge() {
        let x = Matrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let l = Matrix::from_rows(&[vec![1.0], vec![2.0], vec![3.0]]).unwrap();
        assert_eq!(update_gamma(&l, &x, 0.0).unwrap_err(), Error::SingularNormalEquations);
        assert!(update_gamma(&l, &x, 1e-6).is_ok());
    }

    #[test]
    fn sigma_examples() {
        let x = Matrix::from_rows(&[vec![1.0], vec![1.0]]).unwrap();
        let gamma = Matrix::zeros(1, 2);
        let posts =
            vec![post(vec![0.0, 0.0], Matrix::identity(2)), post(vec![0.0, 0.0], Matrix::identity(2))];
        let s = update_sigma(&posts, &x, &gamma).unwrap();
        assert_eq!(s, Matrix::identity(2));

        let gamma = Matrix::zeros(1, 1);
        let posts = vec![post(vec![1.0], Matrix::zeros(1, 1)), post(vec![-1.0], Matrix::zeros(1, 1))];
        let s = update_sigma(&posts, &x, &gamma).unwrap();
        assert_eq!(s[(0, 0)], 1.0);
        assert!(update_sigma(&posts[..1], &x, &gamma).is_err());
    }
}
