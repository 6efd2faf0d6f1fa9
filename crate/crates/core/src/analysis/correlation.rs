use alloc::vec::Vec;

use super::histogram::{bin_range, histogram, histogram_on_grid, HistogramBin};
use crate::linalg::Matrix;
use crate::{Error, Result};

/// How off-diagonal correlations are collected: both triangles (`K(K-1)`
/// values) or each unordered pair once (`K(K-1)/2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum PairConvention {
    Ordered,
    #[default]
    Unique,
}

/// Pearson correlation between the topic columns of a D x K theta matrix.
pub fn topic_correlations(theta: &Matrix) -> Result<Matrix> {
    let (d, k) = (theta.rows(), theta.cols());
    if d < 3 {
        return Err(Error::Config("correlations need at least three documents".into()));
    }
    let mut centered = Matrix::zeros(k, d);
    let mut norms = Vec::with_capacity(k);
    for t in 0..k {
        let col = theta.column(t);
        let mean = col.iter().sum::<f64>() / d as f64;
        let row = centered.row_mut(t);
        for (c, x) in row.iter_mut().zip(&col) {
            *c = x - mean;
        }
        let ss: f64 = row.iter().map(|c| c * c).sum();
        if !(ss > 0.0) {
            return Err(Error::ConstantTopic { topic: t });
        }
        norms.push(libm::sqrt(ss));
    }
    let mut corr = Matrix::identity(k);
    for i in 0..k {
        for j in (i + 1)..k {
            let cov = crate::linalg::dot(centered.row(i), centered.row(j));
            let r = (cov / (norms[i] * norms[j])).clamp(-1.0, 1.0);
            corr[(i, j)] = r;
            corr[(j, i)] = r;
        }
    }
    Ok(corr)
}

/// Correlation matrix implied by a covariance matrix (over the K-1 free
/// topic coordinates).
pub fn sigma_correlations(sigma: &Matrix) -> Result<Matrix> {
    let n = sigma.rows();
    let mut corr = Matrix::identity(n);
    for i in 0..n {
        if !(sigma[(i, i)] > 0.0) {
            return Err(Error::ConstantTopic { topic: i });
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let r = (sigma[(i, j)] / libm::sqrt(sigma[(i, i)] * sigma[(j, j)])).clamp(-1.0, 1.0);
            corr[(i, j)] = r;
            corr[(j, i)] = r;
        }
    }
    Ok(corr)
}

/// Off-diagonal entries in row-major order (upper triangle only for
/// [`PairConvention::Unique`]).
pub fn offdiag_values(corr: &Matrix, convention: PairConvention) -> Vec<f64> {
    let k = corr.rows();
    let mut out = Vec::new();
    for i in 0..k {
        for j in 0..k {
            let keep = match convention {
                PairConvention::Ordered => i != j,
                PairConvention::Unique => j > i,
            };
            if keep {
                out.push(corr[(i, j)]);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CorrelationStats {
    pub min: f64,
    pub mean: f64,
    pub median: f64,
    pub max: f64,
    /// Sample standard deviation (denominator n-1); 0 for a single value.
    pub std_dev: f64,
}

pub fn correlation_stats(corr: &Matrix, convention: PairConvention) -> Result<CorrelationStats> {
    if corr.rows() < 2 {
        return Err(Error::Config("correlation statistics need K >= 2".into()));
    }
    let mut v = offdiag_values(corr, convention);
    v.sort_by(f64::total_cmp);
    let n = v.len();
    let mean = v.iter().sum::<f64>() / n as f64;
    let median = if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) };
    let std_dev = if n > 1 {
        libm::sqrt(v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64)
    } else {
        0.0
    };
    Ok(CorrelationStats { min: v[0], mean, median, max: v[n - 1], std_dev })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TopicPair {
    /// Zero-based, `i < j`.
    pub i: usize,
    pub j: usize,
    pub r: f64,
}

/// Every unordered pair, by correlation descending then `(i, j)` ascending.
pub fn ranked_pairs(corr: &Matrix) -> Vec<TopicPair> {
    let k = corr.rows();
    let mut pairs = Vec::with_capacity(k * k.saturating_sub(1) / 2);
    for i in 0..k {
        for j in (i + 1)..k {
            pairs.push(TopicPair { i, j, r: corr[(i, j)] });
        }
    }
    pairs.sort_by(|a, b| b.r.total_cmp(&a.r).then(a.i.cmp(&b.i)).then(a.j.cmp(&b.j)));
    pairs
}

/// The `n` most positively correlated pairs.
pub fn top_pairs(corr: &Matrix, n: usize) -> Result<Vec<TopicPair>> {
    let mut pairs = ranked_pairs(corr);
    if n > pairs.len() {
        return Err(Error::Config(alloc::format!("{n} pairs requested but only {} exist", pairs.len())));
    }
    pairs.truncate(n);
    Ok(pairs)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    pub k: usize,
    pub corr: Matrix,
    pub convention: PairConvention,
    pub offdiag_values: Vec<f64>,
    pub stats: CorrelationStats,
    pub top_pairs: Vec<TopicPair>,
    pub histogram: Vec<HistogramBin>,
}

pub fn correlation_report(
    corr: Matrix,
    convention: PairConvention,
    n_pairs: usize,
    bin_width: f64,
) -> Result<CorrelationReport> {
    let stats = correlation_stats(&corr, convention)?;
    let offdiag = offdiag_values(&corr, convention);
    let top = top_pairs(&corr, n_pairs.min(offdiag_values(&corr, PairConvention::Unique).len()))?;
    let histogram = histogram(&offdiag, bin_width)?;
    Ok(CorrelationReport {
        k: corr.rows(),
        convention,
        offdiag_values: offdiag,
        stats,
        top_pairs: top,
        histogram,
        corr,
    })
}

/// Per-K mean correlation and density series on one shared bin grid, for
/// overlaying correlation distributions of several fits.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationComparison {
    pub ks: Vec<usize>,
    pub means: Vec<f64>,
    /// `(left, right)` of every bin of the shared grid.
    pub grid: Vec<(f64, f64)>,
    /// One density series per K, each `grid.len()` long.
    pub series: Vec<Vec<f64>>,
}

pub fn multi_k_correlation_comparison(
    corrs: &[(usize, Matrix)],
    convention: PairConvention,
    bin_width: f64,
) -> Result<CorrelationComparison> {
    if corrs.len() < 2 {
        return Err(Error::Config("comparison needs at least two fits".into()));
    }
    let values: Vec<Vec<f64>> = corrs.iter().map(|(_, c)| offdiag_values(c, convention)).collect();
    let all: Vec<f64> = values.iter().flatten().copied().collect();
    let (lo, hi) =
        bin_range(&all, bin_width).ok_or_else(|| Error::Config("no off-diagonal correlations".into()))?;
    let mut series = Vec::with_capacity(corrs.len());
    let mut grid = Vec::new();
    for v in &values {
        let h = histogram_on_grid(v, bin_width, lo, hi)?;
        if grid.is_empty() {
            grid = h.iter().map(|b| (b.left, b.right)).collect();
        }
        series.push(h.into_iter().map(|b| b.density).collect());
    }
    Ok(CorrelationComparison {
        ks: corrs.iter().map(|(k, _)| *k).collect(),
        means: values.iter().map(|v| v.iter().sum::<f64>() / v.len() as f64).collect(),
        grid,
        series,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn fixture3() -> Matrix {
        Matrix::from_rows(&[vec![1.0, 0.1, -0.2], vec![0.1, 1.0, 0.3], vec![-0.2, 0.3, 1.0]]).unwrap()
    }

    #[test]
    fn identical_columns_correlate_perfectly() {
        let theta =
            Matrix::from_rows(&[vec![0.2, 0.2, 0.6], vec![0.3, 0.3, 0.4], vec![0.1, 0.1, 0.8]]).unwrap();
        let c = topic_correlations(&theta).unwrap();
        assert!((c[(0, 1)] - 1.0).abs() < 1e-15);
        assert_eq!(c[(2, 2)], 1.0);
    }

    #[test]
    fn two_topics_are_complementary() {
        let theta =
            Matrix::from_rows(&[vec![0.2, 0.8], vec![0.65, 0.35], vec![0.9, 0.1], vec![0.4, 0.6]]).unwrap();
        let c = topic_correlations(&theta).unwrap();
        assert!((c[(0, 1)] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_topic_is_named() {
        let theta =
            Matrix::from_rows(&[vec![0.5, 0.3, 0.2], vec![0.5, 0.1, 0.4], vec![0.5, 0.25, 0.25]]).unwrap();
        assert_eq!(topic_correlations(&theta).unwrap_err(), Error::ConstantTopic { topic: 0 });
        let short = Matrix::from_rows(&[vec![0.5, 0.5], vec![0.2, 0.8]]).unwrap();
        assert!(topic_correlations(&short).is_err());
    }

    #[test]
    fn stats_of_hand_fixture() {
        let s = correlation_stats(&fixture3(), PairConvention::Unique).unwrap();
        assert_eq!(s.min, -0.2);
        assert_eq!(s.max, 0.3);
        assert_eq!(s.median, 0.1);
        assert!((s.mean - 0.2 / 3.0).abs() < 1e-15);
        let o = correlation_stats(&fixture3(), PairConvention::Ordered).unwrap();
        assert_eq!((o.min, o.median, o.max), (s.min, s.median, s.max));
        assert!((o.mean - s.mean).abs() < 1e-15);
    }

    #[test]
    fn zero_offdiagonal_stats() {
        let s = correlation_stats(&Matrix::identity(4), PairConvention::Unique).unwrap();
        assert_eq!(s, CorrelationStats { min: 0.0, mean: 0.0, median: 0.0, max: 0.0, std_dev: 0.0 });
        assert!(correlation_stats(&Matrix::identity(1), PairConvention::Unique).is_err());
    }

    #[test]
    fn equal_correlations_keep_lexicographic_pairs() {
        let mut c = Matrix::identity(4);
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    c[(i, j)] = 0.2;
                }
            }
        }
        let p = top_pairs(&c, 3).unwrap();
        assert_eq!(p.iter().map(|p| (p.i, p.j)).collect::<Vec<_>>(), vec![(0, 1), (0, 2), (0, 3)]);
        assert!(top_pairs(&c, 7).is_err());
    }

    #[test]
    fn unique_pairs_at_k_64() {
        assert_eq!(offdiag_values(&Matrix::identity(64), PairConvention::Unique).len(), 2016);
        assert_eq!(offdiag_values(&Matrix::identity(64), PairConvention::Ordered).len(), 4032);
    }

    #[test]
    fn comparison_of_identical_fits() {
        let fits = vec![(3, fixture3()), (3, fixture3())];
        let c = multi_k_correlation_comparison(&fits, PairConvention::Unique, 0.1).unwrap();
        assert_eq!(c.series[0], c.series[1]);
        assert!(c.series.iter().all(|s| s.len() == c.grid.len()));
        assert!(multi_k_correlation_comparison(&fits[..1], PairConvention::Unique, 0.1).is_err());
    }

    #[test]
    fn sigma_mode() {
        let s = Matrix::from_rows(&[vec![4.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let c = sigma_correlations(&s).unwrap();
        assert!((c[(0, 1)] - 0.5).abs() < 1e-15);
    }
}
