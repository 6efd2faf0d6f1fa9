use alloc::vec::Vec;

use super::histogram::{histogram, HistogramBin};
use crate::linalg::Matrix;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PrevalenceReport {
    /// `D * K`.
    pub n_values: usize,
    pub mean: f64,
    /// `1 / K`.
    pub theoretical_mean: f64,
    /// Fraction of values strictly below `1 / K`.
    pub share_below_theoretical: f64,
    pub histogram: Vec<HistogramBin>,
}

/// Summary of all document-topic proportions pooled together.
pub fn prevalence_stats(theta: &Matrix, bin_width: f64) -> Result<PrevalenceReport> {
    let (d, k) = (theta.rows(), theta.cols());
    if d == 0 || k == 0 {
        return Err(Error::Config("empty theta".into()));
    }
    let values = theta.as_slice();
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let theoretical_mean = 1.0 / k as f64;
    let below = values.iter().filter(|&&v| v < theoretical_mean).count();
    Ok(PrevalenceReport {
        n_values: n,
        mean,
        theoretical_mean,
        share_below_theoretical: below as f64 / n as f64,
        histogram: histogram(values, bin_width)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn single_topic() {
        let theta = Matrix::from_rows(&[vec![1.0], vec![1.0], vec![1.0]]).unwrap();
        let r = prevalence_stats(&theta, 0.005).unwrap();
        assert_eq!((r.n_values, r.mean, r.share_below_theoretical), (3, 1.0, 0.0));
    }

    #[test]
    fn uniform_theta_occupies_one_bin() {
        let theta = Matrix::from_row_major(10, 4, vec![0.25; 40]).unwrap();
        let r = prevalence_stats(&theta, 0.005).unwrap();
        assert_eq!(r.share_below_theoretical, 0.0);
        assert_eq!(r.histogram.iter().filter(|b| b.density > 0.0).count(), 1);
    }

    #[test]
    fn skewed_rows() {
        let theta = Matrix::from_rows(&[vec![0.7, 0.2, 0.1], vec![0.1, 0.1, 0.8]]).unwrap();
        let r = prevalence_stats(&theta, 0.1).unwrap();
        assert!((r.mean - 1.0 / 3.0).abs() < 1e-15);
        assert!((r.share_below_theoretical - 4.0 / 6.0).abs() < 1e-15);
    }
}
