use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HistogramBin {
    pub left: f64,
    pub right: f64,
    pub density: f64,
}

fn bin_index(v: f64, width: f64) -> i64 {
    libm::floor(v / width) as i64
}

fn check(values: &[f64], width: f64) -> Result<()> {
    if values.is_empty() {
        return Err(Error::Config("histogram of no values".into()));
    }
    if !(width > 0.0) || !width.is_finite() {
        return Err(Error::Config("bin width must be positive".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Validation("histogram of non-finite values".into()));
    }
    Ok(())
}

/// Left-closed bins `[i w, (i+1) w)` covering every value, from the lowest
/// to the highest occupied bin (empty bins in between are kept).
/// `density = count / (n w)`.
pub fn histogram(values: &[f64], width: f64) -> Result<Vec<HistogramBin>> {
    check(values, width)?;
    let lo = values.iter().map(|&v| bin_index(v, width)).min().expect("non-empty");
    let hi = values.iter().map(|&v| bin_index(v, width)).max().expect("non-empty");
    histogram_on_grid(values, width, lo, hi)
}

/// Histogram on the fixed bin range `lo..=hi` (bin indices). Values outside
/// the range are an error.
pub fn histogram_on_grid(values: &[f64], width: f64, lo: i64, hi: i64) -> Result<Vec<HistogramBin>> {
    check(values, width)?;
    if hi < lo {
        return Err(Error::Config("empty bin range".into()));
    }
    let mut counts = vec![0usize; (hi - lo + 1) as usize];
    for &v in values {
        let i = bin_index(v, width);
        if i < lo || i > hi {
            return Err(Error::Validation(alloc::format!("value {v} outside the bin grid")));
        }
        counts[(i - lo) as usize] += 1;
    }
    let n = values.len() as f64;
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(j, c)| {
            let i = lo + j as i64;
            HistogramBin {
                left: i as f64 * width,
                right: (i + 1) as f64 * width,
                density: c as f64 / (n * width),
            }
        })
        .collect())
}

pub(crate) fn bin_range(values: &[f64], width: f64) -> Option<(i64, i64)> {
    let lo = values.iter().map(|&v| bin_index(v, width)).min()?;
    let hi = values.iter().map(|&v| bin_index(v, width)).max()?;
    Some((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_width_example() {
        let h = histogram(&[0.0, 0.0, 1.0], 1.0).unwrap();
        assert_eq!(h.len(), 2);
        assert_eq!((h[0].left, h[0].right), (0.0, 1.0));
        assert!((h[0].density - 2.0 / 3.0).abs() < 1e-15);
        assert!((h[1].density - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn single_value() {
        let h = histogram(&[0.37], 0.25).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h[0].density, 4.0);
        assert_eq!(h[0].left, 0.25);
    }

    #[test]
    fn negative_values_and_gaps() {
        let h = histogram(&[-0.15, 0.25], 0.1).unwrap();
        assert_eq!(h.len(), 5);
        assert_eq!(h[1].density, 0.0);
    }

    #[test]
    fn invalid_inputs() {
        assert!(histogram(&[], 1.0).is_err());
        assert!(histogram(&[1.0], 0.0).is_err());
        assert!(histogram_on_grid(&[5.0], 1.0, 0, 2).is_err());
    }
}
