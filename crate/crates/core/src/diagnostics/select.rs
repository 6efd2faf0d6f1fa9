use alloc::vec::Vec;

use crate::{Error, Result};

/// Positive coherence increases at or above this percentile of all positive
/// increases are flagged.
pub const SPIKE_PERCENTILE: f64 = 0.75;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepEntry {
    pub k: usize,
    pub se: f64,
    pub ex: f64,
    pub elbo: f64,
    pub seed: u64,
    pub converged: bool,
    pub em_iters: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepResult {
    /// Sorted by K.
    pub entries: Vec<SweepEntry>,
    pub candidates: Vec<usize>,
    /// Chosen by the user among the candidates.
    pub k_star: Option<usize>,
}

/// Flags K where coherence rose relative to the previous entry
/// (`SE_K - SE_prev > 0`) by at least the 75th percentile (linear
/// interpolation) of all positive rises in the sweep.
pub fn candidate_ks(entries: &[SweepEntry]) -> Result<Vec<usize>> {
    if entries.len() < 3 {
        return Err(Error::Config("candidate detection needs at least three sweep entries".into()));
    }
    if entries.windows(2).any(|w| w[0].k >= w[1].k) {
        return Err(Error::Validation("sweep entries must be sorted by K".into()));
    }
    let rises: Vec<(usize, f64)> = entries.windows(2).map(|w| (w[1].k, w[1].se - w[0].se)).collect();
    let mut positive: Vec<f64> = rises.iter().map(|r| r.1).filter(|&d| d > 0.0).collect();
    if positive.is_empty() {
        return Ok(Vec::new());
    }
    positive.sort_by(f64::total_cmp);
    let bar = percentile(&positive, SPIKE_PERCENTILE);
    Ok(rises.into_iter().filter(|&(_, d)| d > 0.0 && d >= bar).map(|(k, _)| k).collect())
}

fn percentile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = libm::floor(h) as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Affine rescaling used to draw SE and EX on one axis:
/// `se/10 + 20` and `(ex - 8) * 5`.
pub fn plot_transform(se: f64, ex: f64) -> (f64, f64) {
    (se / 10.0 + 20.0, (ex - 8.0) * 5.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn sweep(ks: &[usize], se: &[f64]) -> Vec<SweepEntry> {
        ks.iter()
            .zip(se)
            .map(|(&k, &se)| SweepEntry { k, se, ex: 9.0, elbo: 0.0, seed: 0, converged: true, em_iters: 1 })
            .collect()
    }

    #[test]
    fn decreasing_coherence_has_no_candidates() {
        let s = sweep(&[20, 21, 22, 23], &[-10.0, -11.0, -12.5, -13.0]);
        assert!(candidate_ks(&s).unwrap().is_empty());
    }

    #[test]
    fn only_notable_spikes_flagged() {
        let s = sweep(&[20, 21, 22, 23, 24], &[-10.0, -11.0, -9.0, -12.0, -11.9]);
        assert_eq!(candidate_ks(&s).unwrap(), vec![22]);
    }

    #[test]
    fn too_short_sweep_rejected() {
        assert!(candidate_ks(&sweep(&[5, 6], &[-1.0, 0.0])).is_err());
    }

    #[test]
    fn transform_anchors() {
        assert_eq!(plot_transform(-100.0, 8.0), (10.0, 0.0));
        assert_eq!(plot_transform(0.0, 10.0), (20.0, 10.0));
    }
}
