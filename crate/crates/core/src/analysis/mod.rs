//! Topic correlation and prevalence analytics on a fitted model.

mod correlation;
mod histogram;
mod prevalence;

pub use correlation::{
    correlation_report, correlation_stats, multi_k_correlation_comparison, offdiag_values, ranked_pairs,
    sigma_correlations, top_pairs, topic_correlations, CorrelationComparison, CorrelationReport,
    CorrelationStats, PairConvention, TopicPair,
};
pub use histogram::{histogram, histogram_on_grid, HistogramBin};
pub use prevalence::{prevalence_stats, PrevalenceReport};

pub const CORRELATION_BIN_WIDTH: f64 = 0.01;
pub const PREVALENCE_BIN_WIDTH: f64 = 0.005;
pub const TOP_PAIRS: usize = 10;
