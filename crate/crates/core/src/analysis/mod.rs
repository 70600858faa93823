//! Monte Carlo experiments, descriptive statistics and model fitting.

mod descriptive;
mod experiment;
mod fit;
mod stats;

pub use descriptive::{
    empirical_correlation, histogram, pairwise_scatter, CorrelationEstimate, HistogramData, DEFAULT_BINS,
};
pub use experiment::{
    run_experiment, run_replicate, run_replicates, ExperimentConfig, ExperimentReport, ExperimentTally,
    ReplicateOutcome, RuleStats,
};
pub use fit::{fit_beta_moments, fit_gaussian_copula, BETA_PARAM_FLOOR, EIGEN_FLOOR};
pub use stats::{
    chi_square_statistic, ks_critical_1pct, ks_two_sample_critical_1pct, ks_two_sample_statistic, ks_uniform_statistic,
};
