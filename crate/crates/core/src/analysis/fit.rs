use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::descriptive::pearson_columns;
use crate::error::{Error, Result};
use crate::linalg::CorrelationMatrix;
use crate::math::{inverse_normal_cdf, mean, sample_variance};
use crate::profile::EvaluationProfile;

/// Smallest value a moment estimate is clamped to.
pub const BETA_PARAM_FLOOR: f64 = 1e-3;
/// Eigenvalue floor used when projecting a copula estimate onto valid correlations.
pub const EIGEN_FLOOR: f64 = 1e-8;

/// Method-of-moments `Beta(α, β)` estimate:
/// `α = m (m(1-m)/v - 1)`, `β = (1-m)(m(1-m)/v - 1)` with the unbiased variance `v`.
pub fn fit_beta_moments(samples: &[f64]) -> Result<(f64, f64)> {
    if samples.len() < 10 {
        return Err(Error::Fit(format!("need at least 10 samples, got {}", samples.len())));
    }
    if let Some(x) = samples.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::Fit(format!("sample {x} is outside [0, 1]")));
    }
    let m = mean(samples);
    let v = sample_variance(samples);
    if !(m > 0.0 && m < 1.0) {
        return Err(Error::Fit(format!("sample mean {m} is on the boundary")));
    }
    if v.is_nan() || v <= 0.0 || samples.iter().all(|&x| x == samples[0]) {
        return Err(Error::Fit("sample variance is zero".into()));
    }
    let common = m * (1.0 - m) / v - 1.0;
    Ok(((m * common).max(BETA_PARAM_FLOOR), ((1.0 - m) * common).max(BETA_PARAM_FLOOR)))
}

/// Ascending midranks (1-based, ties share the average rank).
pub(crate) fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start+1 ..= end share their average
        let avg = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = avg;
        }
        start = end;
    }
    ranks
}

/// Gaussian-copula correlation estimate: normal scores of `(rank - 0.5)/n`,
/// Pearson-correlated, then projected to the nearest valid correlation matrix.
pub fn fit_gaussian_copula(profile: &EvaluationProfile) -> Result<CorrelationMatrix> {
    let n = profile.voters();
    if n < 10 {
        return Err(Error::Fit(format!("need at least 10 voters, got {n}")));
    }
    let d = profile.candidates();
    let mut scores = Vec::with_capacity(d);
    for i in 0..d {
        let column = profile.column(i);
        if column.iter().all(|&x| x == column[0]) {
            return Err(Error::Fit(format!("candidate {i} has a constant column")));
        }
        scores.push(
            midranks(&column).into_iter().map(|r| inverse_normal_cdf((r - 0.5) / n as f64)).collect::<Vec<f64>>(),
        );
    }
    let estimate = pearson_columns(&scores);
    let raw: Vec<f64> = estimate.values.iter().map(|v| v.unwrap_or(0.0)).collect();
    CorrelationMatrix::project(d, &raw, EIGEN_FLOOR)
}
