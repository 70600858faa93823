use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Kolmogorov-Smirnov distance between the empirical CDF of `samples` and `U[0,1]`.
pub fn ks_uniform_statistic(samples: &[f64]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::parameter("KS statistic of an empty sample"));
    }
    if samples.iter().any(|x| !(0.0..=1.0).contains(x)) {
        return Err(Error::parameter("KS uniform statistic needs samples in [0, 1]"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len() as f64;
    Ok(sorted.iter().enumerate().map(|(i, &x)| ((i + 1) as f64 / n - x).max(x - i as f64 / n)).fold(0.0, f64::max))
}

/// Two-sample Kolmogorov-Smirnov distance between empirical CDFs.
pub fn ks_two_sample_statistic(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::parameter("KS statistic of an empty sample"));
    }
    let sort = |s: &[f64]| {
        let mut v: Vec<f64> = s.to_vec();
        v.sort_unstable_by(f64::total_cmp);
        v
    };
    let (a, b) = (sort(a), sort(b));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max(libm::fabs(i as f64 / na - j as f64 / nb));
    }
    Ok(d)
}

/// Asymptotic 1% critical value of the one-sample KS statistic, `1.63 / sqrt(n)`.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.63 / libm::sqrt(n as f64)
}

/// Asymptotic 1% critical value of the two-sample KS statistic.
pub fn ks_two_sample_critical_1pct(n: usize, m: usize) -> f64 {
    1.63 * libm::sqrt((n + m) as f64 / (n as f64 * m as f64))
}

/// Pearson chi-square statistic `Σ (O - E)² / E`.
pub fn chi_square_statistic(observed: &[usize], expected: &[f64]) -> Result<f64> {
    if observed.len() != expected.len() || observed.is_empty() {
        return Err(Error::dimension("observed and expected counts must have the same, non-zero length"));
    }
    if expected.iter().any(|&e| e.is_nan() || e <= 0.0) {
        return Err(Error::parameter("expected counts must be positive"));
    }
    Ok(observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| {
            let diff = o as f64 - e;
            diff * diff / e
        })
        .sum())
}
