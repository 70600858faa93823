//! Scalar numerics shared by the generators, rules and analysis code.

use alloc::vec::Vec;

/// Standard normal CDF, `0.5 * erfc(-x / sqrt(2))`.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / core::f64::consts::SQRT_2)
}

/// Inverse of [`normal_cdf`] by bisection, to an absolute tolerance of 1e-9 in `x`.
///
/// `p` is clamped into `(0, 1)` first; the endpoints map to `-inf` / `+inf`.
pub fn inverse_normal_cdf(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    let (mut lo, mut hi) = (-40.0f64, 40.0f64);
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if normal_cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `|t|^p`, with exact fast paths for the common exponents.
#[inline]
pub fn abs_pow(t: f64, p: f64) -> f64 {
    let a = libm::fabs(t);
    if p == 1.0 {
        a
    } else if p == 2.0 {
        a * a
    } else if p == 3.0 {
        a * a * a
    } else if p == 1.5 {
        a * libm::sqrt(a)
    } else {
        libm::pow(a, p)
    }
}

/// Arithmetic mean, summed in slice order. `0.0` for an empty slice.
pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

/// Lower median: the element at 1-based position `ceil(n/2)` of the ascending sort.
pub fn lower_median(values: &[f64]) -> f64 {
    let mut sorted: Vec<f64> = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    lower_median_sorted(&sorted)
}

pub(crate) fn lower_median_sorted(sorted: &[f64]) -> f64 {
    sorted[(sorted.len() - 1) / 2]
}

/// Unbiased sample variance (divisor `n - 1`). `0.0` below two samples.
pub fn sample_variance(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (values.len() - 1) as f64
}
