//! Deepest Voting with the weighted L^p depth and power weight `ω(x) = x^p`:
//!
//! ```text
//! wLpD(x) = 1 / (1 + (1/n) Σ_j Σ_i |e_ij - x_i|^p)
//! ```
//!
//! The double sum separates over candidates, so the deepest point is the vector
//! of per-candidate minimizers of `Σ_j |e_ij - x_i|^p` over `[0, 1]`. For `p >= 1`
//! each of those is convex and golden-section search finds it; `p = 1` and `p = 2`
//! use the lower median and the mean directly.

use alloc::format;
use alloc::vec::Vec;

use super::grading::{candidate_means, sorted_columns};
use super::{argmax_result, ElectionResult, Rule};
use crate::error::{Error, Result};
use crate::math::{abs_pow, lower_median_sorted};
use crate::profile::EvaluationProfile;

/// Absolute tolerance of the per-coordinate golden-section search.
pub const GOLDEN_TOLERANCE: f64 = 1e-9;

/// Exponent of the weighted L^p depth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepthSpec {
    p: f64,
}

impl DepthSpec {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::parameter(format!("depth exponent p must be positive, got {p}")));
        }
        Ok(DepthSpec { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Deepest-point search needs a convex objective, i.e. `p >= 1`.
    pub(crate) fn check_supported(&self) -> Result<()> {
        if self.p < 1.0 {
            return Err(Error::Unsupported(format!(
                "deepest voting needs p >= 1 (got {}); the coordinate objective is not convex below 1",
                self.p
            )));
        }
        Ok(())
    }
}

/// Weighted L^p depth of `point` in the voters' cloud; always in `(0, 1]`.
pub fn wlp_depth(point: &[f64], profile: &EvaluationProfile, spec: DepthSpec) -> Result<f64> {
    if point.len() != profile.candidates() {
        return Err(Error::dimension(format!(
            "point has {} coordinates but there are {} candidates",
            point.len(),
            profile.candidates()
        )));
    }
    let p = spec.p;
    let total: f64 = profile.rows().map(|row| row.iter().zip(point).map(|(e, x)| abs_pow(e - x, p)).sum::<f64>()).sum();
    Ok(1.0 / (1.0 + total / profile.voters() as f64))
}

fn coordinate_cost(grades: &[f64], x: f64, p: f64) -> f64 {
    grades.iter().map(|e| abs_pow(e - x, p)).sum()
}

/// Minimizes a unimodal function on `[lo, hi]` to within `tol`.
fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut a = hi - INV_PHI * (hi - lo);
    let mut b = lo + INV_PHI * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > tol {
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - INV_PHI * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + INV_PHI * (hi - lo);
            fb = f(b);
        }
    }
    let mid = 0.5 * (lo + hi);
    // the interval endpoints of [0, 1] are never probed by the bracketing points
    [mid, lo, hi].into_iter().fold(mid, |best, x| if f(x) < f(best) { x } else { best })
}

/// The point of `[0,1]^d` of maximal weighted L^p depth (`p >= 1`).
pub fn deepest_point(profile: &EvaluationProfile, spec: DepthSpec) -> Result<Vec<f64>> {
    spec.check_supported()?;
    let p = spec.p;
    if p == 2.0 {
        return Ok(candidate_means(profile));
    }
    let columns = sorted_columns(profile);
    if p == 1.0 {
        return Ok(columns.iter().map(|c| lower_median_sorted(c)).collect());
    }
    Ok(columns
        .iter()
        .map(|grades| {
            // the minimizer lies within the range of the grades
            let (lo, hi) = (grades[0], grades[grades.len() - 1]);
            if hi - lo <= GOLDEN_TOLERANCE {
                return lo;
            }
            golden_section(|x| coordinate_cost(grades, x, p), lo, hi, GOLDEN_TOLERANCE)
        })
        .collect())
}

/// Scores are the deepest point's coordinates; argmax with index tie-break.
pub fn deepest_voting_winner(profile: &EvaluationProfile, spec: DepthSpec) -> Result<ElectionResult> {
    let point = deepest_point(profile, spec)?;
    Ok(argmax_result(Rule::Deepest(spec), point))
}
