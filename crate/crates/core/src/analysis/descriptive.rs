use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::mean;
use crate::profile::EvaluationProfile;

pub const DEFAULT_BINS: usize = 20;

/// Grade histogram of one candidate: equal-width interior bins on `(0, 1)` plus
/// separate counts for exact 0 and exact 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HistogramData {
    pub candidate: usize,
    pub zero_atom: usize,
    pub one_atom: usize,
    pub counts: Vec<usize>,
}

impl HistogramData {
    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    /// `[low, high)` of interior bin `k`.
    pub fn bin_edges(&self, k: usize) -> (f64, f64) {
        let b = self.bins() as f64;
        (k as f64 / b, (k + 1) as f64 / b)
    }

    pub fn total(&self) -> usize {
        self.zero_atom + self.one_atom + self.counts.iter().sum::<usize>()
    }
}

pub fn histogram(profile: &EvaluationProfile, candidate: usize, bins: usize) -> Result<HistogramData> {
    if candidate >= profile.candidates() {
        return Err(Error::Index { index: candidate, len: profile.candidates() });
    }
    if bins == 0 {
        return Err(Error::parameter("a histogram needs at least one bin"));
    }
    let mut h = HistogramData { candidate, zero_atom: 0, one_atom: 0, counts: vec![0; bins] };
    for row in profile.rows() {
        let e = row[candidate];
        if e <= 0.0 {
            h.zero_atom += 1;
        } else if e >= 1.0 {
            h.one_atom += 1;
        } else {
            let k = ((e * bins as f64) as usize).min(bins - 1);
            h.counts[k] += 1;
        }
    }
    Ok(h)
}

/// `(e_a, e_b)` for every voter, in row order.
pub fn pairwise_scatter(profile: &EvaluationProfile, a: usize, b: usize) -> Result<Vec<(f64, f64)>> {
    let d = profile.candidates();
    for i in [a, b] {
        if i >= d {
            return Err(Error::Index { index: i, len: d });
        }
    }
    if a == b {
        return Err(Error::parameter("a scatter needs two different candidates"));
    }
    Ok(profile.rows().map(|r| (r[a], r[b])).collect())
}

/// Pearson correlation matrix of the candidate columns.
///
/// Entries involving a zero-variance column are `None`, including its diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationEstimate {
    pub dim: usize,
    pub values: Vec<Option<f64>>,
    /// Candidates whose column has zero variance.
    pub undefined: Vec<usize>,
}

impl CorrelationEstimate {
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.values[i * self.dim + j]
    }
}

pub(crate) fn pearson_columns(columns: &[Vec<f64>]) -> CorrelationEstimate {
    let d = columns.len();
    let centered: Vec<Vec<f64>> = columns
        .iter()
        .map(|c| {
            let m = mean(c);
            c.iter().map(|x| x - m).collect()
        })
        .collect();
    let norms: Vec<f64> = centered.iter().map(|c| libm::sqrt(c.iter().map(|x| x * x).sum())).collect();
    let undefined: Vec<usize> = (0..d).filter(|&i| norms[i] == 0.0).collect();
    let mut values = vec![None; d * d];
    for i in 0..d {
        if norms[i] == 0.0 {
            continue;
        }
        values[i * d + i] = Some(1.0);
        for j in 0..i {
            if norms[j] == 0.0 {
                continue;
            }
            let dot: f64 = centered[i].iter().zip(&centered[j]).map(|(x, y)| x * y).sum();
            let r = (dot / (norms[i] * norms[j])).clamp(-1.0, 1.0);
            values[i * d + j] = Some(r);
            values[j * d + i] = Some(r);
        }
    }
    CorrelationEstimate { dim: d, values, undefined }
}

pub fn empirical_correlation(profile: &EvaluationProfile) -> Result<CorrelationEstimate> {
    if profile.voters() < 2 {
        return Err(Error::dimension("correlation needs at least two voters"));
    }
    let columns: Vec<Vec<f64>> = (0..profile.candidates()).map(|i| profile.column(i)).collect();
    Ok(pearson_columns(&columns))
}
