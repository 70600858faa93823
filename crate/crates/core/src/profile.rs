use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Lattice membership tolerance for discrete scales.
const LATTICE_TOL: f64 = 1e-9;

/// The grade scale evaluations are expressed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradeScale {
    Continuous,
    /// `k` equally spaced levels `{0, 1/(k-1), ..., 1}`; `k >= 2`.
    Discrete(u32),
}

impl GradeScale {
    pub fn discrete(k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::parameter(format!("a discrete scale needs k >= 2 levels, got {k}")));
        }
        Ok(GradeScale::Discrete(k))
    }

    /// Nearest lattice value under half-up rounding. Continuous scales are the identity.
    pub fn snap(self, value: f64) -> f64 {
        match self {
            GradeScale::Continuous => value,
            GradeScale::Discrete(k) => {
                let steps = f64::from(k - 1);
                libm::floor(value * steps + 0.5) / steps
            }
        }
    }

    fn on_lattice(self, value: f64) -> bool {
        match self {
            GradeScale::Continuous => true,
            GradeScale::Discrete(k) => {
                let scaled = value * f64::from(k - 1);
                libm::fabs(scaled - libm::round(scaled)) <= LATTICE_TOL
            }
        }
    }
}

/// An `n x d` matrix of evaluations: row `j` is voter `j`, column `i` is candidate `i`.
///
/// Stored row-major as `f64` even for discrete scales. Constructors only check the
/// shape; use [`EvaluationProfile::validate`] (or [`EvaluationProfile::validated`])
/// to check the value invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationProfile {
    voters: usize,
    candidates: usize,
    values: Vec<f64>,
    scale: GradeScale,
}

/// One entry that breaks a profile invariant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub voter: usize,
    pub candidate: usize,
    pub value: f64,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// Outside `[0, 1]` (or NaN).
    OutOfRange,
    /// In range but not one of the discrete scale's levels.
    OffLattice,
}

fn check_shape(voters: usize, candidates: usize) -> Result<()> {
    if voters == 0 || candidates == 0 {
        return Err(Error::dimension(format!(
            "profile needs at least one voter and one candidate, got {voters}x{candidates}"
        )));
    }
    Ok(())
}

impl EvaluationProfile {
    /// All-zero profile of the given shape.
    pub fn new(voters: usize, candidates: usize, scale: GradeScale) -> Result<Self> {
        check_shape(voters, candidates)?;
        Ok(EvaluationProfile { voters, candidates, values: vec![0.0; voters * candidates], scale })
    }

    /// Wraps a row-major value buffer of length `voters * candidates`.
    pub fn from_values(voters: usize, candidates: usize, values: Vec<f64>, scale: GradeScale) -> Result<Self> {
        check_shape(voters, candidates)?;
        if values.len() != voters * candidates {
            return Err(Error::dimension(format!(
                "expected {} values for a {voters}x{candidates} profile, got {}",
                voters * candidates,
                values.len()
            )));
        }
        Ok(EvaluationProfile { voters, candidates, values, scale })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R], scale: GradeScale) -> Result<Self> {
        let candidates = rows.first().map_or(0, |r| r.as_ref().len());
        let mut values = Vec::with_capacity(rows.len() * candidates);
        for (j, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != candidates {
                return Err(Error::dimension(format!(
                    "voter {j} has {} evaluations, expected {candidates}",
                    row.len()
                )));
            }
            values.extend_from_slice(row);
        }
        Self::from_values(rows.len(), candidates, values, scale)
    }

    /// Same as `self` but fails with the first violation if the profile is invalid.
    pub fn validated(self) -> Result<Self> {
        match self.validate().first() {
            None => Ok(self),
            Some(v) => Err(Error::parameter(format!(
                "evaluation {} of candidate {} by voter {} violates {:?}",
                v.value, v.candidate, v.voter, v.kind
            ))),
        }
    }

    pub fn voters(&self) -> usize {
        self.voters
    }

    pub fn candidates(&self) -> usize {
        self.candidates
    }

    pub fn scale(&self) -> GradeScale {
        self.scale
    }

    /// Evaluation of `candidate` by `voter`.
    #[inline]
    pub fn get(&self, voter: usize, candidate: usize) -> f64 {
        self.values[voter * self.candidates + candidate]
    }

    #[inline]
    pub fn set(&mut self, voter: usize, candidate: usize, value: f64) {
        self.values[voter * self.candidates + candidate] = value;
    }

    pub fn row(&self, voter: usize) -> &[f64] {
        let start = voter * self.candidates;
        &self.values[start..start + self.candidates]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.candidates)
    }

    /// The grades `candidate` received, in voter order.
    pub fn column(&self, candidate: usize) -> Vec<f64> {
        self.rows().map(|r| r[candidate]).collect()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The same values re-labelled with another scale (no conversion happens).
    pub fn with_scale(mut self, scale: GradeScale) -> Self {
        self.scale = scale;
        self
    }

    /// Keeps only the listed candidate columns, in the listed order.
    pub fn select_candidates(&self, columns: &[usize]) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::dimension("candidate selection is empty"));
        }
        if let Some(&bad) = columns.iter().find(|&&c| c >= self.candidates) {
            return Err(Error::Index { index: bad, len: self.candidates });
        }
        let values = self.rows().flat_map(|r| columns.iter().map(move |&c| r[c])).collect();
        Self::from_values(self.voters, columns.len(), values, self.scale)
    }

    /// Keeps only the listed voters.
    pub fn select_voters(&self, voters: &[usize]) -> Result<Self> {
        if let Some(&bad) = voters.iter().find(|&&j| j >= self.voters) {
            return Err(Error::Index { index: bad, len: self.voters });
        }
        let values = voters.iter().flat_map(|&j| self.row(j).iter().copied()).collect();
        Self::from_values(voters.len(), self.candidates, values, self.scale)
    }

    /// Every out-of-range entry and, for discrete scales, every off-lattice entry.
    pub fn validate(&self) -> Vec<Violation> {
        let mut report = Vec::new();
        for (idx, &value) in self.values.iter().enumerate() {
            let kind = if !(0.0..=1.0).contains(&value) {
                ViolationKind::OutOfRange
            } else if !self.scale.on_lattice(value) {
                ViolationKind::OffLattice
            } else {
                continue;
            };
            report.push(Violation { voter: idx / self.candidates, candidate: idx % self.candidates, value, kind });
        }
        report
    }
}

/// Rounds every entry to the nearest of `k` equally spaced levels (half-up at midpoints).
///
/// The input must be on the continuous scale; relabel a discrete profile with
/// [`EvaluationProfile::with_scale`] first if re-quantizing is intended.
pub fn quantize(profile: &EvaluationProfile, k: u32) -> Result<EvaluationProfile> {
    let scale = GradeScale::discrete(k)?;
    if profile.scale != GradeScale::Continuous {
        return Err(Error::parameter("quantize expects a continuous profile"));
    }
    let values = profile.values.iter().map(|&e| scale.snap(e)).collect();
    EvaluationProfile::from_values(profile.voters, profile.candidates, values, scale)
}
