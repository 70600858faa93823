use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::profile::{EvaluationProfile, GradeScale};
use crate::rng::SeededRandomSource;

/// Non-increasing map from voter-candidate distance to an evaluation in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistanceMapping {
    /// `max(0, 1 - dist)`
    Linear,
    /// `1 / (1 + exp(lambda * (beta * dist - 1)))`
    Sigmoid { lambda: f64, beta: f64 },
}

impl DistanceMapping {
    pub const DEFAULT_LAMBDA: f64 = 5.0;
    pub const DEFAULT_BETA: f64 = 2.0;

    pub fn default_sigmoid() -> Self {
        DistanceMapping::Sigmoid { lambda: Self::DEFAULT_LAMBDA, beta: Self::DEFAULT_BETA }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            DistanceMapping::Linear => Ok(()),
            DistanceMapping::Sigmoid { lambda, beta } if lambda > 0.0 && beta > 0.0 => Ok(()),
            DistanceMapping::Sigmoid { lambda, beta } => {
                Err(Error::parameter(format!("sigmoid mapping needs lambda > 0 and beta > 0, got {lambda} and {beta}")))
            }
        }
    }

    pub fn score(&self, distance: f64) -> f64 {
        match *self {
            DistanceMapping::Linear => (1.0 - distance).max(0.0),
            DistanceMapping::Sigmoid { lambda, beta } => 1.0 / (1.0 + libm::exp(lambda * (beta * distance - 1.0))),
        }
    }
}

/// Two dimensions below five candidates, three from five on.
pub fn default_dimension(candidates: usize) -> usize {
    if candidates < 5 {
        2
    } else {
        3
    }
}

/// Voter and candidate positions in `[0,1]^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialScene {
    dim: usize,
    voters: Vec<f64>,
    candidates: Vec<f64>,
    mapping: DistanceMapping,
}

impl SpatialScene {
    pub fn new(dim: usize, voters: Vec<f64>, candidates: Vec<f64>, mapping: DistanceMapping) -> Result<Self> {
        if dim == 0 || voters.len() % dim != 0 || candidates.len() % dim != 0 {
            return Err(Error::dimension("coordinate buffers must be whole points of the scene dimension"));
        }
        if voters.iter().chain(&candidates).any(|c| !(0.0..=1.0).contains(c)) {
            return Err(Error::parameter("scene coordinates must lie in [0, 1]"));
        }
        mapping.validate()?;
        Ok(SpatialScene { dim, voters, candidates, mapping })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mapping(&self) -> DistanceMapping {
        self.mapping
    }

    pub fn voter_count(&self) -> usize {
        self.voters.len() / self.dim
    }

    pub fn candidate_count(&self) -> usize {
        self.candidates.len() / self.dim
    }

    pub fn voter(&self, j: usize) -> &[f64] {
        &self.voters[j * self.dim..(j + 1) * self.dim]
    }

    pub fn candidate(&self, i: usize) -> &[f64] {
        &self.candidates[i * self.dim..(i + 1) * self.dim]
    }

    /// The evaluation profile implied by the positions and the mapping.
    pub fn profile(&self) -> Result<EvaluationProfile> {
        let (n, d) = (self.voter_count(), self.candidate_count());
        let mut values = Vec::with_capacity(n * d);
        for j in 0..n {
            for i in 0..d {
                values.push(self.mapping.score(euclidean(self.voter(j), self.candidate(i))));
            }
        }
        EvaluationProfile::from_values(n, d, values, GradeScale::Continuous)
    }
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

/// Candidates, then voters, uniform in the unit hypercube; evaluations from
/// euclidean distance through `mapping`.
pub fn gen_spatial(
    n: usize,
    d: usize,
    dim: usize,
    mapping: DistanceMapping,
    rng: &mut SeededRandomSource,
) -> Result<(EvaluationProfile, SpatialScene)> {
    if n == 0 || d == 0 {
        return Err(Error::dimension(format!("need n >= 1 voters and d >= 1 candidates, got {n}x{d}")));
    }
    if dim == 0 {
        return Err(Error::parameter("spatial dimension must be at least 1"));
    }
    mapping.validate()?;
    let candidates = (0..d * dim).map(|_| rng.uniform()).collect();
    let voters = (0..n * dim).map(|_| rng.uniform()).collect();
    let scene = SpatialScene::new(dim, voters, candidates, mapping)?;
    let profile = scene.profile()?;
    Ok((profile, scene))
}
