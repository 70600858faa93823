//! The six profile simulation models and their parameter samplers.
//!
//! All generators draw voter by voter (row-major) from the supplied
//! [`SeededRandomSource`], so a `(config, n, d, seed, stream)` tuple fully
//! determines the output.

mod spatial;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::CorrelationMatrix;
use crate::math::normal_cdf;
use crate::profile::{EvaluationProfile, GradeScale};
use crate::rng::SeededRandomSource;

pub use spatial::{default_dimension, gen_spatial, DistanceMapping, SpatialScene};

/// Standard deviation used by the normal model unless overridden.
pub const DEFAULT_SIGMA: f64 = 0.25;

fn check_dims(n: usize, d: usize) -> Result<()> {
    if n == 0 || d == 0 {
        return Err(Error::dimension(format!("need n >= 1 voters and d >= 1 candidates, got {n}x{d}")));
    }
    Ok(())
}

/// Independent `U[0,1]` evaluations.
pub fn gen_eic_uniform(n: usize, d: usize, rng: &mut SeededRandomSource) -> Result<EvaluationProfile> {
    check_dims(n, d)?;
    let values = (0..n * d).map(|_| rng.uniform()).collect();
    EvaluationProfile::from_values(n, d, values, GradeScale::Continuous)
}

/// Per voter: scores `{0, U(1), ..., U(d-2), 1}` (sorted uniforms between the two
/// endpoints) dealt to the candidates by an independent uniform permutation.
///
/// Each row therefore has an exact 0 and an exact 1, and the row is exchangeable
/// across candidates.
pub fn gen_eic_dirichlet(n: usize, d: usize, rng: &mut SeededRandomSource) -> Result<EvaluationProfile> {
    check_dims(n, d)?;
    if d < 2 {
        return Err(Error::parameter("the Dirichlet model needs d >= 2 to place both a 0 and a 1"));
    }
    let mut values = Vec::with_capacity(n * d);
    let mut scores = vec![0.0; d];
    for _ in 0..n {
        scores[0] = 0.0;
        for s in &mut scores[1..d - 1] {
            *s = rng.uniform();
        }
        scores[1..d - 1].sort_unstable_by(f64::total_cmp);
        scores[d - 1] = 1.0;
        rng.shuffle(&mut scores);
        values.extend_from_slice(&scores);
    }
    EvaluationProfile::from_values(n, d, values, GradeScale::Continuous)
}

/// Gaussian copula: each row is `Φ(L g)` with `L Lᵀ = correlation` and `g` iid standard normal.
pub fn gen_eiac_copula(
    n: usize,
    d: usize,
    correlation: &CorrelationMatrix,
    rng: &mut SeededRandomSource,
) -> Result<EvaluationProfile> {
    check_dims(n, d)?;
    if correlation.dim() != d {
        return Err(Error::dimension(format!(
            "correlation matrix is {0}x{0} but there are {d} candidates",
            correlation.dim()
        )));
    }
    let l = correlation.cholesky()?;
    let mut values = Vec::with_capacity(n * d);
    let mut g = vec![0.0; d];
    for _ in 0..n {
        for x in g.iter_mut() {
            *x = rng.standard_normal();
        }
        for i in 0..d {
            let z: f64 = (0..=i).map(|k| l[i * d + k] * g[k]).sum();
            values.push(normal_cdf(z));
        }
    }
    EvaluationProfile::from_values(n, d, values, GradeScale::Continuous)
}

/// See [`CorrelationMatrix::random`].
pub fn random_correlation_matrix(d: usize, rng: &mut SeededRandomSource) -> Result<CorrelationMatrix> {
    CorrelationMatrix::random(d, rng)
}

/// Clipped normal: `e_ij = clamp(s_ij, 0, 1)` with `s_ij ~ N(means[i], sigma)`.
pub fn gen_eic_normal(
    n: usize,
    d: usize,
    means: &[f64],
    sigma: f64,
    rng: &mut SeededRandomSource,
) -> Result<EvaluationProfile> {
    check_dims(n, d)?;
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::parameter(format!("sigma must be positive, got {sigma}")));
    }
    if means.len() != d {
        return Err(Error::dimension(format!("{} means for {d} candidates", means.len())));
    }
    if let Some(m) = means.iter().find(|m| !(0.0..=1.0).contains(*m)) {
        return Err(Error::parameter(format!("candidate mean {m} is outside [0, 1]")));
    }
    let mut values = Vec::with_capacity(n * d);
    for _ in 0..n {
        for &mu in means {
            values.push(rng.normal(mu, sigma).clamp(0.0, 1.0));
        }
    }
    EvaluationProfile::from_values(n, d, values, GradeScale::Continuous)
}

/// `d` independent `U[0,1]` candidate means.
pub fn sample_candidate_means(d: usize, rng: &mut SeededRandomSource) -> Vec<f64> {
    (0..d).map(|_| rng.uniform()).collect()
}

/// Independent `Beta(alpha_i, beta_i)` evaluations.
pub fn gen_eic_beta(
    n: usize,
    d: usize,
    params: &[(f64, f64)],
    rng: &mut SeededRandomSource,
) -> Result<EvaluationProfile> {
    check_dims(n, d)?;
    if params.len() != d {
        return Err(Error::dimension(format!("{} Beta parameter pairs for {d} candidates", params.len())));
    }
    for (i, &(a, b)) in params.iter().enumerate() {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::parameter(format!("candidate {i}: Beta({a}, {b}) needs positive parameters")));
        }
    }
    let mut values = Vec::with_capacity(n * d);
    for _ in 0..n {
        for &(a, b) in params {
            values.push(rng.beta(a, b));
        }
    }
    EvaluationProfile::from_values(n, d, values, GradeScale::Continuous)
}

fn quadrant_draw(rng: &mut SeededRandomSource) -> f64 {
    if rng.uniform() < 0.5 {
        rng.uniform_range(0.5, 1.0)
    } else {
        rng.uniform_range(1.0, 5.0)
    }
}

/// For each candidate and each of α, β independently: `U[0.5, 1]` or `U[1, 5]` with
/// probability 1/2 each.
pub fn sample_beta_params(d: usize, rng: &mut SeededRandomSource) -> Vec<(f64, f64)> {
    (0..d)
        .map(|_| {
            let a = quadrant_draw(rng);
            let b = quadrant_draw(rng);
            (a, b)
        })
        .collect()
}

/// Where the copula model gets its correlation matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum CorrelationSource {
    Matrix(CorrelationMatrix),
    /// One coefficient for every pair.
    Constant(f64),
    /// A fresh [`random_correlation_matrix`] per profile.
    Random,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MeanSource {
    Fixed(Vec<f64>),
    /// [`sample_candidate_means`] per profile.
    SampleUniform,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BetaSource {
    Fixed(Vec<(f64, f64)>),
    /// [`sample_beta_params`] per profile.
    SampleQuadrant,
}

/// One of the six simulation models with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorConfig {
    Uniform,
    Dirichlet,
    Copula {
        correlation: CorrelationSource,
    },
    Normal {
        means: MeanSource,
        sigma: f64,
    },
    Beta {
        params: BetaSource,
    },
    /// `dim: None` picks [`default_dimension`] for the candidate count.
    Spatial {
        dim: Option<usize>,
        mapping: DistanceMapping,
    },
}

/// A generated profile plus everything that was drawn to produce it.
#[derive(Debug, Clone)]
pub struct Generated {
    pub profile: EvaluationProfile,
    /// The model with every sampled parameter filled in.
    pub resolved: GeneratorConfig,
    pub scene: Option<SpatialScene>,
}

impl GeneratorConfig {
    pub fn name(&self) -> &'static str {
        match self {
            GeneratorConfig::Uniform => "uniform",
            GeneratorConfig::Dirichlet => "dirichlet",
            GeneratorConfig::Copula { .. } => "copula",
            GeneratorConfig::Normal { .. } => "normal",
            GeneratorConfig::Beta { .. } => "beta",
            GeneratorConfig::Spatial { .. } => "spatial",
        }
    }

    /// Checks every parameter that can be checked without drawing.
    pub fn validate(&self, n: usize, d: usize) -> Result<()> {
        check_dims(n, d)?;
        match self {
            GeneratorConfig::Uniform => Ok(()),
            GeneratorConfig::Dirichlet if d < 2 => {
                Err(Error::parameter("the Dirichlet model needs d >= 2 to place both a 0 and a 1"))
            }
            GeneratorConfig::Dirichlet => Ok(()),
            GeneratorConfig::Copula { correlation } => match correlation {
                CorrelationSource::Matrix(m) if m.dim() != d => Err(Error::dimension(format!(
                    "correlation matrix is {0}x{0} but there are {d} candidates",
                    m.dim()
                ))),
                CorrelationSource::Constant(rho) => CorrelationMatrix::constant(d, *rho).map(|_| ()),
                _ => Ok(()),
            },
            GeneratorConfig::Normal { means, sigma } => {
                if !(*sigma > 0.0 && sigma.is_finite()) {
                    return Err(Error::parameter(format!("sigma must be positive, got {sigma}")));
                }
                match means {
                    MeanSource::Fixed(m) if m.len() != d => {
                        Err(Error::dimension(format!("{} means for {d} candidates", m.len())))
                    }
                    MeanSource::Fixed(m) if m.iter().any(|v| !(0.0..=1.0).contains(v)) => {
                        Err(Error::parameter("candidate means must lie in [0, 1]"))
                    }
                    _ => Ok(()),
                }
            }
            GeneratorConfig::Beta { params } => match params {
                BetaSource::Fixed(p) if p.len() != d => {
                    Err(Error::dimension(format!("{} Beta parameter pairs for {d} candidates", p.len())))
                }
                BetaSource::Fixed(p) if p.iter().any(|&(a, b)| !(a > 0.0 && b > 0.0)) => {
                    Err(Error::parameter("Beta parameters must be positive"))
                }
                _ => Ok(()),
            },
            GeneratorConfig::Spatial { dim, mapping } => {
                if *dim == Some(0) {
                    return Err(Error::parameter("spatial dimension must be at least 1"));
                }
                mapping.validate()
            }
        }
    }

    /// Samples any random parameters, then the profile, from the same stream.
    pub fn generate(&self, n: usize, d: usize, rng: &mut SeededRandomSource) -> Result<Generated> {
        self.validate(n, d)?;
        let (profile, resolved, scene) = match self {
            GeneratorConfig::Uniform => (gen_eic_uniform(n, d, rng)?, self.clone(), None),
            GeneratorConfig::Dirichlet => (gen_eic_dirichlet(n, d, rng)?, self.clone(), None),
            GeneratorConfig::Copula { correlation } => {
                let matrix = match correlation {
                    CorrelationSource::Matrix(m) => m.clone(),
                    CorrelationSource::Constant(rho) => CorrelationMatrix::constant(d, *rho)?,
                    CorrelationSource::Random => random_correlation_matrix(d, rng)?,
                };
                let profile = gen_eiac_copula(n, d, &matrix, rng)?;
                let resolved = GeneratorConfig::Copula { correlation: CorrelationSource::Matrix(matrix) };
                (profile, resolved, None)
            }
            GeneratorConfig::Normal { means, sigma } => {
                let means = match means {
                    MeanSource::Fixed(m) => m.clone(),
                    MeanSource::SampleUniform => sample_candidate_means(d, rng),
                };
                let profile = gen_eic_normal(n, d, &means, *sigma, rng)?;
                let resolved = GeneratorConfig::Normal { means: MeanSource::Fixed(means), sigma: *sigma };
                (profile, resolved, None)
            }
            GeneratorConfig::Beta { params } => {
                let params = match params {
                    BetaSource::Fixed(p) => p.clone(),
                    BetaSource::SampleQuadrant => sample_beta_params(d, rng),
                };
                let profile = gen_eic_beta(n, d, &params, rng)?;
                (profile, GeneratorConfig::Beta { params: BetaSource::Fixed(params) }, None)
            }
            GeneratorConfig::Spatial { dim, mapping } => {
                let dim = dim.unwrap_or_else(|| default_dimension(d));
                let (profile, scene) = gen_spatial(n, d, dim, *mapping, rng)?;
                let resolved = GeneratorConfig::Spatial { dim: Some(dim), mapping: *mapping };
                (profile, resolved, Some(scene))
            }
        };
        Ok(Generated { profile, resolved, scene })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rng(seed: u64) -> SeededRandomSource {
        SeededRandomSource::new(seed, 0)
    }

    #[test]
    fn dimension_errors() {
        assert!(matches!(gen_eic_uniform(0, 3, &mut rng(1)), Err(Error::Dimension(_))));
        assert!(matches!(gen_eic_dirichlet(5, 1, &mut rng(1)), Err(Error::Parameter(_))));
        assert!(matches!(gen_eic_normal(5, 1, &[0.5], 0.0, &mut rng(1)), Err(Error::Parameter(_))));
        assert!(matches!(gen_eic_normal(5, 2, &[0.5], 0.1, &mut rng(1)), Err(Error::Dimension(_))));
        assert!(matches!(gen_eic_beta(5, 1, &[(0.0, 1.0)], &mut rng(1)), Err(Error::Parameter(_))));
        let id = CorrelationMatrix::identity(3).unwrap();
        assert!(matches!(gen_eiac_copula(5, 2, &id, &mut rng(1)), Err(Error::Dimension(_))));
    }

    #[test]
    fn single_uniform_draw_in_range() {
        let p = gen_eic_uniform(1, 1, &mut rng(99)).unwrap();
        assert!((0.0..=1.0).contains(&p.get(0, 0)));
    }

    #[test]
    fn same_seed_same_profile() {
        let configs = [
            GeneratorConfig::Uniform,
            GeneratorConfig::Dirichlet,
            GeneratorConfig::Copula { correlation: CorrelationSource::Random },
            GeneratorConfig::Normal { means: MeanSource::SampleUniform, sigma: DEFAULT_SIGMA },
            GeneratorConfig::Beta { params: BetaSource::SampleQuadrant },
            GeneratorConfig::Spatial { dim: None, mapping: DistanceMapping::Linear },
        ];
        for c in &configs {
            let a = c.generate(50, 4, &mut rng(17)).unwrap();
            let b = c.generate(50, 4, &mut rng(17)).unwrap();
            assert_eq!(a.profile, b.profile, "{}", c.name());
            assert_eq!(a.resolved, b.resolved);
            assert!(a.profile.validate().is_empty(), "{}", c.name());
            let other = c.generate(50, 4, &mut rng(18)).unwrap();
            assert_ne!(a.profile, other.profile);
        }
    }

    #[test]
    fn dirichlet_two_candidates_is_a_permutation_of_endpoints() {
        let p = gen_eic_dirichlet(200, 2, &mut rng(4)).unwrap();
        let mut first_one = 0;
        for row in p.rows() {
            assert!(row == [0.0, 1.0] || row == [1.0, 0.0]);
            first_one += usize::from(row[0] == 1.0);
        }
        assert!((70..130).contains(&first_one));
    }

    #[test]
    fn degenerate_normal() {
        let p = gen_eic_normal(100, 2, &[0.3, 0.8], 1e-9, &mut rng(5)).unwrap();
        for row in p.rows() {
            assert!(libm::fabs(row[0] - 0.3) < 1e-6);
            assert!(libm::fabs(row[1] - 0.8) < 1e-6);
        }
    }

    #[test]
    fn beta_params_supports() {
        let params = sample_beta_params(1000, &mut rng(6));
        for (a, b) in params {
            assert!((0.5..=5.0).contains(&a) && (0.5..=5.0).contains(&b));
        }
        assert_eq!(sample_beta_params(7, &mut rng(1)), sample_beta_params(7, &mut rng(1)));
    }

    #[test]
    fn beta_interior_for_shapes_at_least_one() {
        let p = gen_eic_beta(2000, 2, &[(1.0, 1.0), (2.0, 3.5)], &mut rng(7)).unwrap();
        assert!(p.values().iter().all(|&e| e > 0.0 && e < 1.0));
    }

    #[test]
    fn resolved_config_records_sampled_parameters() {
        let g = GeneratorConfig::Normal { means: MeanSource::SampleUniform, sigma: 0.25 }
            .generate(10, 3, &mut rng(2))
            .unwrap();
        match g.resolved {
            GeneratorConfig::Normal { means: MeanSource::Fixed(m), sigma } => {
                assert_eq!(m, sample_candidate_means(3, &mut rng(2)));
                assert_eq!(sigma, 0.25);
            }
            other => panic!("{other:?}"),
        }
        let g = GeneratorConfig::Spatial { dim: None, mapping: DistanceMapping::Linear }
            .generate(5, 6, &mut rng(2))
            .unwrap();
        assert!(matches!(g.resolved, GeneratorConfig::Spatial { dim: Some(3), .. }));
        assert_eq!(g.scene.unwrap().dim(), 3);
    }

    #[test]
    fn config_validation() {
        let bad_rho = GeneratorConfig::Copula { correlation: CorrelationSource::Constant(-0.9) };
        assert!(bad_rho.validate(10, 3).is_err());
        let bad_sigma = GeneratorConfig::Normal { means: MeanSource::SampleUniform, sigma: -1.0 };
        assert!(bad_sigma.validate(10, 3).is_err());
        let bad_dim = GeneratorConfig::Spatial { dim: Some(0), mapping: DistanceMapping::Linear };
        assert!(bad_dim.validate(10, 3).is_err());
        assert!(GeneratorConfig::Dirichlet.validate(10, 1).is_err());
    }
}
