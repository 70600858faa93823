//! Distributional checks of the simulation models at fixed seeds.

use evalvote_core::analysis::{
    chi_square_statistic, ks_critical_1pct, ks_two_sample_critical_1pct, ks_two_sample_statistic, ks_uniform_statistic,
};
use evalvote_core::generators::{
    gen_eiac_copula, gen_eic_beta, gen_eic_dirichlet, gen_eic_normal, gen_eic_uniform, gen_spatial,
    random_correlation_matrix, sample_beta_params, sample_candidate_means, BetaSource, CorrelationSource,
    DistanceMapping, GeneratorConfig, MeanSource,
};
use evalvote_core::math::normal_cdf;
use evalvote_core::rules::profile_to_rankings;
use evalvote_core::{CorrelationMatrix, EvaluationProfile, SeededRandomSource};

fn rng(seed: u64) -> SeededRandomSource {
    SeededRandomSource::new(seed, 0)
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn fraction(xs: &[f64], pred: impl Fn(f64) -> bool) -> f64 {
    xs.iter().filter(|&&x| pred(x)).count() as f64 / xs.len() as f64
}

/// Ordinal ranks, for the Spearman oracle (continuous data has no ties).
fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].partial_cmp(&xs[b]).unwrap());
    let mut r = vec![0.0; xs.len()];
    for (pos, &i) in idx.iter().enumerate() {
        r[i] = pos as f64 + 1.0;
    }
    r
}

fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let (ma, mb) = (mean(a), mean(b));
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}

#[test]
fn uniform_means_and_margins() {
    let n = 10_000;
    let p = gen_eic_uniform(n, 3, &mut rng(1)).unwrap();
    for i in 0..3 {
        let col = p.column(i);
        let m = mean(&col);
        assert!((0.49..=0.51).contains(&m), "candidate {i}: mean {m}");
        assert!(ks_uniform_statistic(&col).unwrap() < ks_critical_1pct(n));
    }
}

#[test]
fn every_generator_output_validates() {
    let configs = [
        GeneratorConfig::Uniform,
        GeneratorConfig::Dirichlet,
        GeneratorConfig::Copula { correlation: CorrelationSource::Random },
        GeneratorConfig::Copula { correlation: CorrelationSource::Constant(0.95) },
        GeneratorConfig::Normal { means: MeanSource::SampleUniform, sigma: 0.25 },
        GeneratorConfig::Normal { means: MeanSource::SampleUniform, sigma: 3.0 },
        GeneratorConfig::Beta { params: BetaSource::SampleQuadrant },
        GeneratorConfig::Spatial { dim: None, mapping: DistanceMapping::Linear },
        GeneratorConfig::Spatial { dim: Some(1), mapping: DistanceMapping::default_sigmoid() },
    ];
    for (k, c) in configs.iter().enumerate() {
        for d in [2, 5, 8] {
            let g = c.generate(500, d, &mut rng(k as u64)).unwrap();
            assert!(g.profile.validate().is_empty(), "{} d={d}", c.name());
            assert_eq!((g.profile.voters(), g.profile.candidates()), (500, d));
        }
    }
}

#[test]
fn dirichlet_endpoint_law() {
    let n = 10_000;
    let p = gen_eic_dirichlet(n, 5, &mut rng(2)).unwrap();
    for row in p.rows() {
        assert_eq!(row.iter().copied().fold(f64::INFINITY, f64::min), 0.0);
        assert_eq!(row.iter().copied().fold(f64::NEG_INFINITY, f64::max), 1.0);
    }
    let tol = 3.0 * (0.2f64 * 0.8 / n as f64).sqrt();
    for i in 0..5 {
        let col = p.column(i);
        let zeros = fraction(&col, |e| e == 0.0);
        let ones = fraction(&col, |e| e == 1.0);
        assert!((zeros - 0.2).abs() <= 0.02 && (zeros - 0.2).abs() <= tol, "zeros {zeros}");
        assert!((ones - 0.2).abs() <= tol, "ones {ones}");
    }
}

#[test]
fn dirichlet_interior_scores_are_uniform() {
    // with the endpoints removed, each interior score is a uniform order statistic mixture
    // whose pooled distribution is U(0,1)
    let p = gen_eic_dirichlet(5_000, 4, &mut rng(3)).unwrap();
    let interior: Vec<f64> = p.values().iter().copied().filter(|&e| e > 0.0 && e < 1.0).collect();
    assert_eq!(interior.len(), 10_000);
    assert!(ks_uniform_statistic(&interior).unwrap() < ks_critical_1pct(interior.len()));
}

#[test]
fn copula_identity_margins_pass_ks() {
    let n = 10_000;
    let id = CorrelationMatrix::identity(4).unwrap();
    let p = gen_eiac_copula(n, 4, &id, &mut rng(4)).unwrap();
    for i in 0..4 {
        assert!(ks_uniform_statistic(&p.column(i)).unwrap() < ks_critical_1pct(n));
    }
}

#[test]
fn copula_spearman_matches_rank_identity() {
    let n = 10_000;
    let r = CorrelationMatrix::constant(2, 0.9).unwrap();
    let p = gen_eiac_copula(n, 2, &r, &mut rng(5)).unwrap();
    let expected = 6.0 / std::f64::consts::PI * (0.9f64 / 2.0).asin();
    assert!((expected - 0.891_456).abs() < 1e-6);
    let spearman = pearson(&ranks(&p.column(0)), &ranks(&p.column(1)));
    assert!((spearman - expected).abs() < 0.03, "spearman {spearman} vs {expected}");

    // independent Monte Carlo of the same identity: raw bivariate normals
    let mut g = rng(6);
    let (mut a, mut b) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for _ in 0..n {
        let z1 = g.standard_normal();
        let z2 = 0.9 * z1 + (1.0f64 - 0.81).sqrt() * g.standard_normal();
        a.push(z1);
        b.push(z2);
    }
    let mc = pearson(&ranks(&a), &ranks(&b));
    assert!((mc - expected).abs() < 0.03, "monte carlo {mc}");
}

#[test]
fn one_dimensional_copula_is_uniform() {
    let n = 10_000;
    let one = CorrelationMatrix::identity(1).unwrap();
    let c = gen_eiac_copula(n, 1, &one, &mut rng(7)).unwrap();
    let u = gen_eic_uniform(n, 1, &mut rng(8)).unwrap();
    let d = ks_two_sample_statistic(c.values(), u.values()).unwrap();
    assert!(d < ks_two_sample_critical_1pct(n, n), "{d}");
}

#[test]
fn copula_random_correlation_generates() {
    let mut g = rng(9);
    for d in 1..7 {
        let r = random_correlation_matrix(d, &mut g).unwrap();
        let p = gen_eiac_copula(50, d, &r, &mut g).unwrap();
        assert!(p.validate().is_empty());
    }
}

#[test]
fn clipped_normal_truncation_mass() {
    let n = 10_000;
    let p = gen_eic_normal(n, 1, &[0.5], 0.25, &mut rng(10)).unwrap();
    let zeros = fraction(p.values(), |e| e == 0.0);
    let ones = fraction(p.values(), |e| e == 1.0);
    let target = normal_cdf(-2.0);
    assert!((target - 0.02275).abs() < 1e-5);
    assert!((zeros - target).abs() <= 0.006, "zeros {zeros}");
    let sd = (target * (1.0 - target) / n as f64).sqrt();
    // P(0) and P(1) are equal at mu = 0.5; their difference has sd <= sqrt(2) sd
    assert!((zeros - ones).abs() <= 3.0 * 2f64.sqrt() * sd, "{zeros} vs {ones}");
}

#[test]
fn clipped_normal_asymmetric_atoms() {
    let n = 20_000;
    for (seed, mu) in [(11u64, 0.2), (12, 0.85)] {
        let p = gen_eic_normal(n, 1, &[mu], 0.25, &mut rng(seed)).unwrap();
        let p0 = normal_cdf(-mu / 0.25);
        let p1 = normal_cdf((mu - 1.0) / 0.25);
        let zeros = fraction(p.values(), |e| e == 0.0);
        let ones = fraction(p.values(), |e| e == 1.0);
        assert!((zeros - p0).abs() <= 3.0 * (p0 * (1.0 - p0) / n as f64).sqrt(), "mu {mu}: {zeros} vs {p0}");
        assert!((ones - p1).abs() <= 3.0 * (p1 * (1.0 - p1) / n as f64).sqrt(), "mu {mu}: {ones} vs {p1}");
    }
}

#[test]
fn candidate_means_sampler() {
    let m = sample_candidate_means(10_000, &mut rng(13));
    assert!(m.iter().all(|x| (0.0..=1.0).contains(x)));
    assert!((0.49..=0.51).contains(&mean(&m)));
    assert_eq!(sample_candidate_means(5, &mut rng(13)), m[..5]);
}

#[test]
fn beta_one_one_is_uniform() {
    let n = 10_000;
    let p = gen_eic_beta(n, 1, &[(1.0, 1.0)], &mut rng(14)).unwrap();
    assert!(ks_uniform_statistic(p.values()).unwrap() < ks_critical_1pct(n));
}

#[test]
fn beta_two_two_moments() {
    let n = 10_000;
    let p = gen_eic_beta(n, 1, &[(2.0, 2.0)], &mut rng(15)).unwrap();
    let xs = p.values();
    let m = mean(xs);
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64;
    let (a, b) = (2.0, 2.0);
    assert!((m - a / (a + b)).abs() <= 0.01, "{m}");
    assert!((v - a * b / ((a + b) * (a + b) * (a + b + 1.0))).abs() <= 0.005, "{v}");
}

#[test]
fn beta_quadrants_equally_likely() {
    let d = 10_000;
    let params = sample_beta_params(d, &mut rng(16));
    let mut quadrants = [0usize; 4];
    for (a, b) in params {
        quadrants[usize::from(a > 1.0) * 2 + usize::from(b > 1.0)] += 1;
    }
    for q in quadrants {
        let f = q as f64 / d as f64;
        assert!((f - 0.25).abs() <= 0.015, "{quadrants:?}");
    }
}

#[test]
fn spatial_linear_triangle_bound() {
    let mut g = rng(17);
    let mut checked = 0usize;
    for _ in 0..20 {
        let (p, scene) = gen_spatial(200, 6, 2, DistanceMapping::Linear, &mut g).unwrap();
        for j in 0..p.voters() {
            for i in 0..6 {
                for k in 0..6 {
                    let (a, b) = (p.get(j, i), p.get(j, k));
                    if i == k || a <= 0.0 || b <= 0.0 {
                        continue;
                    }
                    let dist = euclid(scene.candidate(i), scene.candidate(k));
                    assert!((1.0 - a) + (1.0 - b) >= dist - 1e-12);
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 10_000);
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

#[test]
fn spatial_scores_follow_distances() {
    let (p, scene) = gen_spatial(50, 4, 3, DistanceMapping::default_sigmoid(), &mut rng(18)).unwrap();
    for j in 0..50 {
        for i in 0..4 {
            let dist = euclid(scene.voter(j), scene.candidate(i));
            let expected = 1.0 / (1.0 + (5.0 * (2.0 * dist - 1.0)).exp());
            assert!((p.get(j, i) - expected).abs() < 1e-15);
        }
    }
}

#[test]
fn uniform_rankings_are_impartial_culture() {
    let n = 10_000;
    let p = gen_eic_uniform(n, 3, &mut rng(19)).unwrap();
    let mut counts = [0usize; 6];
    for r in profile_to_rankings(&p) {
        let ranks = r.ranks();
        assert_eq!(r.classes(), 3, "continuous draws never tie");
        // index the permutation by (position of best, position of middle)
        let order: Vec<usize> = (1..=3).map(|t| ranks.iter().position(|&x| x == t).unwrap()).collect();
        let idx = match (order[0], order[1]) {
            (0, 1) => 0,
            (0, 2) => 1,
            (1, 0) => 2,
            (1, 2) => 3,
            (2, 0) => 4,
            _ => 5,
        };
        counts[idx] += 1;
    }
    let chi = chi_square_statistic(&counts, &[n as f64 / 6.0; 6]).unwrap();
    assert!(chi < 15.09, "chi-square {chi}: {counts:?}");
}

#[test]
fn same_seed_identical_profiles() {
    let a: EvaluationProfile = gen_eic_uniform(20, 3, &mut rng(20)).unwrap();
    let b = gen_eic_uniform(20, 3, &mut rng(20)).unwrap();
    assert_eq!(a, b);
}
