//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//!
//! Regression reports live in `tests/regression/`; set `EVALVOTE_BLESS=1` to
//! (re)write them from the current build.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use evalvote::json::{to_canonical_string, ToJson};
use evalvote::parallel::run_experiment_parallel;
use evalvote_core::analysis::{
    chi_square_statistic, fit_gaussian_copula, ks_critical_1pct, ks_uniform_statistic, ExperimentConfig,
};
use evalvote_core::generators::{
    gen_eiac_copula, gen_eic_dirichlet, gen_eic_normal, gen_eic_uniform, gen_spatial, BetaSource, CorrelationSource,
    DistanceMapping, GeneratorConfig, MeanSource,
};
use evalvote_core::math::normal_cdf;
use evalvote_core::rules::{
    condorcet_loser, condorcet_winner, deepest_point, deepest_voting_winner, majority_judgement_winner,
    profile_to_rankings, range_winner, wlp_depth, DepthSpec, Rule,
};
use evalvote_core::{CorrelationMatrix, EvaluationProfile, GradeScale, SeededRandomSource};

type Check = Result<String, String>;
type Criterion = fn() -> Check;

fn ensure(cond: bool, message: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message.into())
    }
}

fn spec(p: f64) -> DepthSpec {
    DepthSpec::new(p).unwrap()
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn all_generators() -> Vec<GeneratorConfig> {
    vec![
        GeneratorConfig::Uniform,
        GeneratorConfig::Dirichlet,
        GeneratorConfig::Copula { correlation: CorrelationSource::Random },
        GeneratorConfig::Normal { means: MeanSource::SampleUniform, sigma: 0.25 },
        GeneratorConfig::Beta { params: BetaSource::SampleQuadrant },
        GeneratorConfig::Spatial { dim: None, mapping: DistanceMapping::default_sigmoid() },
    ]
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let p = ok(EvaluationProfile::from_rows(&[[0.6, 0.5], [0.8, 0.7], [0.1, 1.0]], GradeScale::Continuous))?;
    let rankings = profile_to_rankings(&p);
    let cw = condorcet_winner(&rankings);
    let cl = condorcet_loser(&rankings);
    let range = range_winner(&p).winner;
    let mj = majority_judgement_winner(&p).winner;
    let d1 = ok(deepest_voting_winner(&p, spec(1.0)))?.winner;
    let d2 = ok(deepest_voting_winner(&p, spec(2.0)))?.winner;
    let elapsed = start.elapsed();
    ensure(cw == Some(0), format!("condorcet winner {cw:?}, expected x"))?;
    ensure(cl == Some(1), format!("condorcet loser {cl:?}, expected y"))?;
    ensure([range, mj, d1, d2] == [1; 4], format!("range/mj/deepest1/deepest2 = {:?}", [range, mj, d1, d2]))?;
    ensure(elapsed < Duration::from_millis(1), format!("took {elapsed:?}"))?;
    Ok(format!("CW = x, CL = y, range = mj = deepest(1) = deepest(2) = y in {elapsed:?}"))
}

fn untied_medians(p: &EvaluationProfile) -> bool {
    let mut med = majority_judgement_winner(p).scores;
    med.sort_by(|a, b| b.total_cmp(a));
    med.len() < 2 || med[0] != med[1]
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let mut untied_total = 0;
    for (k, model) in all_generators().iter().enumerate() {
        for r in 0..1_000u64 {
            let mut rng = SeededRandomSource::new(2_000 + k as u64, r);
            let p = ok(model.generate(11, 4, &mut rng))?.profile;
            let d2 = ok(deepest_voting_winner(&p, spec(2.0)))?.winner;
            ensure(d2 == range_winner(&p).winner, format!("{} replicate {r}: deepest(2) != range", model.name()))?;
            if untied_medians(&p) {
                untied_total += 1;
                let d1 = ok(deepest_voting_winner(&p, spec(1.0)))?.winner;
                ensure(
                    d1 == majority_judgement_winner(&p).winner,
                    format!("{} replicate {r}: deepest(1) != mj", model.name()),
                )?;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), format!("took {elapsed:?}"))?;
    Ok(format!(
        "6000 profiles: deepest(2) = range always; deepest(1) = mj on all {untied_total} untied profiles, {elapsed:?}"
    ))
}

fn grid_argmax(p: &EvaluationProfile, s: DepthSpec) -> Result<[f64; 2], String> {
    let steps = 1_000;
    let mut best = (f64::NEG_INFINITY, [0.0, 0.0]);
    let mut point = [0.0; 2];
    for a in 0..=steps {
        point[0] = a as f64 / steps as f64;
        for b in 0..=steps {
            point[1] = b as f64 / steps as f64;
            let depth = ok(wlp_depth(&point, p, s))?;
            if depth > best.0 {
                best = (depth, point);
            }
        }
    }
    Ok(best.1)
}

fn criterion_3() -> Check {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for r in 0..100u64 {
        let mut rng = SeededRandomSource::new(3_000, r);
        let p = ok(gen_eic_uniform(7, 2, &mut rng))?;
        for exp in [1.0, 1.5, 2.0, 3.0] {
            let golden = ok(deepest_point(&p, spec(exp)))?;
            let grid = grid_argmax(&p, spec(exp))?;
            for i in 0..2 {
                let gap = (golden[i] - grid[i]).abs();
                worst = worst.max(gap);
                ensure(
                    gap <= 2e-3,
                    format!("profile {r}, p = {exp}, coordinate {i}: {} vs grid {}", golden[i], grid[i]),
                )?;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), format!("took {elapsed:?}"))?;
    Ok(format!("400 searches, largest coordinate gap {worst:.2e}, {elapsed:?}"))
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let n = 10_000;
    let p = ok(gen_eic_dirichlet(n, 5, &mut SeededRandomSource::new(4_000, 0)))?;
    for (j, row) in p.rows().enumerate() {
        ensure(row.contains(&0.0) && row.contains(&1.0), format!("row {j} lacks an exact 0 or 1"))?;
    }
    let mut freqs = Vec::new();
    for i in 0..5 {
        let col = p.column(i);
        let zeros = col.iter().filter(|&&e| e == 0.0).count() as f64 / n as f64;
        let ones = col.iter().filter(|&&e| e == 1.0).count() as f64 / n as f64;
        for f in [zeros, ones] {
            ensure((0.18..=0.22).contains(&f), format!("candidate {}: frequency {f}", i + 1))?;
        }
        freqs.push((zeros, ones));
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), format!("took {elapsed:?}"))?;
    let range = freqs.iter().flat_map(|&(a, b)| [a, b]).fold((1.0f64, 0.0f64), |(lo, hi), f| (lo.min(f), hi.max(f)));
    Ok(format!("0/1 frequencies in [{:.4}, {:.4}], every row has 0 and 1, {elapsed:?}", range.0, range.1))
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let n = 100_000;
    let p = ok(gen_eic_normal(n, 1, &[0.5], 0.25, &mut SeededRandomSource::new(5_000, 0)))?;
    let zeros = p.values().iter().filter(|&&e| e == 0.0).count() as f64 / n as f64;
    let target = normal_cdf(-2.0);
    let elapsed = start.elapsed();
    ensure((zeros - target).abs() <= 0.002, format!("zero frequency {zeros} vs {target}"))?;
    ensure(elapsed < Duration::from_secs(1), format!("took {elapsed:?}"))?;
    Ok(format!("zero frequency {zeros:.5} vs Phi(-2) = {target:.5}, {elapsed:?}"))
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let n = 10_000;
    let identity = ok(CorrelationMatrix::identity(4))?;
    let p = ok(gen_eiac_copula(n, 4, &identity, &mut SeededRandomSource::new(6_000, 0)))?;
    let critical = ks_critical_1pct(n);
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        let d = ok(ks_uniform_statistic(&p.column(i)))?;
        worst = worst.max(d);
        ensure(d < critical, format!("margin {}: KS {d} >= {critical}", i + 1))?;
    }
    let r = ok(CorrelationMatrix::constant(2, 0.9))?;
    let q = ok(gen_eiac_copula(n, 2, &r, &mut SeededRandomSource::new(6_001, 0)))?;
    let rho = ok(fit_gaussian_copula(&q))?.get(0, 1);
    let elapsed = start.elapsed();
    ensure((rho - 0.9).abs() <= 0.03, format!("recovered rho {rho}"))?;
    ensure(elapsed < Duration::from_secs(5), format!("took {elapsed:?}"))?;
    Ok(format!("max KS {worst:.4} < {critical:.4}; recovered rho {rho:.4}, {elapsed:?}"))
}

fn criterion_7() -> Check {
    let start = Instant::now();
    let n = 10_000;
    let p = ok(gen_eic_uniform(n, 3, &mut SeededRandomSource::new(7_000, 0)))?;
    let mut counts = [0usize; 6];
    for row in p.rows() {
        let mut order = [0usize, 1, 2];
        order.sort_by(|&a, &b| row[b].total_cmp(&row[a]));
        ensure(row[order[0]] > row[order[1]] && row[order[1]] > row[order[2]], "tied evaluations")?;
        let index = match order {
            [0, 1, 2] => 0,
            [0, 2, 1] => 1,
            [1, 0, 2] => 2,
            [1, 2, 0] => 3,
            [2, 0, 1] => 4,
            _ => 5,
        };
        counts[index] += 1;
    }
    let expected = [n as f64 / 6.0; 6];
    let chi2 = ok(chi_square_statistic(&counts, &expected))?;
    let elapsed = start.elapsed();
    ensure(chi2 < 15.09, format!("chi-square {chi2} over {counts:?}"))?;
    ensure(elapsed < Duration::from_secs(2), format!("took {elapsed:?}"))?;
    Ok(format!("chi-square {chi2:.3} < 15.09 over {counts:?}, {elapsed:?}"))
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn criterion_8() -> Check {
    let start = Instant::now();
    let (n, d) = (10_000, 5);
    let (p, scene) = ok(gen_spatial(n, d, 3, DistanceMapping::Linear, &mut SeededRandomSource::new(8_000, 0)))?;
    let mut triples = 0;
    let mut checked = 0;
    for j in 0..n {
        for i in 0..d {
            for k in i + 1..d {
                triples += 1;
                let (a, b) = (p.get(j, i), p.get(j, k));
                if a > 0.0 && b > 0.0 {
                    checked += 1;
                    let gap = distance(scene.candidate(i), scene.candidate(k));
                    ensure((1.0 - a) + (1.0 - b) >= gap - 1e-12, format!("voter {j}, candidates {i},{k}"))?;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(2), format!("took {elapsed:?}"))?;
    Ok(format!("{triples} triples, {checked} with both scores positive, all within the bound, {elapsed:?}"))
}

fn all_rules() -> Vec<Rule> {
    ["approval", "range", "mj", "deepest:1", "deepest:1.5", "deepest:2"].iter().map(|r| r.parse().unwrap()).collect()
}

fn criterion_9() -> Check {
    let start = Instant::now();
    for (k, model) in all_generators().into_iter().enumerate() {
        let config = ExperimentConfig {
            model,
            voters: 21,
            candidates: 4,
            replicates: 400,
            rules: all_rules(),
            master_seed: 9_000 + k as u64,
        };
        let mut reports = Vec::new();
        for workers in [1, 8, 1, 8] {
            reports.push(to_canonical_string(&ok(run_experiment_parallel(&config, workers))?.to_json()));
        }
        ensure(reports.windows(2).all(|w| w[0] == w[1]), format!("{}: reports differ", config.model.name()))?;
    }
    Ok(format!("6 models x 2 runs x workers {{1, 8}}: byte-identical reports, {:?}", start.elapsed()))
}

fn regression_configs() -> Vec<ExperimentConfig> {
    all_generators()
        .into_iter()
        .enumerate()
        .map(|(k, model)| {
            let uniform = matches!(model, GeneratorConfig::Uniform);
            ExperimentConfig {
                model,
                voters: 25,
                candidates: if uniform { 3 } else { 4 },
                replicates: if uniform { 10_000 } else { 1_000 },
                rules: all_rules(),
                master_seed: 10_000 + k as u64,
            }
        })
        .collect()
}

/// Range elects the Condorcet winner in this many of the uniform experiment's
/// Condorcet-winner replicates (first run of the pinned configuration).
const PINNED_RANGE_CW: (u64, u64) = (6_916, 9_180);

fn criterion_10() -> Check {
    let start = Instant::now();
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("regression");
    let bless = std::env::var_os("EVALVOTE_BLESS").is_some();
    let mut pinned = None;
    for config in regression_configs() {
        let report = ok(run_experiment_parallel(&config, 4))?;
        let text = to_canonical_string(&report.to_json());
        let path = dir.join(format!("{}.json", config.model.name()));
        if bless {
            ok(std::fs::create_dir_all(&dir))?;
            ok(std::fs::write(&path, &text))?;
        }
        let stored = std::fs::read_to_string(&path)
            .map_err(|e| format!("{}: {e} (run with EVALVOTE_BLESS=1 to record)", path.display()))?;
        ensure(stored == text, format!("{} differs from the stored report", path.display()))?;
        if matches!(config.model, GeneratorConfig::Uniform) {
            let range = report.rules.iter().find(|s| s.rule == Rule::Range).ok_or("range rule missing")?;
            pinned = Some((range.condorcet_winner_elected as u64, report.replicates_with_condorcet_winner as u64));
        }
    }
    let (elected, with_cw) = pinned.ok_or("uniform experiment missing")?;
    let freq = elected as f64 / with_cw as f64;
    ensure(freq > 0.5 && freq < 1.0, format!("range CW frequency {freq} not strictly inside (0.5, 1)"))?;
    ensure(
        bless || (elected, with_cw) == PINNED_RANGE_CW,
        format!("range CW frequency {elected}/{with_cw}, pinned {}/{}", PINNED_RANGE_CW.0, PINNED_RANGE_CW.1),
    )?;
    Ok(format!(
        "6 stored reports reproduced; uniform d=3 n=25: range elects the CW in {elected}/{with_cw} = {freq:.4}, {:?}",
        start.elapsed()
    ))
}

fn main() {
    let criteria: [(&str, Criterion); 10] = [
        ("Example 1 reproduction", criterion_1),
        ("rule equivalences", criterion_2),
        ("deepest point vs grid", criterion_3),
        ("Dirichlet 20% endpoints", criterion_4),
        ("clipped-normal truncation mass", criterion_5),
        ("copula margins and dependence", criterion_6),
        ("IC consistency", criterion_7),
        ("spatial triangle bound", criterion_8),
        ("determinism across workers", criterion_9),
        ("pinned regressions", criterion_10),
    ];
    // an explicit filter argument (as passed by `cargo test <name>`) that matches nothing skips the suite
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if !filter.is_empty() && !filter.iter().any(|f| "acceptance".contains(f.as_str())) {
        return;
    }
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
