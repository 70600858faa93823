use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::generators::GeneratorConfig;
use crate::rng::SeededRandomSource;
use crate::rules::{pairwise_majority_matrix, profile_to_rankings, Rule};

/// A Monte Carlo experiment: `replicates` profiles of one model, every rule applied to each.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: GeneratorConfig,
    pub voters: usize,
    pub candidates: usize,
    pub replicates: usize,
    pub rules: Vec<Rule>,
    pub master_seed: u64,
}

impl ExperimentConfig {
    /// Checks everything that can fail before any replicate runs.
    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::parameter("an experiment needs at least one replicate"));
        }
        if self.rules.is_empty() {
            return Err(Error::parameter("an experiment needs at least one rule"));
        }
        for rule in &self.rules {
            rule.validate()?;
        }
        self.model.validate(self.voters, self.candidates)
    }
}

/// What one replicate contributed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplicateOutcome {
    pub condorcet_winner: Option<usize>,
    pub condorcet_loser: Option<usize>,
    /// Winner of each configured rule, in rule order.
    pub winners: Vec<usize>,
}

/// Replicate `index` on its own substream `(master_seed, index)`.
pub fn run_replicate(config: &ExperimentConfig, index: usize) -> Result<ReplicateOutcome> {
    let mut rng = SeededRandomSource::new(config.master_seed, index as u64);
    let generated = config.model.generate(config.voters, config.candidates, &mut rng)?;
    let profile = generated.profile;
    let matrix = pairwise_majority_matrix(&profile_to_rankings(&profile));
    let winners = config.rules.iter().map(|rule| rule.elect(&profile).map(|r| r.winner)).collect::<Result<Vec<_>>>()?;
    Ok(ReplicateOutcome {
        condorcet_winner: matrix.condorcet_winner(),
        condorcet_loser: matrix.condorcet_loser(),
        winners,
    })
}

/// Running counts; merging is addition, so any split of the replicates gives the
/// same totals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentTally {
    rules: usize,
    replicates: usize,
    with_winner: usize,
    with_loser: usize,
    winner_elected: Vec<usize>,
    loser_elected: Vec<usize>,
    agreements: Vec<usize>,
}

impl ExperimentTally {
    pub fn new(rules: usize) -> Self {
        ExperimentTally {
            rules,
            replicates: 0,
            with_winner: 0,
            with_loser: 0,
            winner_elected: vec![0; rules],
            loser_elected: vec![0; rules],
            agreements: vec![0; rules * rules],
        }
    }

    pub fn record(&mut self, outcome: &ReplicateOutcome) {
        debug_assert_eq!(outcome.winners.len(), self.rules);
        self.replicates += 1;
        if let Some(cw) = outcome.condorcet_winner {
            self.with_winner += 1;
            for (count, &w) in self.winner_elected.iter_mut().zip(&outcome.winners) {
                *count += usize::from(w == cw);
            }
        }
        if let Some(cl) = outcome.condorcet_loser {
            self.with_loser += 1;
            for (count, &w) in self.loser_elected.iter_mut().zip(&outcome.winners) {
                *count += usize::from(w == cl);
            }
        }
        for a in 0..self.rules {
            for b in 0..self.rules {
                self.agreements[a * self.rules + b] += usize::from(outcome.winners[a] == outcome.winners[b]);
            }
        }
    }

    pub fn merge(&mut self, other: &ExperimentTally) {
        assert_eq!(self.rules, other.rules, "tallies of different rule sets");
        self.replicates += other.replicates;
        self.with_winner += other.with_winner;
        self.with_loser += other.with_loser;
        for (a, b) in self.winner_elected.iter_mut().zip(&other.winner_elected) {
            *a += b;
        }
        for (a, b) in self.loser_elected.iter_mut().zip(&other.loser_elected) {
            *a += b;
        }
        for (a, b) in self.agreements.iter_mut().zip(&other.agreements) {
            *a += b;
        }
    }

    pub fn replicates(&self) -> usize {
        self.replicates
    }
}

/// Per-rule Condorcet statistics. Frequencies are conditional on existence and are
/// `None` when the denominator is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleStats {
    pub rule: Rule,
    pub condorcet_winner_elected: usize,
    pub condorcet_winner_not_elected: usize,
    pub condorcet_winner_frequency: Option<f64>,
    pub condorcet_loser_elected: usize,
    pub condorcet_loser_frequency: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub replicates: usize,
    pub replicates_with_condorcet_winner: usize,
    pub replicates_without_condorcet_winner: usize,
    pub replicates_with_condorcet_loser: usize,
    pub rules: Vec<RuleStats>,
    /// Row-major `rules x rules` fraction of replicates where two rules chose the same winner.
    pub agreement: Vec<f64>,
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

impl ExperimentReport {
    pub fn from_tally(config: &ExperimentConfig, tally: &ExperimentTally) -> Result<Self> {
        if tally.replicates != config.replicates || tally.rules != config.rules.len() {
            return Err(Error::dimension(format!(
                "tally covers {} replicates of {} rules, config has {} of {}",
                tally.replicates,
                tally.rules,
                config.replicates,
                config.rules.len()
            )));
        }
        let rules = config
            .rules
            .iter()
            .enumerate()
            .map(|(k, &rule)| RuleStats {
                rule,
                condorcet_winner_elected: tally.winner_elected[k],
                condorcet_winner_not_elected: tally.with_winner - tally.winner_elected[k],
                condorcet_winner_frequency: ratio(tally.winner_elected[k], tally.with_winner),
                condorcet_loser_elected: tally.loser_elected[k],
                condorcet_loser_frequency: ratio(tally.loser_elected[k], tally.with_loser),
            })
            .collect();
        let agreement = tally.agreements.iter().map(|&c| c as f64 / tally.replicates as f64).collect();
        Ok(ExperimentReport {
            config: config.clone(),
            replicates: tally.replicates,
            replicates_with_condorcet_winner: tally.with_winner,
            replicates_without_condorcet_winner: tally.replicates - tally.with_winner,
            replicates_with_condorcet_loser: tally.with_loser,
            rules,
            agreement,
        })
    }

    pub fn agreement(&self, a: usize, b: usize) -> f64 {
        self.agreement[a * self.rules.len() + b]
    }
}

/// Tallies replicates `range` of the experiment.
pub fn run_replicates(config: &ExperimentConfig, range: core::ops::Range<usize>) -> Result<ExperimentTally> {
    let mut tally = ExperimentTally::new(config.rules.len());
    for r in range {
        tally.record(&run_replicate(config, r)?);
    }
    Ok(tally)
}

/// Runs every replicate in order on the calling thread.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let tally = run_replicates(config, 0..config.replicates)?;
    ExperimentReport::from_tally(config, &tally)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::DepthSpec;

    fn config(rules: Vec<Rule>) -> ExperimentConfig {
        ExperimentConfig {
            model: GeneratorConfig::Uniform,
            voters: 15,
            candidates: 3,
            replicates: 200,
            rules,
            master_seed: 99,
        }
    }

    #[test]
    fn preflight_errors() {
        let mut c = config(vec![Rule::Range]);
        c.replicates = 0;
        assert!(run_experiment(&c).is_err());
        assert!(run_experiment(&config(vec![])).is_err());
        assert!(run_experiment(&config(vec![Rule::Approval { threshold: 2.0 }])).is_err());
        let mut c = config(vec![Rule::Range]);
        c.model = GeneratorConfig::Dirichlet;
        c.candidates = 1;
        assert!(run_experiment(&c).is_err());
    }

    #[test]
    fn range_and_deepest_two_always_agree() {
        let c = config(vec![Rule::Range, Rule::Deepest(DepthSpec::new(2.0).unwrap())]);
        let report = run_experiment(&c).unwrap();
        assert_eq!(report.agreement(0, 1), 1.0);
        assert_eq!(report.agreement(1, 0), 1.0);
    }

    #[test]
    fn accounting_identities() {
        let c = config(vec![Rule::Range, Rule::MajorityJudgement, Rule::Approval { threshold: 0.5 }]);
        let report = run_experiment(&c).unwrap();
        assert_eq!(
            report.replicates_with_condorcet_winner + report.replicates_without_condorcet_winner,
            report.replicates
        );
        for s in &report.rules {
            assert_eq!(
                s.condorcet_winner_elected + s.condorcet_winner_not_elected,
                report.replicates_with_condorcet_winner
            );
            let f = s.condorcet_winner_frequency.unwrap();
            assert!((0.0..=1.0).contains(&f));
        }
        for k in 0..3 {
            assert_eq!(report.agreement(k, k), 1.0);
        }
    }

    #[test]
    fn split_tallies_merge_to_the_whole() {
        let c = config(vec![Rule::Range, Rule::MajorityJudgement]);
        let whole = run_replicates(&c, 0..200).unwrap();
        let mut parts = run_replicates(&c, 120..200).unwrap();
        parts.merge(&run_replicates(&c, 0..57).unwrap());
        parts.merge(&run_replicates(&c, 57..120).unwrap());
        assert_eq!(whole, parts);
    }
}
