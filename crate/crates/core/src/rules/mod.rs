//! Evaluation-based voting rules and Condorcet analysis.
//!
//! Every rule returns an [`ElectionResult`]; the final tie-break is always the
//! lowest candidate index, and whenever more than one candidate shares the top
//! aggregate the tie and the steps taken to resolve it are recorded.

mod condorcet;
mod depth;
mod grading;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::profile::EvaluationProfile;

pub use condorcet::{
    condorcet_loser, condorcet_winner, pairwise_majority_matrix, profile_to_rankings, PairwiseMatrix, Ranking,
};
pub use depth::{deepest_point, deepest_voting_winner, wlp_depth, DepthSpec, GOLDEN_TOLERANCE};
pub use grading::{approval_winner, majority_judgement_winner, range_winner, DEFAULT_APPROVAL_THRESHOLD};

/// A voting rule with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rule {
    Approval { threshold: f64 },
    Range,
    MajorityJudgement,
    Deepest(DepthSpec),
}

impl Rule {
    /// Short identifier: `approval`, `range`, `mj` or `deepest`.
    pub fn id(&self) -> &'static str {
        match self {
            Rule::Approval { .. } => "approval",
            Rule::Range => "range",
            Rule::MajorityJudgement => "mj",
            Rule::Deepest(_) => "deepest",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Rule::Approval { threshold } if !(0.0..=1.0).contains(&threshold) => {
                Err(Error::parameter(format!("approval threshold {threshold} is outside [0, 1]")))
            }
            Rule::Deepest(spec) => spec.check_supported(),
            _ => Ok(()),
        }
    }

    pub fn elect(&self, profile: &EvaluationProfile) -> Result<ElectionResult> {
        match *self {
            Rule::Approval { threshold } => approval_winner(profile, threshold),
            Rule::Range => Ok(range_winner(profile)),
            Rule::MajorityJudgement => Ok(majority_judgement_winner(profile)),
            Rule::Deepest(spec) => deepest_voting_winner(profile, spec),
        }
    }
}

/// `approval[:threshold]`, `range`, `mj`, `deepest[:p]` (defaults 0.5 and 2).
impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Approval { threshold } => write!(f, "approval:{threshold}"),
            Rule::Deepest(spec) => write!(f, "deepest:{}", spec.p()),
            other => f.write_str(other.id()),
        }
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((name, arg)) => (name.trim(), Some(arg.trim())),
            None => (s.trim(), None),
        };
        let number = |arg: &str| {
            arg.parse::<f64>().map_err(|_| Error::parameter(format!("rule `{s}`: `{arg}` is not a number")))
        };
        let rule = match (name, arg) {
            ("approval", None) => Rule::Approval { threshold: DEFAULT_APPROVAL_THRESHOLD },
            ("approval", Some(t)) => Rule::Approval { threshold: number(t)? },
            ("range", None) => Rule::Range,
            ("mj" | "majority-judgement" | "majority_judgement", None) => Rule::MajorityJudgement,
            ("deepest", None) => Rule::Deepest(DepthSpec::new(2.0)?),
            ("deepest", Some(p)) => Rule::Deepest(DepthSpec::new(number(p)?)?),
            _ => return Err(Error::parameter(format!("unknown rule `{s}`"))),
        };
        rule.validate()?;
        Ok(rule)
    }
}

/// How a tie for the top aggregate was resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct TieBreak {
    /// Candidates sharing the top aggregate score, ascending.
    pub tied: Vec<usize>,
    /// Human-readable steps, in order.
    pub trace: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElectionResult {
    pub rule: Rule,
    /// 0-based candidate index.
    pub winner: usize,
    /// Per-candidate aggregate (approval count, mean, lower median, deepest coordinate).
    pub scores: Vec<f64>,
    pub tie: Option<TieBreak>,
}

/// Candidates attaining the maximum score, ascending.
pub(crate) fn top_candidates(scores: &[f64]) -> Vec<usize> {
    let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (0..scores.len()).filter(|&i| scores[i] == best).collect()
}

/// Argmax with the lowest-index tie-break, recorded when it was needed.
pub(crate) fn argmax_result(rule: Rule, scores: Vec<f64>) -> ElectionResult {
    let top = top_candidates(&scores);
    let winner = top[0];
    let tie = (top.len() > 1).then(|| TieBreak {
        trace: alloc::vec![format!("lowest index among {} tied candidates", top.len())],
        tied: top,
    });
    ElectionResult { rule, winner, scores, tie }
}
