use alloc::vec;
use alloc::vec::Vec;

use crate::profile::EvaluationProfile;

/// One voter's weak order as ranks: 1 is best, equal grades share a rank, and the
/// ranks used are exactly `1..=t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranking {
    ranks: Vec<usize>,
}

impl Ranking {
    pub fn from_grades(grades: &[f64]) -> Self {
        let mut distinct: Vec<f64> = grades.to_vec();
        distinct.sort_unstable_by(|a, b| b.total_cmp(a));
        distinct.dedup();
        let ranks =
            grades.iter().map(|g| distinct.iter().position(|x| x == g).map_or(distinct.len(), |p| p + 1)).collect();
        Ranking { ranks }
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn candidates(&self) -> usize {
        self.ranks.len()
    }

    /// Strict preference of candidate `a` over `b`.
    pub fn prefers(&self, a: usize, b: usize) -> bool {
        self.ranks[a] < self.ranks[b]
    }

    /// Number of rank classes.
    pub fn classes(&self) -> usize {
        self.ranks.iter().copied().max().unwrap_or(0)
    }
}

/// Each voter's weak order, by descending grade.
pub fn profile_to_rankings(profile: &EvaluationProfile) -> Vec<Ranking> {
    profile.rows().map(Ranking::from_grades).collect()
}

/// `count(i, k)` voters strictly prefer `i` to `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairwiseMatrix {
    candidates: usize,
    counts: Vec<u64>,
}

impl PairwiseMatrix {
    pub fn candidates(&self) -> usize {
        self.candidates
    }

    pub fn count(&self, i: usize, k: usize) -> u64 {
        self.counts[i * self.candidates + k]
    }

    /// Candidate beating every other in a strict pairwise majority.
    pub fn condorcet_winner(&self) -> Option<usize> {
        let d = self.candidates;
        (0..d).find(|&i| (0..d).all(|k| k == i || self.count(i, k) > self.count(k, i)))
    }

    /// Candidate losing every strict pairwise majority contest.
    pub fn condorcet_loser(&self) -> Option<usize> {
        let d = self.candidates;
        (0..d).find(|&i| (0..d).all(|k| k == i || self.count(i, k) < self.count(k, i)))
    }
}

/// Pairwise strict-preference counts; equal grades count for neither side.
pub fn pairwise_majority_matrix(rankings: &[Ranking]) -> PairwiseMatrix {
    let d = rankings.first().map_or(0, Ranking::candidates);
    let mut counts = vec![0u64; d * d];
    for r in rankings {
        debug_assert_eq!(r.candidates(), d);
        for i in 0..d {
            for k in 0..d {
                if r.prefers(i, k) {
                    counts[i * d + k] += 1;
                }
            }
        }
    }
    PairwiseMatrix { candidates: d, counts }
}

pub fn condorcet_winner(rankings: &[Ranking]) -> Option<usize> {
    pairwise_majority_matrix(rankings).condorcet_winner()
}

pub fn condorcet_loser(rankings: &[Ranking]) -> Option<usize> {
    pairwise_majority_matrix(rankings).condorcet_loser()
}
