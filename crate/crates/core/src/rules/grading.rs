use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{argmax_result, top_candidates, ElectionResult, Rule, TieBreak};
use crate::error::{Error, Result};
use crate::math::{lower_median_sorted, mean};
use crate::profile::EvaluationProfile;

/// Binarization threshold used when none is given.
pub const DEFAULT_APPROVAL_THRESHOLD: f64 = 0.5;

/// Score = number of voters with `e_ij >= threshold`.
pub fn approval_winner(profile: &EvaluationProfile, threshold: f64) -> Result<ElectionResult> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::parameter(format!("approval threshold {threshold} is outside [0, 1]")));
    }
    let mut counts = alloc::vec![0.0; profile.candidates()];
    for row in profile.rows() {
        for (count, &e) in counts.iter_mut().zip(row) {
            if e >= threshold {
                *count += 1.0;
            }
        }
    }
    Ok(argmax_result(Rule::Approval { threshold }, counts))
}

pub(crate) fn candidate_means(profile: &EvaluationProfile) -> Vec<f64> {
    (0..profile.candidates()).map(|i| mean(&profile.column(i))).collect()
}

pub(crate) fn sorted_columns(profile: &EvaluationProfile) -> Vec<Vec<f64>> {
    (0..profile.candidates())
        .map(|i| {
            let mut c = profile.column(i);
            c.sort_unstable_by(f64::total_cmp);
            c
        })
        .collect()
}

/// Score = mean grade.
pub fn range_winner(profile: &EvaluationProfile) -> ElectionResult {
    argmax_result(Rule::Range, candidate_means(profile))
}

/// Score = lower median grade; ties broken by iterated median removal, then by index.
///
/// While several candidates share the best median, one copy of its median grade is
/// removed from each of their grade lists and the medians are compared again.
pub fn majority_judgement_winner(profile: &EvaluationProfile) -> ElectionResult {
    let mut grades = sorted_columns(profile);
    let scores: Vec<f64> = grades.iter().map(|g| lower_median_sorted(g)).collect();
    let tied = top_candidates(&scores);
    if tied.len() == 1 {
        return ElectionResult { rule: Rule::MajorityJudgement, winner: tied[0], scores, tie: None };
    }

    let mut trace = Vec::new();
    let mut remaining = tied.clone();
    let mut round = 0;
    while remaining.len() > 1 {
        let median = lower_median_sorted(&grades[remaining[0]]);
        // all remaining share this median; drop one copy each
        for &c in &remaining {
            let g = &mut grades[c];
            let pos = (g.len() - 1) / 2;
            g.remove(pos);
        }
        round += 1;
        if grades[remaining[0]].is_empty() {
            trace.push(format!("round {round}: removed median {median}; grades exhausted"));
            break;
        }
        let medians: Vec<f64> = remaining.iter().map(|&c| lower_median_sorted(&grades[c])).collect();
        let leaders: Vec<usize> = top_candidates(&medians).into_iter().map(|k| remaining[k]).collect();
        let names: Vec<String> = leaders.iter().map(|c| format!("c{}", c + 1)).collect();
        trace.push(format!(
            "round {round}: removed median {median}; next medians {medians:?}; leading {}",
            names.join(", ")
        ));
        remaining = leaders;
    }
    if remaining.len() > 1 {
        trace.push(format!("lowest index among {} fully tied candidates", remaining.len()));
    }
    ElectionResult { rule: Rule::MajorityJudgement, winner: remaining[0], scores, tie: Some(TieBreak { tied, trace }) }
}
