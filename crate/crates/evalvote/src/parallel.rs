//! Multi-threaded experiment runner.
//!
//! Replicate `r` always draws from stream `r`, and tallies are integer counts
//! merged in chunk order, so the report does not depend on the worker count.

use std::thread;

use evalvote_core::analysis::{run_replicates, ExperimentConfig, ExperimentReport, ExperimentTally};
use evalvote_core::Result;

/// Runs the experiment on up to `workers` threads (at least one).
pub fn run_experiment_parallel(config: &ExperimentConfig, workers: usize) -> Result<ExperimentReport> {
    config.validate()?;
    let n = config.replicates;
    let workers = workers.clamp(1, n.max(1));
    let chunk = n.div_ceil(workers);
    let ranges: Vec<_> = (0..workers).map(|w| (w * chunk).min(n)..((w + 1) * chunk).min(n)).collect();
    let partials: Vec<Result<ExperimentTally>> = if workers == 1 {
        vec![run_replicates(config, 0..n)]
    } else {
        thread::scope(|s| {
            let handles: Vec<_> = ranges.into_iter().map(|r| s.spawn(move || run_replicates(config, r))).collect();
            handles.into_iter().map(|h| h.join().expect("experiment worker panicked")).collect()
        })
    };
    let mut total = ExperimentTally::new(config.rules.len());
    for part in partials {
        total.merge(&part?);
    }
    ExperimentReport::from_tally(config, &total)
}
