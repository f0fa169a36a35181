use std::time::Instant;

use super::{check_k, check_schedule, Candidates, Probe, QueryResult};
use crate::error::{Error, Result};
use crate::estimator::ScoreEstimator;
use crate::model::{Dataset, Ranked, Schedule};

/// Row scan with probabilistic pruning.
///
/// 1. Read the first scheduled attribute of every row; optionally process
///    rows by decreasing weighted value of that attribute.
/// 2. Read the first `k` processed rows completely. They form the candidate
///    set, whose weakest score is the threshold `δ`.
/// 3. For every other row, keep reading while the estimated probability
///    that its full score exceeds `δ` is at least `alpha`. A row that gets
///    read completely and scores strictly above `δ` replaces the weakest
///    candidate.
///
/// `alpha = 0` never prunes. `alpha = 1` prunes every non-seed row after
/// its first attribute.
pub fn run_pr(
    dataset: &Dataset,
    k: usize,
    schedule: &Schedule,
    estimator: &ScoreEstimator,
    alpha: f64,
    reorder_rows: bool,
) -> Result<QueryResult> {
    check_k(dataset, k)?;
    check_schedule(dataset, schedule)?;
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} not in [0, 1]")));
    }
    let m = dataset.n_attributes();
    if !estimator.matches(schedule.order()) || estimator.max_prefix() + 1 < m {
        return Err(Error::ScheduleMismatch);
    }
    let start = Instant::now();
    let models = estimator.models();
    let mut probe = Probe::new(dataset, schedule);
    let order = probe.open_rows(reorder_rows);

    let seed = order[..k]
        .iter()
        .map(|&row| Ranked {
            score: probe.complete(row),
            row,
        })
        .collect();
    let mut candidates = Candidates::new(seed);

    for &row in &order[k..] {
        let delta = candidates.threshold();
        let mut h = 1;
        while h < m && estimator.tail_with(&models[h - 1], probe.prefix_score(row), delta) >= alpha {
            probe.advance(row);
            h += 1;
        }
        if h == m {
            let score = dataset.full_score_unchecked(row);
            candidates.offer(Ranked { score, row });
        }
    }

    Ok(QueryResult::new(
        dataset,
        candidates.into_topk(),
        probe.finish(),
        start.elapsed(),
    ))
}
