use std::time::Instant;

use super::{check_k, check_schedule, Candidates, Probe, QueryResult, UpperBounds};
use crate::error::{Error, Result};
use crate::model::{Dataset, Ranked, Schedule};

/// Row scan with bound-based pruning.
///
/// The first `k` processed rows are read completely and seed the candidate
/// set. Every later row is extended one attribute at a time while its
/// optimistic bound is at least the current threshold, and abandoned as
/// soon as the bound falls below it.
pub fn run_ub(
    dataset: &Dataset,
    k: usize,
    schedule: &Schedule,
    bounds: &UpperBounds,
    reorder_rows: bool,
) -> Result<QueryResult> {
    check_k(dataset, k)?;
    check_schedule(dataset, schedule)?;
    if bounds.len() != dataset.n_attributes() {
        return Err(Error::InvalidParameter(format!(
            "{} bounds for {} attributes",
            bounds.len(),
            dataset.n_attributes()
        )));
    }
    let start = Instant::now();
    let m = dataset.n_attributes();
    let suffix = bounds.suffix_sums(schedule);
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
        loop {
            let h = probe.depth(row);
            if h == m {
                let score = dataset.full_score_unchecked(row);
                candidates.offer(Ranked { score, row });
                break;
            }
            if probe.prefix_score(row) + suffix[h] < delta {
                break;
            }
            probe.advance(row);
        }
    }

    Ok(QueryResult::new(
        dataset,
        candidates.into_topk(),
        probe.finish(),
        start.elapsed(),
    ))
}
