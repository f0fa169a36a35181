use std::collections::BinaryHeap;
use std::time::Instant;

use super::{check_k, check_schedule, Probe, QueryResult, UpperBounds};
use crate::error::{Error, Result};
use crate::model::{Dataset, Ranked, Schedule, TopKSet};

/// Best-first search keyed on the optimistic full-score bound.
///
/// Rows sit in a max-priority queue keyed by their current bound (the exact
/// score once complete). The top row is either emitted, when complete, or
/// advanced by one attribute and re-queued. With bounds that dominate every
/// cell the first `k` emitted rows are the exact top-k.
pub fn run_mpro(
    dataset: &Dataset,
    k: usize,
    schedule: &Schedule,
    bounds: &UpperBounds,
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
    let suffix = bounds.suffix_sums(schedule);
    let mut probe = Probe::new(dataset, schedule);
    probe.open_rows(false);

    let key = |probe: &Probe, row: usize| {
        if probe.is_complete(row) {
            dataset.full_score_unchecked(row)
        } else {
            probe.prefix_score(row) + suffix[probe.depth(row)]
        }
    };

    // Ranked breaks equal keys towards the lower row index
    let mut queue: BinaryHeap<Ranked> = (0..dataset.n_rows())
        .map(|row| Ranked {
            score: key(&probe, row),
            row,
        })
        .collect();

    let mut emitted = Vec::with_capacity(k);
    while emitted.len() < k {
        let top = queue.pop().expect("queue holds every unemitted row");
        if probe.is_complete(top.row) {
            emitted.push(top);
        } else {
            probe.advance(top.row);
            queue.push(Ranked {
                score: key(&probe, top.row),
                row: top.row,
            });
        }
    }

    Ok(QueryResult::new(
        dataset,
        TopKSet::from_entries(emitted),
        probe.finish(),
        start.elapsed(),
    ))
}
