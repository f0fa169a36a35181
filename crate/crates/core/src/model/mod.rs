//! Datasets, schedules, access logs and the two evaluation metrics.
//!
//! Everything here is exact: [`exact_topk`] is the reference answer every
//! approximate algorithm is scored against.

mod access;
mod dataset;
mod schedule;
mod topk;

pub use access::AccessLog;
pub use dataset::{default_attribute_names, Dataset};
pub(crate) use schedule::check_partial;
pub use schedule::Schedule;
pub use topk::{Ranked, TopKSet};

use crate::error::{Error, Result};

/// The `k` rows with the highest full scores, ties going to the lower row
/// index.
pub fn exact_topk(dataset: &Dataset, k: usize) -> Result<TopKSet> {
    let n = dataset.n_rows();
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    let mut all: Vec<Ranked> = (0..n)
        .map(|row| Ranked {
            score: dataset.full_score_unchecked(row),
            row,
        })
        .collect();
    all.select_nth_unstable_by(k - 1, |a, b| b.cmp(a));
    all.truncate(k);
    Ok(TopKSet::from_entries(all))
}

/// Cost of the inspected cells normalized by the cost of reading the whole
/// matrix; 1.0 is a full scan.
pub fn cost_metric(dataset: &Dataset, log: &AccessLog) -> f64 {
    let n = dataset.n_rows() as f64;
    let (spent, full) = log
        .column_counts()
        .iter()
        .zip(dataset.costs())
        .fold((0.0, 0.0), |(spent, full), (&count, &c)| {
            (spent + count as f64 * c, full + n * c)
        });
    // same summation order for both, so a full scan is exactly 1
    spent / full
}

/// Fraction of the exact top-k recovered by `approx`.
pub fn accuracy_metric(exact: &TopKSet, approx: &TopKSet) -> Result<f64> {
    if exact.len() != approx.len() || exact.is_empty() {
        return Err(Error::SizeMismatch {
            exact: exact.len(),
            approx: approx.len(),
        });
    }
    let hits = approx.rows().filter(|&r| exact.contains(r)).count();
    Ok(hits as f64 / exact.len() as f64)
}
