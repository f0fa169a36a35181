//! Top-k query algorithms over a hidden matrix.
//!
//! All algorithms read cells through the same instrumented probe, in
//! schedule order, so their costs are directly comparable:
//!
//! - [`run_trivial`] reads everything.
//! - [`run_ub`] scans rows and abandons a row once an optimistic bound on
//!   its full score drops below the current k-th best score.
//! - [`run_mpro`] always advances the row with the highest optimistic bound.
//! - [`run_pr`] scans rows and abandons a row once the estimated probability
//!   of beating the k-th best score drops below a threshold.

mod bounds;
mod mpro;
mod pr;
mod probe;
mod ub;

use std::time::Duration;

pub use bounds::{compute_upper_bounds, upper_bound_full, UpperBounds};
pub use mpro::run_mpro;
pub use pr::run_pr;
pub(crate) use probe::{Candidates, Probe};
pub use ub::run_ub;

use crate::error::{Error, Result};
use crate::model::{cost_metric, exact_topk, AccessLog, Dataset, Schedule, TopKSet};

#[derive(Debug, Clone)]
pub struct QueryResult {
    pub topk: TopKSet,
    pub access_log: AccessLog,
    /// Normalized cost of `access_log`.
    pub cost: f64,
    pub wall_time: Duration,
}

impl QueryResult {
    pub(crate) fn new(dataset: &Dataset, topk: TopKSet, access_log: AccessLog, wall_time: Duration) -> Self {
        let cost = cost_metric(dataset, &access_log);
        Self {
            topk,
            access_log,
            cost,
            wall_time,
        }
    }
}

pub(crate) fn check_k(dataset: &Dataset, k: usize) -> Result<()> {
    if k == 0 || k > dataset.n_rows() {
        return Err(Error::KOutOfRange {
            k,
            n: dataset.n_rows(),
        });
    }
    Ok(())
}

pub(crate) fn check_schedule(dataset: &Dataset, schedule: &Schedule) -> Result<()> {
    if schedule.len() != dataset.n_attributes() {
        return Err(Error::InvalidSchedule(format!(
            "schedule covers {} attributes, dataset has {}",
            schedule.len(),
            dataset.n_attributes()
        )));
    }
    Ok(())
}

/// Reads every cell; exact answer at cost 1.
pub fn run_trivial(dataset: &Dataset, k: usize) -> Result<QueryResult> {
    let start = std::time::Instant::now();
    let schedule = Schedule::identity(dataset.n_attributes());
    let mut probe = Probe::new(dataset, &schedule);
    for row in 0..dataset.n_rows() {
        probe.complete(row);
    }
    let topk = exact_topk(dataset, k)?;
    Ok(QueryResult::new(dataset, topk, probe.finish(), start.elapsed()))
}
