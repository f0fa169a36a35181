use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::alpha::{check_estimator, evaluate_alpha, prefix_probabilities, q_for_prefix};
use crate::error::{Error, Result};
use crate::estimator::{ModelBank, ScoreEstimator};
use crate::model::{check_partial, exact_topk, Dataset, Schedule};

/// Fixed attribute orders that need no training.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaselineVariant {
    /// Uniformly random permutation.
    A,
    /// Decreasing `|w_j|`.
    B,
    /// Increasing cost.
    C,
    /// Decreasing `|w_j| / C(A_j)`.
    D,
}

impl FromStr for BaselineVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Self::A),
            "B" | "b" => Ok(Self::B),
            "C" | "c" => Ok(Self::C),
            "D" | "d" => Ok(Self::D),
            other => Err(Error::InvalidParameter(format!("unknown schedule {other:?}"))),
        }
    }
}

impl fmt::Display for BaselineVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::A => "A",
            Self::B => "B",
            Self::C => "C",
            Self::D => "D",
        };
        f.write_str(s)
    }
}

/// Ties keep ascending attribute order.
pub fn baseline_schedule(dataset: &Dataset, variant: BaselineVariant, seed: u64) -> Schedule {
    let w = dataset.weights();
    let c = dataset.costs();
    let mut order: Vec<usize> = (0..dataset.n_attributes()).collect();
    match variant {
        BaselineVariant::A => order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed)),
        BaselineVariant::B => order.sort_by(|&a, &b| w[b].abs().total_cmp(&w[a].abs())),
        BaselineVariant::C => order.sort_by(|&a, &b| c[a].total_cmp(&c[b])),
        BaselineVariant::D => order.sort_by(|&a, &b| (w[b].abs() / c[b]).total_cmp(&(w[a].abs() / c[a]))),
    }
    Schedule::new(order).expect("a sorted or shuffled identity is a permutation")
}

/// Sum of the scan's training cost over the distinct candidate thresholds of
/// `schedule`; the area under its cost-versus-accuracy curve.
pub fn schedule_cost(
    training: &Dataset,
    k: usize,
    schedule: &Schedule,
    estimator: &ScoreEstimator,
    reorder_rows: bool,
) -> Result<f64> {
    let q = q_for_prefix(training, k, schedule.order(), estimator)?;
    q.distinct()
        .into_iter()
        .map(|alpha| evaluate_alpha(training, k, schedule, estimator, alpha, reorder_rows).map(|p| p.cost))
        .sum()
}

/// Per-row tail probabilities against the static threshold of the exact
/// top-k, for every row of `training`.
fn probability_table(
    training: &Dataset,
    k: usize,
    partial: &[usize],
    estimator: &ScoreEstimator,
) -> Result<Vec<Vec<f64>>> {
    let exact = exact_topk(training, k)?;
    let delta = exact.min_score().expect("k >= 1");
    Ok((0..training.n_rows())
        .map(|row| prefix_probabilities(training, row, partial, estimator, delta))
        .collect())
}

fn upper_cost_from_table(training: &Dataset, partial: &[usize], table: &[Vec<f64>], alpha: f64) -> f64 {
    let full = training.total_cost();
    // cumulative cost of reading the first h scheduled attributes
    let mut paid = Vec::with_capacity(partial.len() + 1);
    paid.push(0.0);
    for &j in partial {
        paid.push(paid.last().unwrap() + training.costs()[j]);
    }
    table
        .iter()
        .map(|probs| match probs.iter().position(|&p| p < alpha) {
            Some(at) => paid[at + 1],
            None => full,
        })
        .sum()
}

/// Upper bound on the raw (unnormalized) cost of a schedule that starts with
/// `partial`, for one threshold: a row pays for the scheduled attributes up
/// to the first prefix length at which its tail probability falls below
/// `alpha`, or for the whole row if that never happens within `partial`.
pub fn schedule_cost_upper_at(
    training: &Dataset,
    k: usize,
    partial: &[usize],
    estimator: &ScoreEstimator,
    alpha: f64,
) -> Result<f64> {
    check_partial(partial, training.n_attributes())?;
    check_estimator(partial, estimator)?;
    let table = probability_table(training, k, partial, estimator)?;
    Ok(upper_cost_from_table(training, partial, &table, alpha))
}

/// [`schedule_cost_upper_at`] summed over the distinct candidate thresholds
/// of `partial`.
pub fn schedule_cost_upper(
    training: &Dataset,
    k: usize,
    partial: &[usize],
    estimator: &ScoreEstimator,
) -> Result<f64> {
    check_partial(partial, training.n_attributes())?;
    let q = q_for_prefix(training, k, partial, estimator)?;
    let table = probability_table(training, k, partial, estimator)?;
    Ok(q.distinct()
        .into_iter()
        .map(|alpha| upper_cost_from_table(training, partial, &table, alpha))
        .sum())
}

/// Greedy schedule construction: repeatedly append the attribute whose
/// extended prefix has the smallest cost upper bound, summed over the
/// training matrices. Ties go to the lower attribute index.
pub fn learn_schedule(training: &[Dataset], k: usize) -> Result<Schedule> {
    let mut bank = ModelBank::new(training)?;
    let m = bank.n_attributes();
    let mut order: Vec<usize> = Vec::with_capacity(m);
    let mut remaining: Vec<usize> = (0..m).collect();

    while remaining.len() > 1 {
        let extended: Vec<Vec<usize>> = remaining
            .iter()
            .map(|&a| {
                let mut p = order.clone();
                p.push(a);
                p
            })
            .collect();
        bank.ensure(extended.iter().cloned())?;
        let estimators = extended
            .iter()
            .map(|p| bank.estimator(p))
            .collect::<Result<Vec<_>>>()?;
        let costs: Vec<f64> = extended
            .par_iter()
            .zip(&estimators)
            .map(|(p, est)| {
                training
                    .iter()
                    .map(|x| schedule_cost_upper(x, k, p, est))
                    .sum::<Result<f64>>()
            })
            .collect::<Result<_>>()?;
        let mut best = 0;
        for i in 1..costs.len() {
            if costs[i] < costs[best] {
                best = i;
            }
        }
        order.push(remaining.remove(best));
    }
    order.extend(remaining);
    Schedule::new(order)
}
