use rayon::prelude::*;

use crate::algorithms::run_pr;
use crate::error::{Error, Result};
use crate::estimator::ScoreEstimator;
use crate::model::{accuracy_metric, exact_topk, Dataset, Schedule};

/// Thresholds at which the training accuracy of the pruning scan steps down,
/// one per exact top-k row, sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaCandidateSet {
    values: Vec<f64>,
}

impl AlphaCandidateSet {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Values with duplicates removed.
    pub fn distinct(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.dedup();
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracyCostPoint {
    pub accuracy: f64,
    pub cost: f64,
    pub alpha: f64,
}

impl AccuracyCostPoint {
    /// Euclidean distance to the ideal point (accuracy 1, cost 0).
    pub fn distance(&self) -> f64 {
        (1.0 - self.accuracy).hypot(self.cost)
    }
}

/// Per-row tail probabilities at prefix lengths `1..=H` against a fixed
/// threshold, where `H` is the estimator's longest prefix.
pub(crate) fn prefix_probabilities(
    dataset: &Dataset,
    row: usize,
    order: &[usize],
    estimator: &ScoreEstimator,
    delta: f64,
) -> Vec<f64> {
    let mut s = 0.0;
    estimator
        .models()
        .iter()
        .zip(order)
        .map(|(model, &j)| {
            s += dataset.weighted(row, j);
            estimator.tail_with(model, s, delta)
        })
        .collect()
}

pub(crate) fn check_estimator(order: &[usize], estimator: &ScoreEstimator) -> Result<()> {
    if !estimator.matches(order) {
        return Err(Error::ScheduleMismatch);
    }
    Ok(())
}

/// Candidate thresholds for one training matrix.
///
/// With `δ` the smallest full score of the exact top-k, each exact top-k
/// row contributes the smallest tail probability it attains over the
/// prefix lengths the estimator covers. A row is abandoned by the scan
/// exactly when the threshold exceeds its value. A row with no prefix to
/// prune at (single-attribute data) contributes 1.
pub fn compute_q(
    training: &Dataset,
    k: usize,
    schedule: &Schedule,
    estimator: &ScoreEstimator,
) -> Result<AlphaCandidateSet> {
    q_for_prefix(training, k, schedule.order(), estimator)
}

pub(crate) fn q_for_prefix(
    training: &Dataset,
    k: usize,
    order: &[usize],
    estimator: &ScoreEstimator,
) -> Result<AlphaCandidateSet> {
    check_estimator(order, estimator)?;
    let exact = exact_topk(training, k)?;
    let delta = exact.min_score().expect("k >= 1");
    let mut values: Vec<f64> = exact
        .rows()
        .map(|row| {
            prefix_probabilities(training, row, order, estimator, delta)
                .into_iter()
                .fold(1.0, f64::min)
        })
        .collect();
    values.sort_by(f64::total_cmp);
    Ok(AlphaCandidateSet { values })
}

/// Accuracy and cost of the pruning scan on a fully known training matrix.
pub fn evaluate_alpha(
    training: &Dataset,
    k: usize,
    schedule: &Schedule,
    estimator: &ScoreEstimator,
    alpha: f64,
    reorder_rows: bool,
) -> Result<AccuracyCostPoint> {
    let result = run_pr(training, k, schedule, estimator, alpha, reorder_rows)?;
    let exact = exact_topk(training, k)?;
    Ok(AccuracyCostPoint {
        accuracy: accuracy_metric(&exact, &result.topk)?,
        cost: result.cost,
        alpha,
    })
}

/// Threshold minimizing the mean distance to the ideal point over the
/// training matrices, searched over the union of their candidate sets.
pub fn select_alpha(
    training: &[Dataset],
    k: usize,
    schedule: &Schedule,
    estimator: &ScoreEstimator,
    reorder_rows: bool,
) -> Result<f64> {
    select_alpha_with(training, k, schedule, estimator, |x, alpha| {
        evaluate_alpha(x, k, schedule, estimator, alpha, reorder_rows)
    })
}

/// [`select_alpha`] with a caller-supplied evaluator of one training matrix
/// at one threshold. Ties go to the larger threshold.
pub fn select_alpha_with<F>(
    training: &[Dataset],
    k: usize,
    schedule: &Schedule,
    estimator: &ScoreEstimator,
    evaluate: F,
) -> Result<f64>
where
    F: Fn(&Dataset, f64) -> Result<AccuracyCostPoint> + Sync,
{
    if training.is_empty() {
        return Err(Error::EmptyTraining);
    }
    let mut candidates = Vec::new();
    for x in training {
        candidates.extend_from_slice(compute_q(x, k, schedule, estimator)?.values());
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    let scored: Vec<f64> = candidates
        .par_iter()
        .map(|&alpha| {
            let mut total = 0.0;
            for x in training {
                total += evaluate(x, alpha)?.distance();
            }
            Ok(total / training.len() as f64)
        })
        .collect::<Result<_>>()?;

    let mut best = 0;
    for (i, d) in scored.iter().enumerate() {
        if *d <= scored[best] {
            best = i;
        }
    }
    Ok(candidates[best])
}
