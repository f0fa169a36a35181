use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Dataset, Schedule};

/// Per-attribute upper bounds on the weighted contribution `w_j * X_ij`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UpperBounds {
    per_attribute: Vec<f64>,
}

impl UpperBounds {
    pub fn new(per_attribute: Vec<f64>) -> Self {
        Self { per_attribute }
    }

    /// Bounds that never prune.
    pub fn unbounded(m: usize) -> Self {
        Self::new(vec![f64::INFINITY; m])
    }

    pub fn per_attribute(&self) -> &[f64] {
        &self.per_attribute
    }

    pub fn len(&self) -> usize {
        self.per_attribute.len()
    }

    pub fn is_empty(&self) -> bool {
        self.per_attribute.is_empty()
    }

    /// `out[h]` is the summed bound of the attributes at schedule positions
    /// `h..m`; `out[m] == 0`.
    pub(crate) fn suffix_sums(&self, schedule: &Schedule) -> Vec<f64> {
        let m = schedule.len();
        let mut out = vec![0.0; m + 1];
        for h in (0..m).rev() {
            out[h] = out[h + 1] + self.per_attribute[schedule.attribute(h)];
        }
        out
    }
}

/// Largest weighted contribution of each attribute seen in training. For a
/// negative weight this is the weight times the smallest value.
pub fn compute_upper_bounds(training: &[Dataset], weights: &[f64]) -> Result<UpperBounds> {
    if training.is_empty() {
        return Err(Error::EmptyTraining);
    }
    let m = weights.len();
    if let Some(bad) = training.iter().position(|d| d.n_attributes() != m) {
        return Err(Error::IncompatibleTraining(format!(
            "matrix {bad} has {} attributes, expected {m}",
            training[bad].n_attributes()
        )));
    }
    let mut bounds = vec![f64::NEG_INFINITY; m];
    for d in training {
        for i in 0..d.n_rows() {
            for (j, (b, &w)) in bounds.iter_mut().zip(weights).enumerate() {
                *b = b.max(w * d.value(i, j));
            }
        }
    }
    Ok(UpperBounds::new(bounds))
}

/// Optimistic full score of a row whose first `h` scheduled attributes sum
/// to `prefix_score`.
pub fn upper_bound_full(prefix_score: f64, bounds: &UpperBounds, schedule: &Schedule, h: usize) -> f64 {
    prefix_score
        + schedule.order()[h..]
            .iter()
            .map(|&j| bounds.per_attribute[j])
            .sum::<f64>()
}
