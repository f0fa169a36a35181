//! Per-prefix-length Gaussian models of the full score given a prefix score.
//!
//! Training pools every row of every training matrix. For each prefix length
//! `h` the pairs `(prefix score, full score)` are kernel-smoothed at every
//! training prefix score, and two regression lines are fitted through the
//! smoothed mean and standard deviation. At query time only the lines are
//! evaluated, so the probability that a partially read row beats a
//! threshold costs a handful of flops.

mod kernel;
mod regression;

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use kernel::{default_beta, kernel, kernel_mu, kernel_sigma, smooth_at_training_points};
pub use regression::fit_linear;
use regression::fit_linear_or_mean;

use crate::error::{Error, Result};
use crate::model::{Dataset, Schedule};

/// Lower clamp for the predicted standard deviation.
pub const SIGMA_FLOOR: f64 = 1e-9;

/// Largest double below one. Tail probabilities are capped here so that a
/// threshold of exactly 1 never lets a row continue.
const PROBABILITY_CEILING: f64 = 1.0 - f64::EPSILON / 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrefixScorePair {
    pub prefix_score: f64,
    pub full_score: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelConfig {
    beta: f64,
}

impl KernelConfig {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("kernel width {beta}")));
        }
        Ok(Self { beta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Linear predictors of the mean and standard deviation of the full score
/// for rows whose first `h` scheduled attributes are known.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrefixModel {
    pub h: usize,
    pub q0_mu: f64,
    pub q1_mu: f64,
    pub q0_sigma: f64,
    pub q1_sigma: f64,
}

impl PrefixModel {
    #[inline]
    pub fn mu(&self, s: f64) -> f64 {
        self.q1_mu * s + self.q0_mu
    }

    /// Raw linear prediction; may be negative outside the training range.
    #[inline]
    pub fn sigma(&self, s: f64) -> f64 {
        self.q1_sigma * s + self.q0_sigma
    }
}

/// One [`PrefixModel`] per prefix length `1..=len` of a schedule prefix.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreEstimator {
    order: Vec<usize>,
    models: Vec<PrefixModel>,
    sigma_floor: f64,
}

impl ScoreEstimator {
    /// Assembles an estimator from stored models; `order` lists the
    /// attributes of the covered prefix and `models[h-1].h == h`.
    pub fn new(order: Vec<usize>, models: Vec<PrefixModel>, sigma_floor: f64) -> Result<Self> {
        if order.len() != models.len() {
            return Err(Error::InvalidParameter(format!(
                "{} prefix attributes but {} models",
                order.len(),
                models.len()
            )));
        }
        if let Some((i, bad)) = models.iter().enumerate().find(|(i, m)| m.h != i + 1) {
            return Err(Error::InvalidParameter(format!(
                "model {i} has prefix length {}",
                bad.h
            )));
        }
        if sigma_floor.is_nan() || sigma_floor <= 0.0 {
            return Err(Error::InvalidParameter(format!("sigma floor {sigma_floor}")));
        }
        Ok(Self {
            order,
            models,
            sigma_floor,
        })
    }

    /// Longest prefix length with a model.
    pub fn max_prefix(&self) -> usize {
        self.models.len()
    }

    pub fn models(&self) -> &[PrefixModel] {
        &self.models
    }

    pub fn sigma_floor(&self) -> f64 {
        self.sigma_floor
    }

    /// Attributes of the schedule prefix the models were trained on.
    pub fn prefix_order(&self) -> &[usize] {
        &self.order
    }

    pub fn model(&self, h: usize) -> Result<&PrefixModel> {
        if h == 0 {
            return Err(Error::MissingModel(h));
        }
        self.models.get(h - 1).ok_or(Error::MissingModel(h))
    }

    /// Whether the models were trained on a prefix of `order`.
    pub fn matches(&self, order: &[usize]) -> bool {
        order.len() >= self.order.len() && order[..self.order.len()] == self.order[..]
    }

    /// Estimated probability that the full score exceeds `delta` given the
    /// prefix score `s` over the first `h` scheduled attributes.
    pub fn tail_probability(&self, h: usize, s: f64, delta: f64) -> Result<f64> {
        let model = self.model(h)?;
        Ok(self.tail_with(model, s, delta))
    }

    #[inline]
    pub(crate) fn tail_with(&self, model: &PrefixModel, s: f64, delta: f64) -> f64 {
        let sigma = model.sigma(s).max(self.sigma_floor);
        upper_tail((delta - model.mu(s)) / sigma)
    }
}

/// `1 - Φ(z)`, evaluated through `erfc` so that it keeps full relative
/// accuracy deep in the upper tail.
pub(crate) fn upper_tail(z: f64) -> f64 {
    let p = 0.5 * libm::erfc(z / std::f64::consts::SQRT_2);
    p.clamp(0.0, PROBABILITY_CEILING)
}

/// Free-function form of [`ScoreEstimator::tail_probability`].
pub fn tail_probability(estimator: &ScoreEstimator, h: usize, s: f64, delta: f64) -> Result<f64> {
    estimator.tail_probability(h, s, delta)
}

/// Fully observed training rows, pooled across matrices.
#[derive(Debug)]
pub(crate) struct TrainingPool<'a> {
    datasets: &'a [Dataset],
    full: Vec<f64>,
}

impl<'a> TrainingPool<'a> {
    pub(crate) fn new(datasets: &'a [Dataset]) -> Result<Self> {
        let first = datasets.first().ok_or(Error::EmptyTraining)?;
        if let Some(bad) = datasets.iter().position(|d| !d.same_schema(first)) {
            return Err(Error::IncompatibleTraining(format!(
                "matrix {bad} has different attributes, weights or costs than matrix 0"
            )));
        }
        let full = datasets
            .iter()
            .flat_map(|d| (0..d.n_rows()).map(move |i| d.full_score_unchecked(i)))
            .collect();
        Ok(Self { datasets, full })
    }

    pub(crate) fn n_attributes(&self) -> usize {
        self.datasets[0].n_attributes()
    }

    /// Pairs for the attribute set `set`. The prefix score is summed in
    /// ascending attribute order so it depends on the set alone.
    pub(crate) fn pairs_for_set(&self, set: &[usize]) -> Vec<PrefixScorePair> {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        let mut out = Vec::with_capacity(self.full.len());
        let mut t = 0;
        for d in self.datasets {
            for i in 0..d.n_rows() {
                let prefix_score = sorted.iter().map(|&j| d.weighted(i, j)).sum();
                out.push(PrefixScorePair {
                    prefix_score,
                    full_score: self.full[t],
                });
                t += 1;
            }
        }
        out
    }
}

/// Pooled `(prefix score, full score)` pairs at prefix length `h`.
pub fn build_training_pairs(
    training: &[Dataset],
    schedule: &Schedule,
    h: usize,
) -> Result<Vec<PrefixScorePair>> {
    let pool = TrainingPool::new(training)?;
    let m = pool.n_attributes();
    if schedule.len() != m {
        return Err(Error::InvalidSchedule(format!(
            "schedule covers {} attributes, training data has {m}",
            schedule.len()
        )));
    }
    if h > m {
        return Err(Error::PrefixOutOfRange { h, m });
    }
    Ok(pool.pairs_for_set(schedule.prefix(h)))
}

/// Kernel-smooth `pairs` at their own prefix scores and fit both lines.
pub fn fit_prefix_model(pairs: &[PrefixScorePair], h: usize) -> Result<PrefixModel> {
    let beta = default_beta(pairs)?;
    let smoothed = smooth_at_training_points(pairs, beta);
    let t_mu: Vec<(f64, f64)> = pairs
        .iter()
        .zip(&smoothed)
        .map(|(p, s)| (p.prefix_score, s.0))
        .collect();
    let t_sigma: Vec<(f64, f64)> = pairs
        .iter()
        .zip(&smoothed)
        .map(|(p, s)| (p.prefix_score, s.1))
        .collect();
    let (q0_mu, q1_mu) = fit_linear_or_mean(&t_mu);
    let (q0_sigma, q1_sigma) = fit_linear_or_mean(&t_sigma);
    Ok(PrefixModel {
        h,
        q0_mu,
        q1_mu,
        q0_sigma,
        q1_sigma,
    })
}

/// Trains models for prefix lengths `1..m-1` of `schedule`.
pub fn train_estimator(training: &[Dataset], schedule: &Schedule) -> Result<ScoreEstimator> {
    let mut bank = ModelBank::new(training)?;
    if schedule.len() != bank.n_attributes() {
        return Err(Error::InvalidSchedule(format!(
            "schedule covers {} attributes, training data has {}",
            schedule.len(),
            bank.n_attributes()
        )));
    }
    bank.estimator(schedule.order())
}

/// Prefix models memoized by the unordered set of prefix attributes.
///
/// A prefix score only depends on which attributes were read, so every
/// schedule sharing a prefix set shares its model.
#[derive(Debug)]
pub struct ModelBank<'a> {
    pool: TrainingPool<'a>,
    fitted: HashMap<Vec<usize>, PrefixModel>,
}

impl<'a> ModelBank<'a> {
    pub fn new(training: &'a [Dataset]) -> Result<Self> {
        Ok(Self {
            pool: TrainingPool::new(training)?,
            fitted: HashMap::new(),
        })
    }

    pub fn n_attributes(&self) -> usize {
        self.pool.n_attributes()
    }

    /// Number of distinct attribute sets fitted so far.
    pub fn len(&self) -> usize {
        self.fitted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fitted.is_empty()
    }

    fn key(set: &[usize]) -> Vec<usize> {
        let mut k = set.to_vec();
        k.sort_unstable();
        k
    }

    /// Fits every missing set in parallel.
    pub fn ensure<I>(&mut self, sets: I) -> Result<()>
    where
        I: IntoIterator<Item = Vec<usize>>,
    {
        let mut missing: Vec<Vec<usize>> = sets
            .into_iter()
            .map(|s| Self::key(&s))
            .filter(|k| !self.fitted.contains_key(k))
            .collect();
        missing.sort();
        missing.dedup();
        let pool = &self.pool;
        let fitted: Vec<(Vec<usize>, PrefixModel)> = missing
            .into_par_iter()
            .map(|set| {
                let pairs = pool.pairs_for_set(&set);
                let model = fit_prefix_model(&pairs, set.len())?;
                Ok((set, model))
            })
            .collect::<Result<_>>()?;
        self.fitted.extend(fitted);
        Ok(())
    }

    /// Estimator for the schedule prefix `order`, covering prefix lengths
    /// `1..=min(order.len(), m - 1)`.
    pub fn estimator(&mut self, order: &[usize]) -> Result<ScoreEstimator> {
        let m = self.n_attributes();
        crate::model::check_partial(order, m)?;
        let len = order.len().min(m.saturating_sub(1));
        self.ensure((1..=len).map(|h| order[..h].to_vec()))?;
        let models = (1..=len).map(|h| self.fitted[&Self::key(&order[..h])]).collect();
        ScoreEstimator::new(order[..len].to_vec(), models, SIGMA_FLOOR)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::default_attribute_names;

    fn dataset(rows: Vec<Vec<f64>>, w: Vec<f64>) -> Dataset {
        let m = w.len();
        Dataset::new(rows, default_attribute_names(m), vec![1.0; m], w).unwrap()
    }

    #[test]
    fn training_pair_counts() {
        let d = dataset(
            vec![vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]],
            vec![1.0, 1.0],
        );
        let s = Schedule::new(vec![1, 0]).unwrap();
        assert_eq!(
            build_training_pairs(std::slice::from_ref(&d), &s, 1)
                .unwrap()
                .len(),
            3
        );
        let full = build_training_pairs(std::slice::from_ref(&d), &s, 2).unwrap();
        assert!(full.iter().all(|p| p.prefix_score == p.full_score));
        assert_eq!(
            build_training_pairs(&[d.clone(), d.clone()], &s, 1)
                .unwrap()
                .len(),
            6
        );
        assert!(build_training_pairs(&[d], &s, 3).is_err());
        assert!(matches!(
            build_training_pairs(&[], &s, 1),
            Err(Error::EmptyTraining)
        ));
    }

    #[test]
    fn constant_full_scores_give_flat_models() {
        // every row sums to 3 under unit weights
        let rows = vec![vec![1.0, 2.0], vec![2.0, 1.0], vec![0.5, 2.5], vec![3.0, 0.0]];
        let d = dataset(rows, vec![1.0, 1.0]);
        let est = train_estimator(&[d], &Schedule::identity(2)).unwrap();
        assert_eq!(est.max_prefix(), 1);
        let m = est.model(1).unwrap();
        for s in [-2.0, 0.0, 1.3, 10.0] {
            assert!((m.mu(s) - 3.0).abs() < 1e-9);
            assert!(m.sigma(s).abs() < 1e-9);
        }
    }

    #[test]
    fn tail_probability_examples() {
        let model = PrefixModel {
            h: 1,
            q0_mu: 1.0,
            q1_mu: 2.0,
            q0_sigma: 0.5,
            q1_sigma: 0.25,
        };
        let est = ScoreEstimator::new(vec![0], vec![model], SIGMA_FLOOR).unwrap();
        let s = 2.0;
        let (mu, sigma) = (model.mu(s), model.sigma(s));
        assert!((est.tail_probability(1, s, mu).unwrap() - 0.5).abs() < 1e-12);
        let p = est.tail_probability(1, s, mu + sigma).unwrap();
        assert!((p - 0.158655253931457).abs() < 1e-12, "{p}");
        assert!(est.tail_probability(1, s, -1e300).unwrap() > 1.0 - 1e-15);
        assert!(est.tail_probability(1, s, -1e300).unwrap() < 1.0);
        assert_eq!(est.tail_probability(1, s, 1e300).unwrap(), 0.0);
        assert!(matches!(
            est.tail_probability(2, s, 0.0),
            Err(Error::MissingModel(2))
        ));
        assert!(matches!(
            est.tail_probability(0, s, 0.0),
            Err(Error::MissingModel(0))
        ));
    }

    #[test]
    fn negative_sigma_prediction_uses_floor() {
        let model = PrefixModel {
            h: 1,
            q0_mu: 0.0,
            q1_mu: 1.0,
            q0_sigma: -1.0,
            q1_sigma: 0.0,
        };
        let est = ScoreEstimator::new(vec![0], vec![model], SIGMA_FLOOR).unwrap();
        assert_eq!(est.tail_probability(1, 1.0, 1.5).unwrap(), 0.0);
        assert!(est.tail_probability(1, 1.0, 0.5).unwrap() > 0.999);
    }

    #[test]
    fn bank_reuses_prefix_sets() {
        let rows: Vec<Vec<f64>> = (0..20)
            .map(|i| vec![i as f64 % 3.0, (i * 7 % 5) as f64, (i * 3 % 4) as f64])
            .collect();
        let d = [dataset(rows, vec![0.3, 0.5, 0.2])];
        let mut bank = ModelBank::new(&d).unwrap();
        let a = bank.estimator(&[0, 1, 2]).unwrap();
        assert_eq!(bank.len(), 2);
        let b = bank.estimator(&[1, 0, 2]).unwrap();
        assert_eq!(bank.len(), 3);
        assert_eq!(a.model(2).unwrap(), b.model(2).unwrap());
        assert!(b.matches(&[1, 0, 2]) && !b.matches(&[0, 1, 2]));
    }
}
