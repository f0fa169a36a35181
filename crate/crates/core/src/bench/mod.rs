//! Train/test experiment harness on synthetic corpora.
//!
//! Each trial draws a fresh pair of matrices sharing weights and costs,
//! tunes on the first, queries the second, and scores the answer against
//! the exact top-k. Trials run in parallel and are reported in trial order.

mod table;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use table::{CellStats, Metric, ResultTable, RunningStats};

use crate::algorithms::{compute_upper_bounds, run_mpro, run_pr, run_trivial, run_ub, QueryResult};
use crate::error::{Error, Result};
use crate::estimator::{train_estimator, ScoreEstimator};
use crate::io::{generate_corpus, GeneratorConfig, WeightMode};
use crate::model::{accuracy_metric, exact_topk, Dataset, Schedule};
use crate::tuning::{baseline_schedule, learn_schedule, select_alpha, BaselineVariant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Algorithm {
    Trivial,
    Ub,
    Mpro,
    Pr,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Trivial => "trivial",
            Algorithm::Ub => "ub",
            Algorithm::Mpro => "mpro",
            Algorithm::Pr => "pr",
        })
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "trivial" => Ok(Algorithm::Trivial),
            "ub" => Ok(Algorithm::Ub),
            "mpro" | "mp" => Ok(Algorithm::Mpro),
            "pr" => Ok(Algorithm::Pr),
            other => Err(Error::InvalidParameter(format!("unknown algorithm {other:?}"))),
        }
    }
}

impl From<Algorithm> for String {
    fn from(a: Algorithm) -> Self {
        a.to_string()
    }
}

impl TryFrom<String> for Algorithm {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum ScheduleChoice {
    Baseline(BaselineVariant),
    Learned,
}

impl fmt::Display for ScheduleChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScheduleChoice::Baseline(v) => write!(f, "{v}"),
            ScheduleChoice::Learned => f.write_str("learned"),
        }
    }
}

impl FromStr for ScheduleChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("learned") {
            Ok(ScheduleChoice::Learned)
        } else {
            s.parse().map(ScheduleChoice::Baseline)
        }
    }
}

impl From<ScheduleChoice> for String {
    fn from(s: ScheduleChoice) -> Self {
        s.to_string()
    }
}

impl TryFrom<String> for ScheduleChoice {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl ScheduleChoice {
    /// Resolves the choice against training data. `seed` drives the random
    /// baseline.
    pub fn resolve(&self, training: &[Dataset], k: usize, seed: u64) -> Result<Schedule> {
        match self {
            ScheduleChoice::Baseline(v) => {
                let first = training.first().ok_or(Error::EmptyTraining)?;
                Ok(baseline_schedule(first, *v, seed))
            }
            ScheduleChoice::Learned => learn_schedule(training, k),
        }
    }
}

/// How the pruning threshold is chosen for the test query.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AlphaPolicy {
    /// The tuned threshold.
    Learned,
    Fixed(f64),
    /// The tuned threshold times a factor, capped at 1.
    Factor(f64),
}

impl AlphaPolicy {
    pub fn apply(&self, learned: f64) -> f64 {
        match *self {
            AlphaPolicy::Learned => learned,
            AlphaPolicy::Fixed(a) => a,
            AlphaPolicy::Factor(f) => (f * learned).clamp(0.0, 1.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
    pub algorithms: Vec<Algorithm>,
    pub schedules: Vec<ScheduleChoice>,
    pub reorder_rows: bool,
    pub alpha: AlphaPolicy,
    pub weight_mode: WeightMode,
    /// Derive UB/MPro bounds from the test matrix itself instead of the
    /// training matrix.
    pub true_bounds: bool,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            n: 1000,
            m: 10,
            k: 10,
            trials: 50,
            seed: 0,
            algorithms: vec![Algorithm::Ub, Algorithm::Mpro, Algorithm::Pr],
            schedules: vec![ScheduleChoice::Baseline(BaselineVariant::D)],
            reorder_rows: true,
            alpha: AlphaPolicy::Learned,
            weight_mode: WeightMode::Independent,
            true_bounds: false,
        }
    }
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if self.k == 0 || self.k > self.n {
            return Err(Error::KOutOfRange { k: self.k, n: self.n });
        }
        if self.m == 0 {
            return Err(Error::InvalidParameter("m must be at least 1".into()));
        }
        if self.algorithms.is_empty() || self.schedules.is_empty() {
            return Err(Error::InvalidParameter(
                "need at least one algorithm and one schedule".into(),
            ));
        }
        Ok(())
    }

    pub fn trial_seed(&self, trial: usize) -> u64 {
        self.seed.wrapping_add(trial as u64)
    }

    /// Training and test matrix of one trial.
    pub fn trial_data(&self, trial: usize) -> Result<(Dataset, Dataset)> {
        let config =
            GeneratorConfig::new(self.n, self.m, self.trial_seed(trial)).with_weight_mode(self.weight_mode);
        let mut pair = generate_corpus(&config, 2)?;
        let test = pair.pop().expect("two matrices");
        let train = pair.pop().expect("two matrices");
        Ok((train, test))
    }
}

/// Outcome of one algorithm under one schedule in one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub schedule: ScheduleChoice,
    pub alpha: Option<f64>,
    pub cost: f64,
    pub accuracy: f64,
}

#[derive(Debug, Clone)]
pub struct Experiment {
    pub table: ResultTable,
    pub records: Vec<TrialRecord>,
}

/// A tuned pruning setup: schedule, estimator and learned threshold.
pub struct TunedPr {
    pub schedule: Schedule,
    pub estimator: ScoreEstimator,
    pub alpha: f64,
}

pub fn tune_pr(training: &[Dataset], k: usize, schedule: Schedule, reorder_rows: bool) -> Result<TunedPr> {
    let estimator = train_estimator(training, &schedule)?;
    let alpha = select_alpha(training, k, &schedule, &estimator, reorder_rows)?;
    Ok(TunedPr {
        schedule,
        estimator,
        alpha,
    })
}

fn score(test: &Dataset, k: usize, result: &QueryResult) -> Result<f64> {
    accuracy_metric(&exact_topk(test, k)?, &result.topk)
}

pub fn run_trial(spec: &ExperimentSpec, trial: usize) -> Result<Vec<TrialRecord>> {
    let inner = || -> Result<Vec<TrialRecord>> {
        let seed = spec.trial_seed(trial);
        let (train, test) = spec.trial_data(trial)?;
        let training = std::slice::from_ref(&train);
        let k = spec.k;
        let bounds = if spec.true_bounds {
            compute_upper_bounds(std::slice::from_ref(&test), test.weights())?
        } else {
            compute_upper_bounds(training, train.weights())?
        };
        let mut records = Vec::new();
        for &choice in &spec.schedules {
            let schedule = choice.resolve(training, k, seed)?;
            let tuned = if spec.algorithms.contains(&Algorithm::Pr) {
                Some(tune_pr(training, k, schedule.clone(), spec.reorder_rows)?)
            } else {
                None
            };
            for &algorithm in &spec.algorithms {
                let (result, alpha) = match algorithm {
                    Algorithm::Trivial => (run_trivial(&test, k)?, None),
                    Algorithm::Ub => (run_ub(&test, k, &schedule, &bounds, spec.reorder_rows)?, None),
                    Algorithm::Mpro => (run_mpro(&test, k, &schedule, &bounds)?, None),
                    Algorithm::Pr => {
                        let t = tuned.as_ref().expect("tuned when pr is requested");
                        let alpha = spec.alpha.apply(t.alpha);
                        let r = run_pr(&test, k, &schedule, &t.estimator, alpha, spec.reorder_rows)?;
                        (r, Some(alpha))
                    }
                };
                records.push(TrialRecord {
                    trial,
                    seed,
                    algorithm,
                    schedule: choice,
                    alpha,
                    cost: result.cost,
                    accuracy: score(&test, k, &result)?,
                });
            }
        }
        Ok(records)
    };
    inner().map_err(|e| Error::Trial {
        trial,
        source: Box::new(e),
    })
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<Experiment> {
    spec.validate()?;
    let per_trial: Vec<Vec<TrialRecord>> = (0..spec.trials)
        .into_par_iter()
        .map(|t| run_trial(spec, t))
        .collect::<Result<_>>()?;
    let records: Vec<TrialRecord> = per_trial.into_iter().flatten().collect();
    let mut cells = Vec::new();
    for &schedule in &spec.schedules {
        for &algorithm in &spec.algorithms {
            let rows: Vec<&TrialRecord> = records
                .iter()
                .filter(|r| r.algorithm == algorithm && r.schedule == schedule)
                .collect();
            let cost: RunningStats = rows.iter().map(|r| r.cost).collect();
            let accuracy: RunningStats = rows.iter().map(|r| r.accuracy).collect();
            cells.push(CellStats {
                algorithm,
                schedule,
                trials: rows.len(),
                cost_mean: cost.mean(),
                cost_std: cost.std(),
                accuracy_mean: accuracy.mean(),
                accuracy_std: accuracy.std(),
            });
        }
    }
    Ok(Experiment {
        table: ResultTable { cells },
        records,
    })
}

/// Threshold multipliers compared by the sensitivity sweep.
pub const SWEEP_FACTORS: [f64; 3] = [0.5, 1.0, 2.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepLevel {
    pub factor: f64,
    pub cost_mean: f64,
    pub cost_std: f64,
    pub accuracy_mean: f64,
    pub accuracy_std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    /// Schedule name, or whatever identifies the swept model.
    pub label: String,
    pub trials: usize,
    /// One entry per [`SWEEP_FACTORS`] value.
    pub levels: Vec<SweepLevel>,
    /// Relative accuracy change over relative cost change when halving.
    pub g_down: Option<f64>,
    /// The same when doubling.
    pub g_up: Option<f64>,
}

/// `(a / a_ref) / (c / c_ref)`, or `None` if any denominator is zero.
pub fn gain_ratio(a: f64, a_ref: f64, c: f64, c_ref: f64) -> Option<f64> {
    if a_ref == 0.0 || c_ref == 0.0 || c == 0.0 {
        return None;
    }
    let g = (a / a_ref) / (c / c_ref);
    g.is_finite().then_some(g)
}

impl SweepRow {
    /// Builds a row from per-trial `(accuracy, cost)` observations at each
    /// sweep factor.
    pub fn from_observations(label: impl Into<String>, obs: &[[(f64, f64); 3]]) -> Self {
        let levels: Vec<SweepLevel> = SWEEP_FACTORS
            .iter()
            .enumerate()
            .map(|(i, &factor)| {
                let acc: RunningStats = obs.iter().map(|o| o[i].0).collect();
                let cost: RunningStats = obs.iter().map(|o| o[i].1).collect();
                SweepLevel {
                    factor,
                    cost_mean: cost.mean(),
                    cost_std: cost.std(),
                    accuracy_mean: acc.mean(),
                    accuracy_std: acc.std(),
                }
            })
            .collect();
        let (half, mid, double) = (&levels[0], &levels[1], &levels[2]);
        let g_down = gain_ratio(
            half.accuracy_mean,
            mid.accuracy_mean,
            half.cost_mean,
            mid.cost_mean,
        );
        let g_up = gain_ratio(
            double.accuracy_mean,
            mid.accuracy_mean,
            double.cost_mean,
            mid.cost_mean,
        );
        Self {
            label: label.into(),
            trials: obs.len(),
            levels,
            g_down,
            g_up,
        }
    }
}

/// Accuracy and cost of the pruning scan on `test` at each sweep factor of
/// `alpha`.
pub fn sweep_levels(
    test: &Dataset,
    k: usize,
    schedule: &Schedule,
    estimator: &ScoreEstimator,
    alpha: f64,
    reorder_rows: bool,
) -> Result<[(f64, f64); 3]> {
    let mut out = [(0.0, 0.0); 3];
    for (slot, &f) in out.iter_mut().zip(&SWEEP_FACTORS) {
        let a = (alpha * f).clamp(0.0, 1.0);
        let r = run_pr(test, k, schedule, estimator, a, reorder_rows)?;
        *slot = (score(test, k, &r)?, r.cost);
    }
    Ok(out)
}

/// Threshold sensitivity on fresh synthetic trials: tune on the training
/// matrix, then query the test matrix at half, once and twice the tuned
/// threshold.
pub fn run_alpha_sweep(spec: &ExperimentSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let per_trial: Vec<Vec<[(f64, f64); 3]>> = (0..spec.trials)
        .into_par_iter()
        .map(|trial| {
            let inner = || -> Result<Vec<[(f64, f64); 3]>> {
                let (train, test) = spec.trial_data(trial)?;
                let training = std::slice::from_ref(&train);
                spec.schedules
                    .iter()
                    .map(|choice| {
                        let schedule = choice.resolve(training, spec.k, spec.trial_seed(trial))?;
                        let t = tune_pr(training, spec.k, schedule, spec.reorder_rows)?;
                        sweep_levels(
                            &test,
                            spec.k,
                            &t.schedule,
                            &t.estimator,
                            t.alpha,
                            spec.reorder_rows,
                        )
                    })
                    .collect()
            };
            inner().map_err(|e| Error::Trial {
                trial,
                source: Box::new(e),
            })
        })
        .collect::<Result<_>>()?;
    Ok(spec
        .schedules
        .iter()
        .enumerate()
        .map(|(s, &choice)| {
            let obs: Vec<[(f64, f64); 3]> = per_trial.iter().map(|t| t[s]).collect();
            SweepRow::from_observations(choice.to_string(), &obs)
        })
        .collect())
}

/// Sweep rows as CSV: one line per (schedule, factor).
pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let fmt_opt = |g: Option<f64>| g.map_or_else(|| "undefined".to_string(), |v| v.to_string());
    let mut out =
        String::from("label,factor,trials,cost_mean,cost_std,accuracy_mean,accuracy_std,g_down,g_up\n");
    for r in rows {
        for l in &r.levels {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                r.label,
                l.factor,
                r.trials,
                l.cost_mean,
                l.cost_std,
                l.accuracy_mean,
                l.accuracy_std,
                fmt_opt(r.g_down),
                fmt_opt(r.g_up)
            ));
        }
    }
    out
}

pub fn sweep_to_text(rows: &[SweepRow]) -> String {
    let fmt_g = |g: Option<f64>| g.map_or_else(|| "undefined".to_string(), |v| format!("{v:.2}"));
    let mut out = format!("{:<10}", "");
    for r in rows {
        out.push_str(&format!(" {:>13}", r.label));
    }
    out.push('\n');
    let labels = ["alpha*/2", "alpha*", "2alpha*"];
    for (metric, pick) in [("cost", true), ("accuracy", false)] {
        out.push_str(&format!("[{metric}]\n"));
        for (i, label) in labels.iter().enumerate() {
            out.push_str(&format!("{label:<10}"));
            for r in rows {
                let l = &r.levels[i];
                let (mean, std) = if pick {
                    (l.cost_mean, l.cost_std)
                } else {
                    (l.accuracy_mean, l.accuracy_std)
                };
                out.push_str(&format!(" {:>13}", format!("{mean:.2} ({std:.2})")));
            }
            out.push('\n');
        }
    }
    out.push_str(&format!("{:<10}", "g_down"));
    for r in rows {
        out.push_str(&format!(" {:>13}", fmt_g(r.g_down)));
    }
    out.push('\n');
    out.push_str(&format!("{:<10}", "g_up"));
    for r in rows {
        out.push_str(&format!(" {:>13}", fmt_g(r.g_up)));
    }
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_parse() {
        assert_eq!("PR".parse::<Algorithm>().unwrap(), Algorithm::Pr);
        assert!("xyz".parse::<Algorithm>().is_err());
        assert_eq!(
            "learned".parse::<ScheduleChoice>().unwrap(),
            ScheduleChoice::Learned
        );
        assert_eq!(
            "D".parse::<ScheduleChoice>().unwrap(),
            ScheduleChoice::Baseline(BaselineVariant::D)
        );
    }

    #[test]
    fn gain_of_flat_curve_is_one() {
        let obs = vec![[(0.8, 0.3); 3], [(0.6, 0.2); 3]];
        let row = SweepRow::from_observations("learned", &obs);
        assert!((row.g_down.unwrap() - 1.0).abs() < 1e-12);
        assert!((row.g_up.unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(gain_ratio(1.0, 0.0, 1.0, 1.0), None);
        assert_eq!(gain_ratio(1.0, 1.0, 0.0, 1.0), None);
    }

    #[test]
    fn alpha_policy() {
        assert_eq!(AlphaPolicy::Learned.apply(0.2), 0.2);
        assert_eq!(AlphaPolicy::Fixed(0.5).apply(0.2), 0.5);
        assert_eq!(AlphaPolicy::Factor(2.0).apply(0.7), 1.0);
    }

    #[test]
    fn spec_validation() {
        assert!(ExperimentSpec::default().validate().is_ok());
        let bad = ExperimentSpec {
            trials: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = ExperimentSpec {
            k: 2000,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
