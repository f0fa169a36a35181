//! Reference implementations used by the integration tests. These are
//! written from the definitions and share no code with the library beyond
//! the data types and the fitted estimator being checked.

#![allow(dead_code)]

use probetopk::estimator::ScoreEstimator;
use probetopk::io::{generate_corpus, GeneratorConfig};
use probetopk::model::{Dataset, Schedule};
use probetopk::tuning::AccuracyCostPoint;

pub fn score(d: &Dataset, row: usize) -> f64 {
    let w = d.weights();
    d.row(row).iter().zip(w).map(|(x, w)| x * w).sum()
}

/// Top-k rows by sorting every row, highest score first, lower row first
/// on ties. Returned sorted by row id.
pub fn brute_topk(d: &Dataset, k: usize) -> Vec<usize> {
    let mut rows: Vec<(f64, usize)> = (0..d.n_rows()).map(|i| (score(d, i), i)).collect();
    rows.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
    let mut top: Vec<usize> = rows[..k].iter().map(|r| r.1).collect();
    top.sort_unstable();
    top
}

/// Largest weighted contribution of each column of `d`.
pub fn column_maxima(d: &Dataset) -> Vec<f64> {
    (0..d.n_attributes())
        .map(|j| {
            (0..d.n_rows())
                .map(|i| d.weights()[j] * d.row(i)[j])
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect()
}

pub fn pair(n: usize, m: usize, seed: u64) -> (Dataset, Dataset) {
    let mut c = generate_corpus(&GeneratorConfig::new(n, m, seed), 2).unwrap();
    let test = c.pop().unwrap();
    (c.pop().unwrap(), test)
}

pub fn one(n: usize, m: usize, seed: u64) -> Dataset {
    pair(n, m, seed).0
}

/// Order in which the scan visits rows: by weighted first scheduled value,
/// descending, lower row first on ties; or storage order.
pub fn processing_order(d: &Dataset, schedule: &Schedule, reorder: bool) -> Vec<usize> {
    let mut rows: Vec<usize> = (0..d.n_rows()).collect();
    if reorder {
        let j = schedule.order()[0];
        let key = |i: usize| d.weights()[j] * d.row(i)[j];
        rows.sort_by(|&a, &b| key(b).partial_cmp(&key(a)).unwrap().then(a.cmp(&b)));
    }
    rows
}

/// Score of the weakest exact top-k row.
pub fn kth_score(d: &Dataset, k: usize) -> f64 {
    let mut s: Vec<f64> = (0..d.n_rows()).map(|i| score(d, i)).collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s[k - 1]
}

/// Tail probabilities of `row` at each prefix length the estimator covers,
/// against a fixed threshold.
pub fn row_probabilities(
    d: &Dataset,
    row: usize,
    schedule: &Schedule,
    est: &ScoreEstimator,
    delta: f64,
) -> Vec<f64> {
    let mut s = 0.0;
    (1..=est.max_prefix())
        .map(|h| {
            let j = schedule.order()[h - 1];
            s += d.weights()[j] * d.row(row)[j];
            est.tail_probability(h, s, delta).unwrap()
        })
        .collect()
}

/// Number of scheduled attributes the frozen-threshold scan reads for a
/// non-seed row: up to and including the first prefix whose tail
/// probability drops below `alpha`, or all of them.
pub fn replay_depth(probs: &[f64], alpha: f64, m: usize) -> usize {
    probs.iter().position(|&p| p < alpha).map_or(m, |h| h + 1)
}

/// The pruning scan with its threshold frozen at the k-th best full score.
/// The first k processed rows are read in full; every other row stops at
/// its first prefix with tail probability below `alpha`. Accuracy counts
/// exact top-k rows that were read in full.
pub fn replay(
    d: &Dataset,
    k: usize,
    schedule: &Schedule,
    est: &ScoreEstimator,
    alpha: f64,
    reorder: bool,
) -> AccuracyCostPoint {
    Replay::new(d, k, schedule, est, reorder).at(alpha)
}

/// [`replay`] with the per-row probabilities computed once, for sweeping
/// many thresholds over one matrix.
pub struct Replay {
    k: usize,
    m: usize,
    /// (is an exact top-k row, tail probabilities) for non-seed rows
    rows: Vec<(bool, Vec<f64>)>,
    seed_cost: f64,
    seed_hits: usize,
    prefix_cost: Vec<f64>,
    total: f64,
}

impl Replay {
    pub fn new(d: &Dataset, k: usize, schedule: &Schedule, est: &ScoreEstimator, reorder: bool) -> Self {
        let (n, m) = (d.n_rows(), d.n_attributes());
        let delta = kth_score(d, k);
        let top = brute_topk(d, k);
        let order = processing_order(d, schedule, reorder);
        let mut prefix_cost = vec![0.0];
        for &j in schedule.order() {
            prefix_cost.push(prefix_cost.last().unwrap() + d.costs()[j]);
        }
        let is_top = |r: usize| top.binary_search(&r).is_ok();
        Self {
            k,
            m,
            rows: order[k..]
                .iter()
                .map(|&r| (is_top(r), row_probabilities(d, r, schedule, est, delta)))
                .collect(),
            seed_cost: k as f64 * prefix_cost[m],
            seed_hits: order[..k].iter().filter(|&&r| is_top(r)).count(),
            total: n as f64 * prefix_cost[m],
            prefix_cost,
        }
    }

    pub fn at(&self, alpha: f64) -> AccuracyCostPoint {
        let mut paid = self.seed_cost;
        let mut found = self.seed_hits;
        for (top, probs) in &self.rows {
            let depth = replay_depth(probs, alpha, self.m);
            paid += self.prefix_cost[depth];
            if depth == self.m && *top {
                found += 1;
            }
        }
        AccuracyCostPoint {
            accuracy: found as f64 / self.k as f64,
            cost: paid / self.total,
            alpha,
        }
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].partial_cmp(&xs[b]).unwrap());
    let mut r = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &t in &idx[i..=j] {
            r[t] = avg;
        }
        i = j + 1;
    }
    r
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    let (rx, ry) = (ranks(x), ranks(y));
    let (mx, my) = (mean(&rx), mean(&ry));
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    if vx == 0.0 || vy == 0.0 {
        0.0
    } else {
        cov / (vx * vy).sqrt()
    }
}
