//! Exponential-kernel smoothing of full scores against prefix scores.

use crate::error::{Error, Result};
use crate::estimator::{PrefixScorePair, SIGMA_FLOOR};

/// `exp(-|x - y| / beta)`.
#[inline]
pub fn kernel(x: f64, y: f64, beta: f64) -> f64 {
    (-(x - y).abs() / beta).exp()
}

/// Kernel width: one fifth of the population standard deviation of the
/// prefix scores, or [`SIGMA_FLOOR`] when they are all equal.
pub fn default_beta(pairs: &[PrefixScorePair]) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::EmptyTraining);
    }
    let first = pairs[0].prefix_score;
    if pairs.iter().all(|p| p.prefix_score == first) {
        return Ok(SIGMA_FLOOR);
    }
    let n = pairs.len() as f64;
    let mean = pairs.iter().map(|p| p.prefix_score).sum::<f64>() / n;
    let var = pairs.iter().map(|p| (p.prefix_score - mean).powi(2)).sum::<f64>() / n;
    Ok((var.sqrt() / 5.0).max(SIGMA_FLOOR))
}

fn mean_full(pairs: &[PrefixScorePair]) -> f64 {
    pairs.iter().map(|p| p.full_score).sum::<f64>() / pairs.len() as f64
}

/// Kernel moments at `s`: (ΣK, ΣK·c, ΣK·c²) with `c = b - shift`.
fn moments(pairs: &[PrefixScorePair], s: f64, beta: f64, shift: f64) -> (f64, f64, f64) {
    pairs.iter().fold((0.0, 0.0, 0.0), |(w, m1, m2), p| {
        let k = kernel(p.prefix_score, s, beta);
        let c = p.full_score - shift;
        (w + k, m1 + k * c, m2 + k * c * c)
    })
}

/// Kernel-weighted mean of the full scores around prefix score `s`.
///
/// Panics if `pairs` is empty.
pub fn kernel_mu(pairs: &[PrefixScorePair], s: f64, beta: f64) -> f64 {
    assert!(!pairs.is_empty(), "kernel_mu needs at least one pair");
    let shift = mean_full(pairs);
    let (w, m1, _) = moments(pairs, s, beta, shift);
    shift + m1 / w
}

/// Kernel-weighted standard deviation of the full scores around `s`.
///
/// The variance is computed on full scores centred at their global mean,
/// which leaves it unchanged but avoids cancellation when the scores sit far
/// from zero.
pub fn kernel_sigma(pairs: &[PrefixScorePair], s: f64, beta: f64) -> f64 {
    assert!(!pairs.is_empty(), "kernel_sigma needs at least one pair");
    let shift = mean_full(pairs);
    let (w, m1, m2) = moments(pairs, s, beta, shift);
    let mean = m1 / w;
    (m2 / w - mean * mean).max(0.0).sqrt()
}

/// Evaluates [`kernel_mu`] and [`kernel_sigma`] at every training prefix
/// score in `O(n log n)`.
///
/// With the prefix scores sorted, the kernel factorizes across neighbours:
/// `K(a_i, a_j) = Π exp(-(a_{l+1} - a_l)/β)` over the gaps between them, so
/// the weighted sums to the left and right of each point are running sums
/// damped by one factor per gap.
pub fn smooth_at_training_points(pairs: &[PrefixScorePair], beta: f64) -> Vec<(f64, f64)> {
    let n = pairs.len();
    if n == 0 {
        return Vec::new();
    }
    let shift = mean_full(pairs);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| {
        pairs[a]
            .prefix_score
            .total_cmp(&pairs[b].prefix_score)
            .then(a.cmp(&b))
    });
    let a: Vec<f64> = idx.iter().map(|&i| pairs[i].prefix_score).collect();
    let c: Vec<f64> = idx.iter().map(|&i| pairs[i].full_score - shift).collect();
    let damp: Vec<f64> = a.windows(2).map(|g| (-(g[1] - g[0]) / beta).exp()).collect();

    // inclusive sums from the left
    let mut left = vec![(0.0, 0.0, 0.0); n];
    let mut acc = (0.0, 0.0, 0.0);
    for t in 0..n {
        if t > 0 {
            let f = damp[t - 1];
            acc = (acc.0 * f, acc.1 * f, acc.2 * f);
        }
        acc = (acc.0 + 1.0, acc.1 + c[t], acc.2 + c[t] * c[t]);
        left[t] = acc;
    }
    // exclusive sums from the right
    let mut out = vec![(0.0, 0.0); n];
    let mut right = (0.0, 0.0, 0.0);
    for t in (0..n).rev() {
        if t + 1 < n {
            let f = damp[t];
            let u = t + 1;
            right = (
                (right.0 + 1.0) * f,
                (right.1 + c[u]) * f,
                (right.2 + c[u] * c[u]) * f,
            );
        }
        let w = left[t].0 + right.0;
        let m1 = (left[t].1 + right.1) / w;
        let m2 = (left[t].2 + right.2) / w;
        out[idx[t]] = (shift + m1, (m2 - m1 * m1).max(0.0).sqrt());
    }
    out
}
