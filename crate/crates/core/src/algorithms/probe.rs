use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::model::{AccessLog, Dataset, Ranked, Schedule, TopKSet};

/// Cell-by-cell view of a hidden matrix. Every revealed value goes through
/// [`Probe::advance`], which charges it to the access log.
pub(crate) struct Probe<'a> {
    data: &'a Dataset,
    log: AccessLog,
    prefix: Vec<f64>,
}

impl<'a> Probe<'a> {
    pub(crate) fn new(data: &'a Dataset, schedule: &Schedule) -> Self {
        Self {
            data,
            log: AccessLog::new(data.n_rows(), schedule),
            prefix: vec![0.0; data.n_rows()],
        }
    }

    /// Reveals the next scheduled cell of `row` and returns the updated
    /// prefix score, or `None` if the row is complete.
    pub(crate) fn advance(&mut self, row: usize) -> Option<f64> {
        let col = self.log.inspect_next(row)?;
        self.prefix[row] += self.data.weighted(row, col);
        Some(self.prefix[row])
    }

    pub(crate) fn depth(&self, row: usize) -> usize {
        self.log.depth(row)
    }

    pub(crate) fn prefix_score(&self, row: usize) -> f64 {
        self.prefix[row]
    }

    pub(crate) fn is_complete(&self, row: usize) -> bool {
        self.depth(row) == self.data.n_attributes()
    }

    /// Reads the rest of `row` and returns its full score.
    pub(crate) fn complete(&mut self, row: usize) -> f64 {
        while self.advance(row).is_some() {}
        self.data.full_score_unchecked(row)
    }

    /// Reads the first scheduled attribute of every row and returns the
    /// order in which rows should be processed: storage order, or by
    /// decreasing weighted first-attribute value when `reorder` is set.
    pub(crate) fn open_rows(&mut self, reorder: bool) -> Vec<usize> {
        let n = self.data.n_rows();
        let firsts: Vec<Ranked> = (0..n)
            .map(|row| Ranked {
                score: self.advance(row).unwrap_or(0.0),
                row,
            })
            .collect();
        if !reorder {
            return (0..n).collect();
        }
        let mut sorted = firsts;
        sorted.sort_by(|a, b| b.cmp(a));
        sorted.into_iter().map(|r| r.row).collect()
    }

    pub(crate) fn finish(self) -> AccessLog {
        self.log
    }
}

/// The current candidate top-k set of the scan-based algorithms.
pub(crate) struct Candidates {
    heap: BinaryHeap<Reverse<Ranked>>,
}

impl Candidates {
    pub(crate) fn new(seed: Vec<Ranked>) -> Self {
        Self {
            heap: seed.into_iter().map(Reverse).collect(),
        }
    }

    /// Score of the weakest member (`δ`).
    pub(crate) fn threshold(&self) -> f64 {
        self.heap.peek().map_or(f64::NEG_INFINITY, |r| r.0.score)
    }

    /// Replaces the weakest member when `entry` scores strictly higher.
    pub(crate) fn offer(&mut self, entry: Ranked) {
        if entry.score > self.threshold() {
            self.heap.pop();
            self.heap.push(Reverse(entry));
        }
    }

    pub(crate) fn into_topk(self) -> TopKSet {
        TopKSet::from_entries(self.heap.into_iter().map(|r| r.0).collect())
    }
}
