use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Algorithm, ScheduleChoice};
use crate::error::{Error, Result};

/// Streaming mean and population standard deviation (Welford).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningStats {
    count: usize,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn std(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.m2 / self.count as f64).max(0.0).sqrt()
        }
    }
}

impl FromIterator<f64> for RunningStats {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::default();
        for x in iter {
            s.push(x);
        }
        s
    }
}

/// Mean and standard deviation of cost and accuracy for one
/// (algorithm, schedule) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellStats {
    pub algorithm: Algorithm,
    pub schedule: ScheduleChoice,
    pub trials: usize,
    pub cost_mean: f64,
    pub cost_std: f64,
    pub accuracy_mean: f64,
    pub accuracy_std: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultTable {
    pub cells: Vec<CellStats>,
}

impl ResultTable {
    pub fn cell(&self, algorithm: Algorithm, schedule: ScheduleChoice) -> Option<&CellStats> {
        self.cells
            .iter()
            .find(|c| c.algorithm == algorithm && c.schedule == schedule)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for c in &self.cells {
            w.serialize(c).map_err(|source| Error::Csv {
                path: "<table>".into(),
                source,
            })?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv writer emits utf-8"))
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let cells = r
            .deserialize()
            .collect::<std::result::Result<Vec<CellStats>, _>>()
            .map_err(|source| Error::Csv {
                path: "<table>".into(),
                source,
            })?;
        Ok(Self { cells })
    }

    /// Aligned text with `mean (std)` entries, algorithms as rows and
    /// schedules as columns.
    pub fn to_text(&self, metric: Metric) -> String {
        let mut algorithms: Vec<Algorithm> = Vec::new();
        let mut schedules: Vec<ScheduleChoice> = Vec::new();
        for c in &self.cells {
            if !algorithms.contains(&c.algorithm) {
                algorithms.push(c.algorithm);
            }
            if !schedules.contains(&c.schedule) {
                schedules.push(c.schedule);
            }
        }
        let mut out = String::new();
        let _ = write!(out, "{:<8}", metric.label());
        for s in &schedules {
            let _ = write!(out, " {:>13}", s.to_string());
        }
        out.push('\n');
        for a in &algorithms {
            let _ = write!(out, "{:<8}", a.to_string());
            for s in &schedules {
                let entry = match self.cell(*a, *s) {
                    Some(c) => {
                        let (mean, std) = match metric {
                            Metric::Cost => (c.cost_mean, c.cost_std),
                            Metric::Accuracy => (c.accuracy_mean, c.accuracy_std),
                        };
                        format!("{mean:.2} ({std:.2})")
                    }
                    None => "-".to_string(),
                };
                let _ = write!(out, " {entry:>13}");
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Cost,
    Accuracy,
}

impl Metric {
    fn label(self) -> &'static str {
        match self {
            Metric::Cost => "cost",
            Metric::Accuracy => "accuracy",
        }
    }
}
