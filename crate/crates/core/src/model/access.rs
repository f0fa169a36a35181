use crate::error::{Error, Result};
use crate::model::Schedule;

/// Record of which cells a query inspected.
///
/// Cells are always read in schedule order, so the inspected cells of a row
/// are fully described by how deep into the schedule the row got. Storing
/// the depth makes the prefix contract hold by construction and rules out
/// double-counting a cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccessLog {
    order: Vec<usize>,
    depth: Vec<usize>,
}

impl AccessLog {
    pub fn new(n: usize, schedule: &Schedule) -> Self {
        Self {
            order: schedule.order().to_vec(),
            depth: vec![0; n],
        }
    }

    /// Builds a log from per-row prefix lengths.
    pub fn from_depths(schedule: &Schedule, depth: Vec<usize>) -> Result<Self> {
        if let Some(&d) = depth.iter().find(|&&d| d > schedule.len()) {
            return Err(Error::PrefixOutOfRange {
                h: d,
                m: schedule.len(),
            });
        }
        Ok(Self {
            order: schedule.order().to_vec(),
            depth,
        })
    }

    /// Builds a log from an explicit list of `(row, column)` cells. Fails if
    /// the cells of some row do not form a prefix of the schedule.
    pub fn from_cells(n: usize, schedule: &Schedule, cells: &[(usize, usize)]) -> Result<Self> {
        let m = schedule.len();
        let mut position = vec![0; m];
        for (p, &j) in schedule.order().iter().enumerate() {
            position[j] = p;
        }
        let mut seen = vec![vec![false; m]; n];
        for &(i, j) in cells {
            if i >= n {
                return Err(Error::RowOutOfRange { row: i, n });
            }
            if j >= m {
                return Err(Error::InvalidParameter(format!("column {j} out of range")));
            }
            if std::mem::replace(&mut seen[i][position[j]], true) {
                return Err(Error::InvalidParameter(format!("cell ({i}, {j}) listed twice")));
            }
        }
        let mut depth = Vec::with_capacity(n);
        for (i, row) in seen.iter().enumerate() {
            let d = row.iter().take_while(|&&b| b).count();
            if row[d..].iter().any(|&b| b) {
                return Err(Error::InvalidParameter(format!(
                    "inspected cells of row {i} are not a schedule prefix"
                )));
            }
            depth.push(d);
        }
        Ok(Self {
            order: schedule.order().to_vec(),
            depth,
        })
    }

    /// Marks the next scheduled cell of `row` as inspected and returns its
    /// column, or `None` when the row is already complete.
    pub fn inspect_next(&mut self, row: usize) -> Option<usize> {
        let d = self.depth[row];
        let col = *self.order.get(d)?;
        self.depth[row] = d + 1;
        Some(col)
    }

    pub fn n_rows(&self) -> usize {
        self.depth.len()
    }

    pub fn schedule_order(&self) -> &[usize] {
        &self.order
    }

    pub fn depth(&self, row: usize) -> usize {
        self.depth[row]
    }

    pub fn depths(&self) -> &[usize] {
        &self.depth
    }

    /// Columns inspected on `row`, in the order they were read.
    pub fn inspected(&self, row: usize) -> &[usize] {
        &self.order[..self.depth[row]]
    }

    pub fn is_inspected(&self, row: usize, col: usize) -> bool {
        self.inspected(row).contains(&col)
    }

    /// Number of inspected cells per column (indexed by attribute).
    pub fn column_counts(&self) -> Vec<usize> {
        let m = self.order.len();
        // rows inspected to at least depth p, for each schedule position p
        let mut reach = vec![0usize; m + 1];
        for &d in &self.depth {
            reach[d] += 1;
        }
        let mut counts = vec![0; m];
        let mut at_least = 0;
        for p in (0..m).rev() {
            at_least += reach[p + 1];
            counts[self.order[p]] = at_least;
        }
        counts
    }

    pub fn total_cells(&self) -> usize {
        self.depth.iter().sum()
    }
}
