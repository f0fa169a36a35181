use crate::error::{Error, Result};
use crate::model::Schedule;

/// An `n × m` matrix of nonnegative attribute values together with the
/// per-attribute inspection costs and scoring weights.
///
/// Rows are stored row-major. Row and attribute indices are zero-based and
/// never change once the dataset is built.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    n: usize,
    m: usize,
    values: Vec<f64>,
    attribute_names: Vec<String>,
    costs: Vec<f64>,
    weights: Vec<f64>,
}

impl Dataset {
    pub fn new(
        rows: Vec<Vec<f64>>,
        attribute_names: Vec<String>,
        costs: Vec<f64>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        let m = attribute_names.len();
        let mut values = Vec::with_capacity(rows.len() * m);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::InvalidDataset(format!(
                    "row {i} has {} values, expected {m}",
                    row.len()
                )));
            }
            values.extend_from_slice(row);
        }
        Self::from_flat(rows.len(), values, attribute_names, costs, weights)
    }

    pub fn from_flat(
        n: usize,
        values: Vec<f64>,
        attribute_names: Vec<String>,
        costs: Vec<f64>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        let m = attribute_names.len();
        if n == 0 || m == 0 {
            return Err(Error::InvalidDataset(format!(
                "need at least one row and one attribute (got {n} x {m})"
            )));
        }
        if costs.len() != m || weights.len() != m {
            return Err(Error::InvalidDataset(format!(
                "{m} attributes but {} costs and {} weights",
                costs.len(),
                weights.len()
            )));
        }
        if values.len() != n * m {
            return Err(Error::InvalidDataset(format!(
                "{} values do not fill a {n} x {m} matrix",
                values.len()
            )));
        }
        if let Some((j, c)) = costs
            .iter()
            .enumerate()
            .find(|(_, c)| !(c.is_finite() && **c > 0.0))
        {
            return Err(Error::InvalidDataset(format!(
                "cost of attribute {j} is {c}; costs must be positive"
            )));
        }
        if let Some((j, w)) = weights.iter().enumerate().find(|(_, w)| !w.is_finite()) {
            return Err(Error::InvalidDataset(format!("weight {j} is {w}")));
        }
        if let Some(p) = values.iter().position(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(Error::InvalidDataset(format!(
                "entry at row {}, column {} is {}; entries must be nonnegative",
                p / m,
                p % m,
                values[p]
            )));
        }
        Ok(Self {
            n,
            m,
            values,
            attribute_names,
            costs,
            weights,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n
    }

    pub fn n_attributes(&self) -> usize {
        self.m
    }

    pub fn attribute_names(&self) -> &[String] {
        &self.attribute_names
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_cost(&self) -> f64 {
        self.costs.iter().sum()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.m..(i + 1) * self.m]
    }

    #[inline]
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.m + j]
    }

    /// `w_j * X_ij`.
    #[inline]
    pub fn weighted(&self, i: usize, j: usize) -> f64 {
        self.weights[j] * self.values[i * self.m + j]
    }

    pub fn full_score(&self, i: usize) -> Result<f64> {
        self.check_row(i)?;
        Ok(self.full_score_unchecked(i))
    }

    #[inline]
    pub(crate) fn full_score_unchecked(&self, i: usize) -> f64 {
        self.row(i).iter().zip(&self.weights).map(|(x, w)| x * w).sum()
    }

    /// Weighted sum of the first `h` attributes of row `i` in schedule order.
    pub fn prefix_score(&self, schedule: &Schedule, i: usize, h: usize) -> Result<f64> {
        self.check_row(i)?;
        if h > self.m {
            return Err(Error::PrefixOutOfRange { h, m: self.m });
        }
        if schedule.len() != self.m {
            return Err(Error::InvalidSchedule(format!(
                "schedule covers {} attributes, dataset has {}",
                schedule.len(),
                self.m
            )));
        }
        Ok(schedule.prefix(h).iter().map(|&j| self.weighted(i, j)).sum())
    }

    /// Same metadata (names, costs, weights) and width as `other`.
    pub fn same_schema(&self, other: &Dataset) -> bool {
        self.m == other.m
            && self.weights == other.weights
            && self.costs == other.costs
            && self.attribute_names == other.attribute_names
    }

    fn check_row(&self, i: usize) -> Result<()> {
        if i >= self.n {
            return Err(Error::RowOutOfRange { row: i, n: self.n });
        }
        Ok(())
    }
}

/// Default attribute names `a0, a1, ...`.
pub fn default_attribute_names(m: usize) -> Vec<String> {
    (0..m).map(|j| format!("a{j}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds(rows: Vec<Vec<f64>>, w: Vec<f64>) -> Dataset {
        let m = w.len();
        Dataset::new(rows, default_attribute_names(m), vec![1.0; m], w).unwrap()
    }

    #[test]
    fn full_score_examples() {
        let d = ds(
            vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]],
            vec![1.0, 2.0],
        );
        assert_eq!(d.full_score(2).unwrap(), 3.0);

        let z = ds(vec![vec![4.0, 7.0]], vec![0.0, 0.0]);
        assert_eq!(z.full_score(0).unwrap(), 0.0);

        let d = ds(vec![vec![2.0, 1.0, 3.0]], vec![0.5, 2.0, 1.0]);
        assert_eq!(d.full_score(0).unwrap(), 6.0);
    }

    #[test]
    fn full_score_rejects_bad_row() {
        let d = ds(vec![vec![1.0]], vec![1.0]);
        assert!(matches!(
            d.full_score(1),
            Err(Error::RowOutOfRange { row: 1, n: 1 })
        ));
    }

    #[test]
    fn prefix_score_examples() {
        let d = ds(vec![vec![2.0, 1.0, 3.0]], vec![0.5, 2.0, 1.0]);
        let id = Schedule::identity(3);
        assert_eq!(d.prefix_score(&id, 0, 2).unwrap(), 3.0);
        assert_eq!(d.prefix_score(&id, 0, 0).unwrap(), 0.0);
        assert_eq!(d.prefix_score(&id, 0, 3).unwrap(), 6.0);
        assert!(matches!(
            d.prefix_score(&id, 0, 4),
            Err(Error::PrefixOutOfRange { h: 4, m: 3 })
        ));
    }

    #[test]
    fn validation() {
        let names = default_attribute_names(2);
        assert!(Dataset::new(vec![], names.clone(), vec![1.0; 2], vec![1.0; 2]).is_err());
        assert!(Dataset::new(vec![vec![1.0, -0.5]], names.clone(), vec![1.0; 2], vec![1.0; 2]).is_err());
        assert!(Dataset::new(vec![vec![1.0, 0.5]], names.clone(), vec![1.0, 0.0], vec![1.0; 2]).is_err());
        assert!(Dataset::new(vec![vec![1.0, 0.5]], names.clone(), vec![1.0], vec![1.0; 2]).is_err());
        assert!(Dataset::new(vec![vec![1.0]], names, vec![1.0; 2], vec![1.0; 2]).is_err());
    }
}
