use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The fixed order in which attributes are read on every row.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Schedule {
    order: Vec<usize>,
}

impl Schedule {
    /// Builds a schedule from a zero-based permutation of `0..order.len()`.
    pub fn new(order: Vec<usize>) -> Result<Self> {
        check_partial(&order, order.len())?;
        if order.is_empty() {
            return Err(Error::InvalidSchedule("empty schedule".into()));
        }
        Ok(Self { order })
    }

    pub fn identity(m: usize) -> Self {
        Self {
            order: (0..m).collect(),
        }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Attribute read at zero-based position `pos`.
    pub fn attribute(&self, pos: usize) -> usize {
        self.order[pos]
    }

    pub fn prefix(&self, h: usize) -> &[usize] {
        &self.order[..h]
    }
}

impl TryFrom<Vec<usize>> for Schedule {
    type Error = Error;

    fn try_from(order: Vec<usize>) -> Result<Self> {
        Schedule::new(order)
    }
}

impl From<Schedule> for Vec<usize> {
    fn from(s: Schedule) -> Self {
        s.order
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.order.iter().map(|j| j.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Checks that `prefix` lists distinct attributes drawn from `0..m`.
pub(crate) fn check_partial(prefix: &[usize], m: usize) -> Result<()> {
    let mut seen = vec![false; m];
    for &j in prefix {
        if j >= m {
            return Err(Error::InvalidSchedule(format!(
                "attribute {j} out of range for {m} attributes"
            )));
        }
        if std::mem::replace(&mut seen[j], true) {
            return Err(Error::InvalidSchedule(format!("attribute {j} appears twice")));
        }
    }
    Ok(())
}
