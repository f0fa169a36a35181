use std::cmp::Ordering;

/// A row together with a score, ordered so that "greater" means "ranks
/// higher": larger score first, lower row index on ties.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ranked {
    pub score: f64,
    pub row: usize,
}

impl Eq for Ranked {}

impl Ord for Ranked {
    fn cmp(&self, other: &Self) -> Ordering {
        self.score
            .total_cmp(&other.score)
            .then_with(|| other.row.cmp(&self.row))
    }
}

impl PartialOrd for Ranked {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A set of row identifiers with their full scores, kept best-first.
#[derive(Debug, Clone, PartialEq)]
pub struct TopKSet {
    entries: Vec<Ranked>,
}

impl TopKSet {
    pub fn from_entries(mut entries: Vec<Ranked>) -> Self {
        entries.sort_by(|a, b| b.cmp(a));
        Self { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Ranked] {
        &self.entries
    }

    pub fn rows(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|e| e.row)
    }

    /// Row ids in ascending order.
    pub fn sorted_rows(&self) -> Vec<usize> {
        let mut r: Vec<usize> = self.rows().collect();
        r.sort_unstable();
        r
    }

    pub fn contains(&self, row: usize) -> bool {
        self.entries.iter().any(|e| e.row == row)
    }

    /// Smallest score in the set (the entry threshold).
    pub fn min_score(&self) -> Option<f64> {
        self.entries.last().map(|e| e.score)
    }
}
