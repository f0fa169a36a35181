//! Synthetic matrices: half-normal entries, uniform weights and costs.
//!
//! Randomness comes from ChaCha8 seeded with the config seed. Stream 0
//! draws the costs and weights; stream `i + 1` draws matrix `i` row-major,
//! each entry the absolute value of a standard normal variate (ziggurat
//! sampler). Every matrix of a corpus therefore shares the same weights and
//! costs, and matrix `i` does not depend on how many matrices are requested.

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{default_attribute_names, Dataset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    Independent,
    /// `w_j = C(A_j)`.
    EqualToCost,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostMode {
    Uniform01,
    Fixed(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub weight_mode: WeightMode,
    pub cost_mode: CostMode,
}

impl GeneratorConfig {
    pub fn new(n: usize, m: usize, seed: u64) -> Self {
        Self {
            n,
            m,
            seed,
            weight_mode: WeightMode::Independent,
            cost_mode: CostMode::Uniform01,
        }
    }

    pub fn with_weight_mode(mut self, mode: WeightMode) -> Self {
        self.weight_mode = mode;
        self
    }

    pub fn with_cost_mode(mut self, mode: CostMode) -> Self {
        self.cost_mode = mode;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 {
            return Err(Error::InvalidParameter(format!(
                "generator needs n >= 1 and m >= 1 (got {} x {})",
                self.n, self.m
            )));
        }
        if let CostMode::Fixed(c) = &self.cost_mode {
            if c.len() != self.m {
                return Err(Error::InvalidParameter(format!(
                    "{} fixed costs for {} attributes",
                    c.len(),
                    self.m
                )));
            }
        }
        Ok(())
    }
}

/// Where a generated matrix came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config: GeneratorConfig,
    pub index: usize,
}

fn metadata(config: &GeneratorConfig) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(0);
    let costs: Vec<f64> = match &config.cost_mode {
        CostMode::Uniform01 => (0..config.m).map(|_| rng.sample(Open01)).collect(),
        CostMode::Fixed(c) => c.clone(),
    };
    let weights = match config.weight_mode {
        WeightMode::Independent => (0..config.m).map(|_| rng.sample(Open01)).collect(),
        WeightMode::EqualToCost => costs.clone(),
    };
    (costs, weights)
}

fn matrix(config: &GeneratorConfig, index: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index as u64 + 1);
    (0..config.n * config.m)
        .map(|_| {
            let z: f64 = rng.sample(StandardNormal);
            z.abs()
        })
        .collect()
}

/// Matrix `index` of the corpus described by `config`.
pub fn generate_matrix(config: &GeneratorConfig, index: usize) -> Result<Dataset> {
    config.validate()?;
    let (costs, weights) = metadata(config);
    Dataset::from_flat(
        config.n,
        matrix(config, index),
        default_attribute_names(config.m),
        costs,
        weights,
    )
}

pub fn generate_dataset(config: &GeneratorConfig) -> Result<Dataset> {
    generate_matrix(config, 0)
}

/// `count` matrices sharing one set of weights and costs.
pub fn generate_corpus(config: &GeneratorConfig, count: usize) -> Result<Vec<Dataset>> {
    (0..count).map(|i| generate_matrix(config, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_nonnegative() {
        let cfg = GeneratorConfig::new(50, 4, 7);
        let a = generate_dataset(&cfg).unwrap();
        assert_eq!(a, generate_dataset(&cfg).unwrap());
        assert!(a.values().iter().all(|&x| x >= 0.0));
        assert!(a.costs().iter().all(|&c| c > 0.0 && c < 1.0));
        assert!(a.weights().iter().all(|&w| w > 0.0 && w < 1.0));
        assert_ne!(a, generate_dataset(&GeneratorConfig::new(50, 4, 8)).unwrap());
    }

    #[test]
    fn corpus_shares_metadata() {
        let cfg = GeneratorConfig::new(20, 3, 1);
        let c = generate_corpus(&cfg, 3).unwrap();
        assert!(c[0].same_schema(&c[1]) && c[1].same_schema(&c[2]));
        assert_ne!(c[0].values(), c[1].values());
        assert_eq!(c[1], generate_matrix(&cfg, 1).unwrap());
    }

    #[test]
    fn equal_to_cost_mode() {
        let cfg = GeneratorConfig::new(5, 6, 3).with_weight_mode(WeightMode::EqualToCost);
        let d = generate_dataset(&cfg).unwrap();
        assert_eq!(d.weights(), d.costs());
        let cfg = GeneratorConfig::new(5, 2, 3).with_cost_mode(CostMode::Fixed(vec![2.0, 4.0]));
        assert_eq!(generate_dataset(&cfg).unwrap().costs(), &[2.0, 4.0]);
    }

    #[test]
    fn rejects_empty_shapes() {
        assert!(generate_dataset(&GeneratorConfig::new(0, 3, 1)).is_err());
        assert!(generate_dataset(&GeneratorConfig::new(3, 0, 1)).is_err());
        let bad = GeneratorConfig::new(3, 2, 1).with_cost_mode(CostMode::Fixed(vec![1.0]));
        assert!(generate_dataset(&bad).is_err());
    }
}
