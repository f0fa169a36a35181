//! The trained model document: schedule, threshold, prefix models, bounds.
//!
//! Stored as one JSON object tagged `"version": "1"`. Floats are written in
//! shortest round-trip form and parsed with correct rounding, so a
//! read-after-write reproduces every coefficient exactly.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algorithms::UpperBounds;
use crate::error::{Error, Result};
use crate::estimator::{PrefixModel, ScoreEstimator};
use crate::model::{Dataset, Schedule};

pub const MODEL_VERSION: &str = "1";

/// What the model was trained on: generator seeds when known, and a
/// checksum of every training matrix.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TrainingFingerprint {
    pub seeds: Vec<Option<u64>>,
    pub checksums: Vec<String>,
}

/// SHA-256 of the matrix shape and values (little-endian bits).
pub fn matrix_checksum(dataset: &Dataset) -> String {
    let mut h = Sha256::new();
    h.update((dataset.n_rows() as u64).to_le_bytes());
    h.update((dataset.n_attributes() as u64).to_le_bytes());
    for x in dataset.values() {
        h.update(x.to_le_bytes());
    }
    hex::encode(h.finalize())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelArtifact {
    pub version: String,
    pub attribute_names: Vec<String>,
    pub weights: Vec<f64>,
    pub costs: Vec<f64>,
    /// Top-k size the threshold was tuned for.
    pub k: usize,
    pub schedule: Schedule,
    pub alpha: f64,
    pub sigma_floor: f64,
    pub models: Vec<PrefixModel>,
    pub upper_bounds: UpperBounds,
    pub training: TrainingFingerprint,
}

impl ModelArtifact {
    pub fn new(
        reference: &Dataset,
        k: usize,
        schedule: Schedule,
        alpha: f64,
        estimator: &ScoreEstimator,
        upper_bounds: UpperBounds,
        training: TrainingFingerprint,
    ) -> Self {
        Self {
            version: MODEL_VERSION.to_string(),
            attribute_names: reference.attribute_names().to_vec(),
            weights: reference.weights().to_vec(),
            costs: reference.costs().to_vec(),
            k,
            schedule,
            alpha,
            sigma_floor: estimator.sigma_floor(),
            models: estimator.models().to_vec(),
            upper_bounds,
            training,
        }
    }

    pub fn estimator(&self) -> Result<ScoreEstimator> {
        let len = self.models.len();
        ScoreEstimator::new(
            self.schedule.order()[..len].to_vec(),
            self.models.clone(),
            self.sigma_floor,
        )
    }

    /// Whether `dataset` has the attributes, weights and costs this model
    /// was trained for.
    pub fn fits(&self, dataset: &Dataset) -> bool {
        dataset.attribute_names() == self.attribute_names.as_slice()
            && dataset.weights() == self.weights.as_slice()
            && dataset.costs() == self.costs.as_slice()
    }

    fn validate(&self) -> Result<()> {
        let m = self.attribute_names.len();
        let bad = |msg: String| Err(Error::InvalidParameter(format!("model artifact: {msg}")));
        if self.weights.len() != m || self.costs.len() != m {
            return bad(format!(
                "{m} attributes but {} weights, {} costs",
                self.weights.len(),
                self.costs.len()
            ));
        }
        if self.schedule.len() != m {
            return Err(Error::InvalidSchedule(format!(
                "schedule covers {} attributes, model has {m}",
                self.schedule.len()
            )));
        }
        if self.models.len() != m.saturating_sub(1) {
            return bad(format!("{} prefix models for {m} attributes", self.models.len()));
        }
        if self.upper_bounds.len() != m {
            return bad(format!(
                "{} upper bounds for {m} attributes",
                self.upper_bounds.len()
            ));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return bad(format!("alpha {} outside [0, 1]", self.alpha));
        }
        if self.k == 0 {
            return bad("k = 0".into());
        }
        self.estimator().map(|_| ())
    }
}

pub fn write_model(path: &Path, artifact: &ModelArtifact) -> Result<()> {
    let text = serde_json::to_string_pretty(artifact).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|source| Error::Io {
            path: parent.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, text + "\n").map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Deserialize)]
struct VersionProbe {
    version: serde_json::Value,
}

pub fn read_model(path: &Path) -> Result<ModelArtifact> {
    if !path.is_file() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_model(&text).map_err(|e| match e {
        Error::Json { source, .. } => Error::Json {
            path: path.to_path_buf(),
            source,
        },
        other => other,
    })
}

/// Parses a model document; the version is checked before anything else.
pub fn parse_model(text: &str) -> Result<ModelArtifact> {
    let json_err = |source| Error::Json {
        path: "<model>".into(),
        source,
    };
    let probe: VersionProbe = serde_json::from_str(text).map_err(json_err)?;
    match probe.version.as_str() {
        Some(MODEL_VERSION) => {}
        Some(other) => return Err(Error::UnsupportedVersion(other.to_string())),
        None => return Err(Error::UnsupportedVersion(probe.version.to_string())),
    }
    // surface schedule problems as schedule errors rather than JSON errors
    let raw: serde_json::Value = serde_json::from_str(text).map_err(json_err)?;
    if let Some(order) = raw.get("schedule") {
        let order: Vec<usize> = serde_json::from_value(order.clone()).map_err(json_err)?;
        Schedule::new(order)?;
    }
    let artifact: ModelArtifact = serde_json::from_value(raw).map_err(json_err)?;
    artifact.validate()?;
    Ok(artifact)
}
