//! Synthetic data, dataset directories and model artifacts.

mod artifact;
mod dataset_file;
mod generator;

pub use artifact::{
    matrix_checksum, parse_model, read_model, write_model, ModelArtifact, TrainingFingerprint, MODEL_VERSION,
};
pub use dataset_file::{
    read_dataset, read_dataset_with_meta, read_meta, write_dataset, DatasetMeta, MATRIX_FILE, META_FILE,
};
pub use generator::{
    generate_corpus, generate_dataset, generate_matrix, CostMode, GeneratorConfig, Provenance, WeightMode,
};
