//! Dataset directories: `matrix.csv` plus `meta.json`.
//!
//! `matrix.csv` has a header of attribute names and one row per item.
//! `meta.json` carries `attribute_names`, `weights`, `costs` and an optional
//! `generator` record. Numbers are written in Rust's shortest round-trip
//! decimal form, so reading a written dataset gives back identical bits.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::generator::Provenance;
use crate::error::{Error, Result};
use crate::model::Dataset;

pub const MATRIX_FILE: &str = "matrix.csv";
pub const META_FILE: &str = "meta.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetMeta {
    pub attribute_names: Vec<String>,
    pub weights: Vec<f64>,
    pub costs: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<Provenance>,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn write_dataset(dir: &Path, dataset: &Dataset, generator: Option<&Provenance>) -> Result<()> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;

    let matrix_path = dir.join(MATRIX_FILE);
    let csv_err = |source| Error::Csv {
        path: matrix_path.clone(),
        source,
    };
    let mut w = csv::Writer::from_path(&matrix_path).map_err(csv_err)?;
    w.write_record(dataset.attribute_names()).map_err(csv_err)?;
    for i in 0..dataset.n_rows() {
        w.write_record(dataset.row(i).iter().map(|x| x.to_string()))
            .map_err(csv_err)?;
    }
    w.flush().map_err(io_err(&matrix_path))?;

    let meta = DatasetMeta {
        attribute_names: dataset.attribute_names().to_vec(),
        weights: dataset.weights().to_vec(),
        costs: dataset.costs().to_vec(),
        generator: generator.cloned(),
    };
    let meta_path = dir.join(META_FILE);
    let text = serde_json::to_string_pretty(&meta).map_err(|source| Error::Json {
        path: meta_path.clone(),
        source,
    })?;
    fs::write(&meta_path, text + "\n").map_err(io_err(&meta_path))
}

fn existing(path: PathBuf) -> Result<PathBuf> {
    if path.is_file() {
        Ok(path)
    } else {
        Err(Error::MissingFile(path))
    }
}

pub fn read_meta(dir: &Path) -> Result<DatasetMeta> {
    let path = existing(dir.join(META_FILE))?;
    let text = fs::read_to_string(&path).map_err(io_err(&path))?;
    let meta: DatasetMeta = serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.clone(),
        source,
    })?;
    let m = meta.attribute_names.len();
    if meta.weights.len() != m || meta.costs.len() != m {
        return Err(Error::InvalidDataset(format!(
            "{}: {m} attribute names but {} weights and {} costs",
            path.display(),
            meta.weights.len(),
            meta.costs.len()
        )));
    }
    if let Some((col, &value)) = meta
        .costs
        .iter()
        .enumerate()
        .find(|(_, c)| c.is_nan() || **c <= 0.0)
    {
        return Err(Error::NonPositiveCost { path, col, value });
    }
    Ok(meta)
}

pub fn read_dataset(dir: &Path) -> Result<Dataset> {
    read_dataset_with_meta(dir).map(|(d, _)| d)
}

pub fn read_dataset_with_meta(dir: &Path) -> Result<(Dataset, DatasetMeta)> {
    let meta = read_meta(dir)?;
    let path = existing(dir.join(MATRIX_FILE))?;
    let m = meta.attribute_names.len();
    let csv_err = |source| Error::Csv {
        path: path.clone(),
        source,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_path(&path)
        .map_err(csv_err)?;

    let header = reader.headers().map_err(csv_err)?.clone();
    if header.len() != m {
        return Err(Error::ColumnMismatch {
            path,
            row: 0,
            expected: m,
            found: header.len(),
        });
    }
    if header.iter().ne(meta.attribute_names.iter().map(String::as_str)) {
        return Err(Error::InvalidDataset(format!(
            "{}: header does not match the attribute names in {META_FILE}",
            path.display()
        )));
    }

    let mut values = Vec::new();
    let mut n = 0;
    for record in reader.records() {
        let record = record.map_err(csv_err)?;
        if record.len() != m {
            return Err(Error::ColumnMismatch {
                path,
                row: n,
                expected: m,
                found: record.len(),
            });
        }
        for (col, text) in record.iter().enumerate() {
            let value = match text.trim().parse::<f64>() {
                Ok(v) if v.is_finite() => v,
                _ => {
                    return Err(Error::BadNumber {
                        path,
                        row: n,
                        col,
                        text: text.to_string(),
                    })
                }
            };
            if value < 0.0 {
                return Err(Error::NegativeEntry {
                    path,
                    row: n,
                    col,
                    value,
                });
            }
            values.push(value);
        }
        n += 1;
    }
    let dataset = Dataset::from_flat(
        n,
        values,
        meta.attribute_names.clone(),
        meta.costs.clone(),
        meta.weights.clone(),
    )?;
    Ok((dataset, meta))
}
