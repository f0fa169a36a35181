use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("row index {row} out of range for a dataset with {n} rows")]
    RowOutOfRange { row: usize, n: usize },

    #[error("prefix length {h} out of range 0..={m}")]
    PrefixOutOfRange { h: usize, m: usize },

    #[error("k = {k} out of range 1..={n}")]
    KOutOfRange { k: usize, n: usize },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("top-k sets differ in size ({exact} vs {approx})")]
    SizeMismatch { exact: usize, approx: usize },

    #[error("empty training set")]
    EmptyTraining,

    #[error("training matrices are incompatible: {0}")]
    IncompatibleTraining(String),

    #[error("degenerate linear fit: {0}")]
    DegenerateFit(&'static str),

    #[error("no prefix model for h = {0}")]
    MissingModel(usize),

    #[error("estimator was trained for a different schedule")]
    ScheduleMismatch,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("missing file {0}")]
    MissingFile(PathBuf),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: malformed CSV: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{path}: malformed JSON: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("{path}: matrix row {row} has {found} columns but metadata declares {expected}")]
    ColumnMismatch {
        path: PathBuf,
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("{path}: negative entry {value} at row {row}, column {col}")]
    NegativeEntry {
        path: PathBuf,
        row: usize,
        col: usize,
        value: f64,
    },

    #[error("{path}: unparsable number {text:?} at row {row}, column {col}")]
    BadNumber {
        path: PathBuf,
        row: usize,
        col: usize,
        text: String,
    },

    #[error("{path}: cost of attribute {col} is {value}, costs must be positive")]
    NonPositiveCost { path: PathBuf, col: usize, value: f64 },

    #[error("unsupported model artifact version {0:?}")]
    UnsupportedVersion(String),

    #[error("trial {trial}: {source}")]
    Trial {
        trial: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// True for errors caused by malformed or inconsistent input data rather
    /// than by bad arguments or a numerical failure.
    pub fn is_data_error(&self) -> bool {
        if let Error::Trial { source, .. } = self {
            return source.is_data_error();
        }
        matches!(
            self,
            Error::InvalidDataset(_)
                | Error::MissingFile(_)
                | Error::Io { .. }
                | Error::Csv { .. }
                | Error::Json { .. }
                | Error::ColumnMismatch { .. }
                | Error::NegativeEntry { .. }
                | Error::BadNumber { .. }
                | Error::NonPositiveCost { .. }
                | Error::UnsupportedVersion(_)
                | Error::InvalidSchedule(_)
                | Error::IncompatibleTraining(_)
                | Error::EmptyTraining
        )
    }

    pub fn is_numeric_error(&self) -> bool {
        match self {
            Error::Trial { source, .. } => source.is_numeric_error(),
            other => matches!(
                other,
                Error::DegenerateFit(_) | Error::MissingModel(_) | Error::ScheduleMismatch
            ),
        }
    }
}
