//! Approximate top-k retrieval from a matrix whose cells must be paid for
//! one at a time.
//!
//! A query scores rows by a fixed linear function `Σ w_j X_ij`, but each
//! cell `X_ij` costs `C(A_j)` to reveal. The pruning scan ([`algorithms::run_pr`])
//! learns from fully known training matrices how a row's full score is
//! distributed given a partial sum, and stops reading a row once it is
//! unlikely to enter the answer. Exact-bound baselines ([`algorithms::run_ub`],
//! [`algorithms::run_mpro`]) and the full scan are provided for comparison.
//!
//! Modules:
//! - [`model`]: datasets, schedules, access logs, exact top-k and metrics.
//! - [`estimator`]: kernel-smoothed regression of full scores on prefix scores.
//! - [`algorithms`]: the query algorithms.
//! - [`tuning`]: threshold selection and schedule learning.
//! - [`io`]: synthetic generator, dataset directories and model files.
//! - [`bench`]: the train/test experiment harness.

pub mod algorithms;
pub mod bench;
pub mod error;
pub mod estimator;
pub mod io;
pub mod model;
pub mod tuning;

pub use error::{Error, Result};
