//! `probetopk`: generate synthetic corpora, train pruning models, run
//! queries and reproduce the experiment tables.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use probetopk::bench::{Algorithm, ScheduleChoice};

#[derive(Parser, Debug)]
#[command(name = "probetopk", version, about = "Cost-aware approximate top-k retrieval")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a synthetic dataset directory (matrix.csv + meta.json).
    Generate(GenerateArgs),
    /// Learn schedule, estimator, threshold and bounds from training data.
    Train(TrainArgs),
    /// Run one top-k query against a dataset.
    Query(QueryArgs),
    /// Repeated train/test trials on fresh synthetic data.
    Bench(BenchArgs),
    /// Threshold sensitivity at half, once and twice the tuned value.
    SweepAlpha(SweepArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

/// Synthetic corpus shape shared by `generate`, `bench` and `sweep-alpha`.
#[derive(Args, Debug, Clone)]
pub struct SynthArgs {
    /// Rows per matrix.
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    /// Attributes per matrix.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub m: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Use the attribute costs as scoring weights.
    #[arg(long)]
    pub weights_equal_costs: bool,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub synth: SynthArgs,
    /// Number of matrices; more than one writes `d000`, `d001`, ... under `--out`.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub count: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    /// Training dataset directories (repeat or comma-separate).
    #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
    pub data: Vec<PathBuf>,
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    #[arg(long, default_value = "D", value_parser = parse_schedule)]
    pub schedule: ScheduleChoice,
    /// Seed for the random schedule.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Tune the threshold for queries that keep rows in storage order.
    #[arg(long)]
    pub no_reorder: bool,
    /// Model file to write.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct QueryArgs {
    #[arg(long)]
    pub data: PathBuf,
    /// Trained model; required for `pr`, and for `ub`/`mpro` without `--true-bounds`.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long, default_value = "pr", value_parser = parse_algorithm)]
    pub algorithm: Algorithm,
    /// Defaults to the model's k, or 10 without a model.
    #[arg(long)]
    pub k: Option<usize>,
    /// Schedule when no model is given.
    #[arg(long, default_value = "D", value_parser = parse_schedule)]
    pub schedule: ScheduleChoice,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Override the model's threshold.
    #[arg(long, conflicts_with = "alpha_factor")]
    pub alpha: Option<f64>,
    /// Multiply the model's threshold (capped at 1).
    #[arg(long)]
    pub alpha_factor: Option<f64>,
    #[arg(long)]
    pub no_reorder: bool,
    /// Derive UB/MPro bounds from the queried matrix itself.
    #[arg(long)]
    pub true_bounds: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[command(flatten)]
    pub synth: SynthArgs,
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value = "ub,mpro,pr", value_delimiter = ',', value_parser = parse_algorithm)]
    pub algorithm: Vec<Algorithm>,
    #[arg(long, default_value = "D", value_delimiter = ',', value_parser = parse_schedule)]
    pub schedule: Vec<ScheduleChoice>,
    #[arg(long, conflicts_with = "alpha_factor")]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub alpha_factor: Option<f64>,
    #[arg(long)]
    pub no_reorder: bool,
    #[arg(long)]
    pub true_bounds: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Also write per-trial records as CSV to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub synth: SynthArgs,
    /// Sweep a trained model over these test datasets instead of fresh trials.
    #[arg(long, requires = "data")]
    pub model: Option<PathBuf>,
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub data: Vec<PathBuf>,
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value = "D", value_delimiter = ',', value_parser = parse_schedule)]
    pub schedule: Vec<ScheduleChoice>,
    #[arg(long)]
    pub no_reorder: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: probetopk::Error| e.to_string())
}

fn parse_schedule(s: &str) -> Result<ScheduleChoice, String> {
    s.parse().map_err(|e: probetopk::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate(a) => commands::generate(&a),
        Command::Train(a) => commands::train(&a),
        Command::Query(a) => commands::query(&a),
        Command::Bench(a) => commands::bench(&a),
        Command::SweepAlpha(a) => commands::sweep_alpha(&a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &probetopk::Error) -> u8 {
    if e.is_data_error() {
        3
    } else if e.is_numeric_error() {
        4
    } else {
        2
    }
}
