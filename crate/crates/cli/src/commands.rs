use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use probetopk::algorithms::{compute_upper_bounds, run_mpro, run_pr, run_trivial, run_ub, UpperBounds};
use probetopk::bench::{
    run_alpha_sweep, run_experiment, sweep_levels, sweep_to_csv, sweep_to_text, tune_pr, Algorithm,
    AlphaPolicy, ExperimentSpec, Metric, ScheduleChoice, SweepRow,
};
use probetopk::io::{
    generate_matrix, matrix_checksum, read_dataset, read_dataset_with_meta, read_model, write_dataset,
    write_model, GeneratorConfig, ModelArtifact, Provenance, TrainingFingerprint, WeightMode,
};
use probetopk::model::{Dataset, Schedule};
use probetopk::{Error, Result};

use crate::{BenchArgs, Format, GenerateArgs, QueryArgs, SweepArgs, SynthArgs, TrainArgs};

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

impl SynthArgs {
    fn weight_mode(&self) -> WeightMode {
        if self.weights_equal_costs {
            WeightMode::EqualToCost
        } else {
            WeightMode::Independent
        }
    }

    fn config(&self) -> GeneratorConfig {
        GeneratorConfig::new(self.n as usize, self.m as usize, self.seed).with_weight_mode(self.weight_mode())
    }
}

pub fn generate(args: &GenerateArgs) -> Result<()> {
    let config = args.synth.config();
    let count = args.count as usize;
    for index in 0..count {
        let dir = if count == 1 {
            args.out.clone()
        } else {
            args.out.join(format!("d{index:03}"))
        };
        let dataset = generate_matrix(&config, index)?;
        let provenance = Provenance {
            config: config.clone(),
            index,
        };
        write_dataset(&dir, &dataset, Some(&provenance))?;
        println!("{}", dir.display());
    }
    Ok(())
}

pub fn train(args: &TrainArgs) -> Result<()> {
    let mut training = Vec::with_capacity(args.data.len());
    let mut fingerprint = TrainingFingerprint::default();
    for dir in &args.data {
        let (dataset, meta) = read_dataset_with_meta(dir)?;
        fingerprint.seeds.push(meta.generator.map(|g| g.config.seed));
        fingerprint.checksums.push(matrix_checksum(&dataset));
        training.push(dataset);
    }
    let reference = &training[0];
    let schedule = args.schedule.resolve(&training, args.k, args.seed)?;
    let tuned = tune_pr(&training, args.k, schedule, !args.no_reorder)?;
    let bounds = compute_upper_bounds(&training, reference.weights())?;
    let artifact = ModelArtifact::new(
        reference,
        args.k,
        tuned.schedule,
        tuned.alpha,
        &tuned.estimator,
        bounds,
        fingerprint,
    );
    write_model(&args.out, &artifact)?;
    println!("schedule {}", artifact.schedule);
    println!("alpha {}", artifact.alpha);
    println!("wrote {}", args.out.display());
    Ok(())
}

fn load_model(path: &Path, dataset: &Dataset) -> Result<ModelArtifact> {
    let model = read_model(path)?;
    if !model.fits(dataset) {
        return Err(Error::IncompatibleTraining(format!(
            "{} was trained for different attributes, weights or costs",
            path.display()
        )));
    }
    Ok(model)
}

fn require_model<'a>(model: &'a Option<ModelArtifact>, what: &str) -> Result<&'a ModelArtifact> {
    model
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter(format!("{what} needs --model")))
}

pub fn query(args: &QueryArgs) -> Result<()> {
    let dataset = read_dataset(&args.data)?;
    let model = args
        .model
        .as_deref()
        .map(|p| load_model(p, &dataset))
        .transpose()?;
    let k = args.k.or(model.as_ref().map(|m| m.k)).unwrap_or(10);
    let reorder = !args.no_reorder;
    let schedule: Schedule = match &model {
        Some(m) => m.schedule.clone(),
        None => match args.schedule {
            ScheduleChoice::Baseline(_) => {
                args.schedule
                    .resolve(std::slice::from_ref(&dataset), k, args.seed)?
            }
            ScheduleChoice::Learned => {
                return Err(Error::InvalidParameter(
                    "a learned schedule comes from `train`; pass --model".into(),
                ))
            }
        },
    };
    let bounds = |what: &str| -> Result<UpperBounds> {
        if args.true_bounds {
            compute_upper_bounds(std::slice::from_ref(&dataset), dataset.weights())
        } else {
            Ok(require_model(&model, what)?.upper_bounds.clone())
        }
    };

    let mut alpha_used = None;
    let result = match args.algorithm {
        Algorithm::Trivial => run_trivial(&dataset, k)?,
        Algorithm::Ub => run_ub(&dataset, k, &schedule, &bounds("ub")?, reorder)?,
        Algorithm::Mpro => run_mpro(&dataset, k, &schedule, &bounds("mpro")?)?,
        Algorithm::Pr => {
            let m = require_model(&model, "pr")?;
            let alpha = alpha_policy(args.alpha, args.alpha_factor).apply(m.alpha);
            alpha_used = Some(alpha);
            run_pr(&dataset, k, &schedule, &m.estimator()?, alpha, reorder)?
        }
    };

    let mut out = String::new();
    match args.format {
        Format::Text => {
            let _ = writeln!(out, "algorithm {}", args.algorithm);
            if args.algorithm != Algorithm::Trivial {
                let _ = writeln!(out, "schedule {schedule}");
            }
            if let Some(a) = alpha_used {
                let _ = writeln!(out, "alpha {a}");
            }
            let _ = writeln!(out, "{:>4} {:>8} {:>14}", "rank", "row", "score");
            for (rank, e) in result.topk.entries().iter().enumerate() {
                let _ = writeln!(out, "{:>4} {:>8} {:>14.6}", rank + 1, e.row, e.score);
            }
            let _ = writeln!(out, "cost {:.6}", result.cost);
            let _ = writeln!(out, "cells {}", result.access_log.total_cells());
            let counts = result.access_log.column_counts();
            let per_column: Vec<String> = dataset
                .attribute_names()
                .iter()
                .zip(&counts)
                .map(|(name, c)| format!("{name}={c}"))
                .collect();
            let _ = writeln!(out, "inspected {}", per_column.join(" "));
        }
        Format::Csv => {
            out.push_str("rank,row,score\n");
            for (rank, e) in result.topk.entries().iter().enumerate() {
                let _ = writeln!(out, "{},{},{}", rank + 1, e.row, e.score);
            }
            eprintln!("cost {:.6}", result.cost);
        }
    }
    print!("{out}");
    Ok(())
}

fn alpha_policy(alpha: Option<f64>, factor: Option<f64>) -> AlphaPolicy {
    match (alpha, factor) {
        (Some(a), _) => AlphaPolicy::Fixed(a),
        (None, Some(f)) => AlphaPolicy::Factor(f),
        (None, None) => AlphaPolicy::Learned,
    }
}

fn spec_from(synth: &SynthArgs, k: usize, trials: u64) -> ExperimentSpec {
    ExperimentSpec {
        n: synth.n as usize,
        m: synth.m as usize,
        k,
        trials: trials as usize,
        seed: synth.seed,
        weight_mode: synth.weight_mode(),
        ..Default::default()
    }
}

pub fn bench(args: &BenchArgs) -> Result<()> {
    let spec = ExperimentSpec {
        algorithms: args.algorithm.clone(),
        schedules: args.schedule.clone(),
        reorder_rows: !args.no_reorder,
        alpha: alpha_policy(args.alpha, args.alpha_factor),
        true_bounds: args.true_bounds,
        ..spec_from(&args.synth, args.k, args.trials)
    };
    let experiment = run_experiment(&spec)?;
    match args.format {
        Format::Csv => print!("{}", experiment.table.to_csv()?),
        Format::Text => {
            print!("{}", experiment.table.to_text(Metric::Cost));
            println!();
            print!("{}", experiment.table.to_text(Metric::Accuracy));
        }
    }
    if let Some(path) = &args.out {
        let mut text = String::from("trial,seed,algorithm,schedule,alpha,cost,accuracy\n");
        for r in &experiment.records {
            let alpha = r.alpha.map(|a| a.to_string()).unwrap_or_default();
            let _ = writeln!(
                text,
                "{},{},{},{},{},{},{}",
                r.trial, r.seed, r.algorithm, r.schedule, alpha, r.cost, r.accuracy
            );
        }
        write_file(path, &text)?;
    }
    Ok(())
}

pub fn sweep_alpha(args: &SweepArgs) -> Result<()> {
    let rows = match &args.model {
        Some(model_path) => {
            let mut obs = Vec::with_capacity(args.data.len());
            for dir in &args.data {
                let dataset = read_dataset(dir)?;
                let model = load_model(model_path, &dataset)?;
                obs.push(sweep_levels(
                    &dataset,
                    model.k,
                    &model.schedule,
                    &model.estimator()?,
                    model.alpha,
                    !args.no_reorder,
                )?);
            }
            vec![SweepRow::from_observations("model", &obs)]
        }
        None => {
            let spec = ExperimentSpec {
                schedules: args.schedule.clone(),
                reorder_rows: !args.no_reorder,
                ..spec_from(&args.synth, args.k, args.trials)
            };
            run_alpha_sweep(&spec)?
        }
    };
    let text = match args.format {
        Format::Csv => sweep_to_csv(&rows),
        Format::Text => sweep_to_text(&rows),
    };
    print!("{text}");
    if let Some(path) = &args.out {
        write_file(path, &sweep_to_csv(&rows))?;
    }
    Ok(())
}
