use probetopk::bench::{
    run_alpha_sweep, run_experiment, run_trial, Algorithm, ExperimentSpec, ResultTable, ScheduleChoice,
};
use probetopk::tuning::BaselineVariant;

fn small() -> ExperimentSpec {
    ExperimentSpec {
        n: 200,
        m: 6,
        k: 5,
        trials: 6,
        seed: 11,
        algorithms: vec![Algorithm::Trivial, Algorithm::Ub, Algorithm::Mpro, Algorithm::Pr],
        schedules: vec![
            ScheduleChoice::Baseline(BaselineVariant::A),
            ScheduleChoice::Baseline(BaselineVariant::D),
            ScheduleChoice::Learned,
        ],
        ..Default::default()
    }
}

#[test]
fn records_reproduce_from_their_seeds() {
    let spec = small();
    let exp = run_experiment(&spec).unwrap();
    assert_eq!(exp.records.len(), 6 * 4 * 3);
    let again = run_experiment(&spec).unwrap();
    assert_eq!(exp.records, again.records);
    for t in [0, 3, 5] {
        let single = run_trial(&spec, t).unwrap();
        let mine: Vec<_> = exp.records.iter().filter(|r| r.trial == t).cloned().collect();
        assert_eq!(single, mine);
        assert_eq!(single[0].seed, spec.seed + t as u64);
    }
    for w in exp.records.windows(2) {
        assert!(w[0].trial <= w[1].trial);
    }
}

#[test]
fn aggregates_are_consistent() {
    let exp = run_experiment(&small()).unwrap();
    for cell in &exp.table.cells {
        let rows: Vec<_> = exp
            .records
            .iter()
            .filter(|r| r.algorithm == cell.algorithm && r.schedule == cell.schedule)
            .collect();
        let costs: Vec<f64> = rows.iter().map(|r| r.cost).collect();
        let lo = costs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = costs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!(cell.cost_mean >= lo - 1e-12 && cell.cost_mean <= hi + 1e-12);
        let mean = costs.iter().sum::<f64>() / costs.len() as f64;
        let var = costs.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / costs.len() as f64;
        assert!((cell.cost_std - var.sqrt()).abs() < 1e-9);
        assert!(cell.cost_std >= 0.0 && cell.accuracy_std >= 0.0);
        assert!((0.0..=1.0).contains(&cell.accuracy_mean));
        if cell.algorithm == Algorithm::Trivial {
            assert_eq!(cell.cost_mean, 1.0);
            assert_eq!(cell.accuracy_mean, 1.0);
        }
    }
    let csv = exp.table.to_csv().unwrap();
    assert_eq!(ResultTable::from_csv(&csv).unwrap(), exp.table);
}

#[test]
fn one_trial_has_zero_spread() {
    let spec = ExperimentSpec { trials: 1, ..small() };
    let exp = run_experiment(&spec).unwrap();
    for c in &exp.table.cells {
        assert_eq!(c.cost_std, 0.0);
        assert_eq!(c.accuracy_std, 0.0);
        assert_eq!(c.trials, 1);
    }
}

#[test]
fn sweep_rows_cover_every_schedule() {
    let spec = ExperimentSpec { trials: 4, ..small() };
    let rows = run_alpha_sweep(&spec).unwrap();
    assert_eq!(rows.len(), 3);
    for r in &rows {
        assert_eq!(r.levels.len(), 3);
        assert_eq!(r.trials, 4);
    }
    assert_eq!(rows[2].label, "learned");
}

#[test]
fn bad_spec_is_rejected() {
    let spec = ExperimentSpec { k: 0, ..small() };
    assert!(run_experiment(&spec).is_err());
    let spec = ExperimentSpec { m: 0, ..small() };
    assert!(run_experiment(&spec).is_err());
}
