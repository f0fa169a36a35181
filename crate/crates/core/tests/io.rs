mod common;

use std::fs;

use common::one;
use probetopk::algorithms::compute_upper_bounds;
use probetopk::estimator::train_estimator;
use probetopk::io::{
    generate_dataset, matrix_checksum, parse_model, read_dataset, read_dataset_with_meta, read_model,
    write_dataset, write_model, CostMode, GeneratorConfig, ModelArtifact, Provenance, TrainingFingerprint,
    WeightMode, MATRIX_FILE, META_FILE,
};
use probetopk::model::Dataset;
use probetopk::tuning::{baseline_schedule, select_alpha, BaselineVariant};
use probetopk::Error;
use proptest::prelude::*;

fn bits(xs: &[f64]) -> Vec<u64> {
    xs.iter().map(|x| x.to_bits()).collect()
}

fn assert_same(a: &Dataset, b: &Dataset) {
    assert_eq!(a.n_rows(), b.n_rows());
    assert_eq!(a.attribute_names(), b.attribute_names());
    assert_eq!(bits(a.values()), bits(b.values()));
    assert_eq!(bits(a.weights()), bits(b.weights()));
    assert_eq!(bits(a.costs()), bits(b.costs()));
}

fn artifact(d: &Dataset) -> ModelArtifact {
    let s = baseline_schedule(d, BaselineVariant::D, 0);
    let est = train_estimator(std::slice::from_ref(d), &s).unwrap();
    let alpha = select_alpha(std::slice::from_ref(d), 5, &s, &est, true).unwrap();
    let bounds = compute_upper_bounds(std::slice::from_ref(d), d.weights()).unwrap();
    let fp = TrainingFingerprint {
        seeds: vec![Some(3)],
        checksums: vec![matrix_checksum(d)],
    };
    ModelArtifact::new(d, 5, s, alpha, &est, bounds, fp)
}

#[test]
fn generator_is_pure_and_nonnegative() {
    let c = GeneratorConfig::new(50, 4, 9);
    let (a, b) = (generate_dataset(&c).unwrap(), generate_dataset(&c).unwrap());
    assert_same(&a, &b);
    assert!(a.values().iter().all(|&x| x >= 0.0));
    assert!(a.weights().iter().chain(a.costs()).all(|&x| x > 0.0 && x < 1.0));
    let other = generate_dataset(&GeneratorConfig::new(50, 4, 10)).unwrap();
    assert_ne!(bits(a.values()), bits(other.values()));

    let tied = generate_dataset(&c.clone().with_weight_mode(WeightMode::EqualToCost)).unwrap();
    assert_eq!(bits(tied.weights()), bits(tied.costs()));
    let fixed = generate_dataset(&c.with_cost_mode(CostMode::Fixed(vec![1.0, 2.0, 3.0, 4.0]))).unwrap();
    assert_eq!(fixed.costs(), &[1.0, 2.0, 3.0, 4.0]);
    assert!(generate_dataset(&GeneratorConfig::new(0, 3, 1)).is_err());
}

#[test]
fn generated_entries_are_half_normal() {
    let d = generate_dataset(&GeneratorConfig::new(100_000, 1, 5)).unwrap();
    let mean = d.values().iter().sum::<f64>() / 100_000.0;
    assert!(
        (mean - (2.0 / std::f64::consts::PI).sqrt()).abs() < 0.01,
        "{mean}"
    );
}

#[test]
fn dataset_round_trip_keeps_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let config = GeneratorConfig::new(30, 3, 4);
    let d = generate_dataset(&config).unwrap();
    let prov = Provenance { config, index: 0 };
    write_dataset(dir.path(), &d, Some(&prov)).unwrap();
    let (back, meta) = read_dataset_with_meta(dir.path()).unwrap();
    assert_same(&d, &back);
    assert_eq!(meta.generator, Some(prov));
}

#[test]
fn dataset_errors_are_distinct() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert!(matches!(read_dataset(p), Err(Error::MissingFile(_))));

    let d = one(4, 3, 1);
    write_dataset(p, &d, None).unwrap();
    let good = fs::read_to_string(p.join(MATRIX_FILE)).unwrap();

    fs::write(p.join(MATRIX_FILE), format!("{good}1,2,3,4\n")).unwrap();
    match read_dataset(p) {
        Err(Error::ColumnMismatch {
            expected: 3,
            found: 4,
            row: 4,
            ..
        }) => {}
        other => panic!("{other:?}"),
    }

    fs::write(p.join(MATRIX_FILE), format!("{good}1,-2,3\n")).unwrap();
    match read_dataset(p) {
        Err(Error::NegativeEntry { row: 4, col: 1, .. }) => {}
        other => panic!("{other:?}"),
    }

    fs::write(p.join(MATRIX_FILE), format!("{good}1,x,3\n")).unwrap();
    assert!(matches!(
        read_dataset(p),
        Err(Error::BadNumber { row: 4, col: 1, .. })
    ));

    fs::write(p.join(MATRIX_FILE), &good).unwrap();
    let meta = fs::read_to_string(p.join(META_FILE)).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&meta).unwrap();
    v["costs"][2] = serde_json::json!(0.0);
    fs::write(p.join(META_FILE), v.to_string()).unwrap();
    match read_dataset(p) {
        Err(e @ Error::NonPositiveCost { col: 2, .. }) => assert!(e.is_data_error()),
        other => panic!("{other:?}"),
    }

    fs::remove_file(p.join(MATRIX_FILE)).unwrap();
    fs::write(p.join(META_FILE), meta).unwrap();
    assert!(matches!(read_dataset(p), Err(Error::MissingFile(_))));
}

#[test]
fn model_round_trip_is_exact() {
    let d = one(120, 5, 2);
    let a = artifact(&d);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.json");
    write_model(&path, &a).unwrap();
    let back = read_model(&path).unwrap();
    assert_eq!(back, a);
    for (x, y) in a.models.iter().zip(&back.models) {
        assert_eq!(x.q0_mu.to_bits(), y.q0_mu.to_bits());
        assert_eq!(x.q1_sigma.to_bits(), y.q1_sigma.to_bits());
    }
    assert_eq!(back.alpha.to_bits(), a.alpha.to_bits());
    assert!(back.fits(&d));
    assert_eq!(
        back.estimator().unwrap().models(),
        a.estimator().unwrap().models()
    );
}

#[test]
fn model_validation() {
    let a = artifact(&one(60, 4, 3));
    let text = serde_json::to_string(&a).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();

    let mut dup = v.clone();
    dup["schedule"] = serde_json::json!([0, 1, 1, 3]);
    assert!(matches!(
        parse_model(&dup.to_string()),
        Err(Error::InvalidSchedule(_))
    ));

    let mut short = v.clone();
    short["schedule"] = serde_json::json!([0, 1, 2]);
    assert!(matches!(
        parse_model(&short.to_string()),
        Err(Error::InvalidSchedule(_))
    ));

    v["version"] = serde_json::json!("2");
    match parse_model(&v.to_string()) {
        Err(Error::UnsupportedVersion(s)) => assert_eq!(s, "2"),
        other => panic!("{other:?}"),
    }
    assert!(read_model(std::path::Path::new("/nonexistent/model.json")).is_err());
}

#[test]
fn checksum_tracks_values() {
    let d = one(10, 3, 1);
    let e = one(10, 3, 2);
    assert_eq!(matrix_checksum(&d), matrix_checksum(&d.clone()));
    assert_ne!(matrix_checksum(&d), matrix_checksum(&e));
    assert_eq!(matrix_checksum(&d).len(), 64);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn arbitrary_values_round_trip(
        rows in prop::collection::vec(prop::collection::vec(0.0f64..1e12, 3), 1..20),
        costs in prop::collection::vec(1e-9f64..1e3, 3),
        weights in prop::collection::vec(-1e3f64..1e3, 3),
    ) {
        let names = vec!["alpha".to_string(), "b c".to_string(), "x,y".to_string()];
        let d = Dataset::new(rows, names, costs, weights).unwrap();
        let dir = tempfile::tempdir().unwrap();
        write_dataset(dir.path(), &d, None).unwrap();
        let back = read_dataset(dir.path()).unwrap();
        prop_assert_eq!(bits(d.values()), bits(back.values()));
        prop_assert_eq!(bits(d.weights()), bits(back.weights()));
        prop_assert_eq!(bits(d.costs()), bits(back.costs()));
        prop_assert_eq!(d.attribute_names(), back.attribute_names());
    }
}
