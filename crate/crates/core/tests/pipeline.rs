//! One pass over the public API: build two labeled tables, assemble the
//! fused train/test split, search a small grid, and score the winner.

use nids_core::data::DatasetKind;
use nids_core::eval::{confusion, learning_curve, metrics};
use nids_core::model::ModelKind;
use nids_core::preprocess::{assemble, AssembleSpec, FeatureMap, SmoteScope, FUSED_WIDTH};
use nids_core::rng::Stream;
use nids_core::tune::{random_search, ModelParams, ParamAxis, ParamSpace, ParamValue, SearchConfig};
use nids_core::FeatureMatrix;

/// A table in one dataset's schema: column 0 separates the classes
/// cleanly, everything else is noise.
fn side_table(kind: DatasetKind, rows: usize, malicious: usize, seed: u64) -> FeatureMatrix {
    let map = FeatureMap::builtin();
    let names: Vec<String> = (0..map.len()).map(|i| String::from(map.name(kind, i))).collect();
    let mut stream = Stream::new(seed);
    let mut values = Vec::with_capacity(rows * names.len());
    let mut labels = Vec::with_capacity(rows);
    for r in 0..rows {
        let y = u8::from(r < malicious);
        for j in 0..names.len() {
            let v = if j == 0 {
                f64::from(y) * 10.0 + stream.unit_f64()
            } else {
                stream.unit_f64() * 3.0
            };
            values.push(v);
        }
        labels.push(y);
    }
    FeatureMatrix::new(values, names, labels).unwrap()
}

#[test]
fn assemble_search_and_score_round_trip() {
    let unsw = side_table(DatasetKind::Unsw, 150, 30, 1);
    let kdd = side_table(DatasetKind::Kdd, 150, 105, 2);
    let map = FeatureMap::builtin();
    let spec = AssembleSpec {
        train_fraction: 0.3,
        seed: 9,
        scope: SmoteScope::TrainOnly,
        k_neighbors: 3,
    };
    let assembled = assemble(&unsw, &kdd, &map, &spec).unwrap();
    assert_eq!(assembled.train.n_features(), FUSED_WIDTH);
    assert_eq!(assembled.test.n_features(), FUSED_WIDTH);
    for balance in &assembled.balance {
        assert_eq!(balance.benign_after, balance.malicious_after);
    }
    let train_before: usize = assembled
        .balance
        .iter()
        .map(|b| b.benign_before + b.malicious_before)
        .sum();
    assert_eq!(train_before + assembled.test.n_samples(), 300);

    let space = ParamSpace {
        kind: ModelKind::Tree,
        axes: vec![
            ParamAxis {
                name: String::from("max_depth"),
                values: vec![ParamValue::Int(2), ParamValue::Int(4)],
            },
            ParamAxis {
                name: String::from("min_samples_leaf"),
                values: vec![ParamValue::Int(1), ParamValue::Int(2)],
            },
        ],
    };
    let cfg = SearchConfig {
        n_iter: space.total(),
        k_folds: 3,
        seed: 4,
    };
    let (result, model) = random_search(&assembled.train, &space, &cfg).unwrap();
    let ledger_max = result
        .candidates
        .iter()
        .map(|c| c.mean_accuracy)
        .fold(f64::NEG_INFINITY, f64::max);
    assert_eq!(result.best_mean, ledger_max);

    let predicted = model.predict(&assembled.test).unwrap();
    let report = metrics(&confusion(&predicted, assembled.test.labels()).unwrap()).unwrap();
    assert!(
        report.accuracy > 0.9,
        "separable data scored only {}",
        report.accuracy
    );
    assert!(!report.degenerate);

    let params =
        ModelParams::from_assignment(ModelKind::Tree, &result.best_params, 11).unwrap();
    let points = learning_curve(&unsw, &kdd, &map, &spec, &[0.2, 0.3], &[params]).unwrap();
    assert_eq!(points.len(), 2);
    assert!(points.iter().all(|p| p.kind == ModelKind::Tree));
    assert_eq!(points[0].fraction, 0.2);
    assert_eq!(points[1].fraction, 0.3);
    for p in &points {
        assert!(p.metrics.accuracy > 0.8, "fraction {}: {}", p.fraction, p.metrics.accuracy);
        assert!(p.train_rows > 0 && p.test_rows > 0);
    }
}
