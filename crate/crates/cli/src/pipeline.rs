//! Stage bodies behind the command-line interface.
//!
//! `preprocess` turns the two raw CSVs into cached matrices, `tune` picks
//! model settings, `train` fits and saves models, `evaluate` writes metrics,
//! curves, and charts. `run` chains all four. Stages communicate only
//! through files in the output directory, so any stage can be re-run alone
//! as long as its inputs are present.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use sha2::{Digest, Sha256};

use nids_core::data::DatasetKind;
use nids_core::eval::{confusion, learning_curve, metrics, CurvePoint};
use nids_core::model::ModelKind;
use nids_core::preprocess::{
    assemble, encode, select_features, stratified_sample_indices, AssembleSpec, FeatureMap,
    SmoteBalance, SmoteScope,
};
use nids_core::rng::derive_seed;
use nids_core::tune::{random_search, ModelParams, ParamSpace, ParamValue, SearchConfig};
use nids_core::FeatureMatrix;

use crate::charts;
use crate::config::Config;
use crate::error::CliError;
use crate::ingest;
use crate::matio;
use crate::modelio;
use crate::report;

pub const UNSW_SELECTED_FILE: &str = "unsw_selected.mat";
pub const KDD_SELECTED_FILE: &str = "kdd_selected.mat";
pub const FUSED_TRAIN_FILE: &str = "fused_train.mat";
pub const FUSED_TEST_FILE: &str = "fused_test.mat";
pub const MANIFEST_FILE: &str = "manifest.txt";
pub const TIMINGS_FILE: &str = "timings.txt";
const LOCK_FILE: &str = ".lock";

const PREPROCESS_PRODUCTS: [&str; 6] = [
    UNSW_SELECTED_FILE,
    KDD_SELECTED_FILE,
    FUSED_TRAIN_FILE,
    FUSED_TEST_FILE,
    report::FUSED_COLUMNS_FILE,
    report::CLASS_COUNTS_FILE,
];

/// Exclusive claim on an output directory for the life of the value.
///
/// The claim is a marker file created with `create_new`, so two concurrent
/// invocations cannot both hold it. Dropping the guard removes the file.
#[derive(Debug)]
pub struct DirLock {
    path: PathBuf,
}

impl DirLock {
    pub fn acquire(dir: &Path) -> Result<DirLock, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::write_io(dir, e))?;
        let path = dir.join(LOCK_FILE);
        match fs::OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(_) => Ok(DirLock { path }),
            Err(e) if e.kind() == io::ErrorKind::AlreadyExists => {
                Err(CliError::precondition(format!(
                    "{} already exists; another invocation may be using this directory \
                     (delete the file if a previous run crashed)",
                    path.display()
                )))
            }
            Err(e) => Err(CliError::write_io(&path, e)),
        }
    }
}

impl Drop for DirLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::write_io(path, e))
}

fn sha256_file(path: &Path) -> Result<String, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::read_io(path, e))?;
    let digest = Sha256::digest(&bytes);
    let mut hex = String::with_capacity(64);
    for b in digest {
        let _ = write!(hex, "{b:02x}");
    }
    Ok(hex)
}

/// The settings that shape preprocess outputs, on one line. Tuning and
/// evaluation settings stay out so changing them does not force a rebuild.
fn preprocess_settings_line(cfg: &Config) -> String {
    let scope = match cfg.smote_scope {
        SmoteScope::TrainOnly => "train",
        SmoteScope::Whole => "whole",
    };
    format!(
        "seed={} sample_per_dataset={} train_fraction={} smote_scope={scope} smote_k={} \
         unsw_has_header={} kdd_has_header={}",
        cfg.seed, cfg.sample_per_dataset, cfg.train_fraction, cfg.smote_k, cfg.unsw_has_header,
        cfg.kdd_has_header
    )
}

/// Input hashes, the settings line, and hashes of every preprocess product.
fn build_manifest(cfg: &Config, out: &Path) -> Result<String, CliError> {
    let (unsw, kdd) = cfg.input_paths()?;
    let mut text = String::from("nids-manifest v1\n");
    let _ = writeln!(text, "settings {}", preprocess_settings_line(cfg));
    let _ = writeln!(text, "input unsw {} {}", sha256_file(unsw)?, unsw.display());
    let _ = writeln!(text, "input kdd {} {}", sha256_file(kdd)?, kdd.display());
    for name in PREPROCESS_PRODUCTS {
        let _ = writeln!(text, "file {} {name}", sha256_file(&out.join(name))?);
    }
    Ok(text)
}

/// True when the stored manifest matches a freshly computed one: same
/// inputs, same settings, and every cached product intact.
pub fn preprocess_up_to_date(cfg: &Config, out: &Path) -> bool {
    let stored = match fs::read_to_string(out.join(MANIFEST_FILE)) {
        Ok(text) => text,
        Err(_) => return false,
    };
    match build_manifest(cfg, out) {
        Ok(expected) => stored == expected,
        Err(_) => false,
    }
}

fn maybe_sample(m: FeatureMatrix, target: usize, seed: u64) -> Result<FeatureMatrix, CliError> {
    if target == 0 || target >= m.n_samples() {
        return Ok(m);
    }
    let keep = stratified_sample_indices(m.labels(), target, seed)
        .map_err(|e| CliError::data(format!("cannot draw a {target}-row sample: {e}")))?;
    Ok(m.subset_rows(&keep))
}

/// Returns false when the cached outputs were already current.
pub fn stage_preprocess(cfg: &Config, out: &Path) -> Result<bool, CliError> {
    let (unsw_path, kdd_path) = cfg.input_paths()?;
    if preprocess_up_to_date(cfg, out) {
        println!("preprocess: cached outputs are current, skipping");
        return Ok(false);
    }

    let unsw_table = ingest::read_table(unsw_path, DatasetKind::Unsw, cfg.unsw_has_header)?;
    let kdd_table = ingest::read_table(kdd_path, DatasetKind::Kdd, cfg.kdd_has_header)?;
    // Encode before sampling so category columns never depend on which rows
    // the sample kept.
    let (_, unsw_full) = encode(&unsw_table).map_err(|e| CliError::data(e.to_string()))?;
    let (_, kdd_full) = encode(&kdd_table).map_err(|e| CliError::data(e.to_string()))?;
    let map = FeatureMap::builtin();
    let unsw_sel = select_features(&unsw_full, &map, DatasetKind::Unsw)
        .map_err(|e| CliError::data(e.to_string()))?;
    let kdd_sel = select_features(&kdd_full, &map, DatasetKind::Kdd)
        .map_err(|e| CliError::data(e.to_string()))?;
    let unsw_sel = maybe_sample(
        unsw_sel,
        cfg.sample_per_dataset,
        derive_seed(cfg.seed, "sample.unsw"),
    )?;
    let kdd_sel = maybe_sample(
        kdd_sel,
        cfg.sample_per_dataset,
        derive_seed(cfg.seed, "sample.kdd"),
    )?;

    let spec = assemble_spec(cfg);
    let assembled = assemble(&unsw_sel, &kdd_sel, &map, &spec)
        .map_err(|e| CliError::precondition(e.to_string()))?;

    matio::write_matrix(&out.join(UNSW_SELECTED_FILE), &unsw_sel)?;
    matio::write_matrix(&out.join(KDD_SELECTED_FILE), &kdd_sel)?;
    matio::write_matrix(&out.join(FUSED_TRAIN_FILE), &assembled.train)?;
    matio::write_matrix(&out.join(FUSED_TEST_FILE), &assembled.test)?;
    report::write_fused_columns(&out.join(report::FUSED_COLUMNS_FILE), &map)?;
    report::write_class_counts(&out.join(report::CLASS_COUNTS_FILE), &assembled.balance)?;
    write_text(&out.join(MANIFEST_FILE), &build_manifest(cfg, out)?)?;

    println!(
        "preprocess: {} train rows, {} test rows, {} features",
        assembled.train.n_samples(),
        assembled.test.n_samples(),
        assembled.train.n_features()
    );
    Ok(true)
}

fn assemble_spec(cfg: &Config) -> AssembleSpec {
    AssembleSpec {
        train_fraction: cfg.train_fraction,
        seed: cfg.seed,
        scope: cfg.smote_scope,
        k_neighbors: cfg.smote_k,
    }
}

/// Settings that won the search in earlier full-size runs, used by
/// `--fixed-params` to skip the search.
pub fn fixed_optima(kind: ModelKind) -> Vec<(String, ParamValue)> {
    let pairs: &[(&str, ParamValue)] = match kind {
        ModelKind::Tree => &[],
        ModelKind::Forest => &[
            ("n_estimators", ParamValue::Int(200)),
            ("min_samples_leaf", ParamValue::Int(4)),
        ],
        ModelKind::Gbm => &[
            ("n_estimators", ParamValue::Int(200)),
            ("max_depth", ParamValue::Int(3)),
            ("learning_rate", ParamValue::Float(0.1)),
        ],
        ModelKind::LogReg => &[("c", ParamValue::Float(100.0))],
    };
    pairs
        .iter()
        .map(|(name, value)| (String::from(*name), *value))
        .collect()
}

pub fn stage_tune(cfg: &Config, out: &Path) -> Result<(), CliError> {
    let mut chosen = Vec::new();
    if cfg.fixed_params {
        for &kind in &cfg.models {
            chosen.push((kind, fixed_optima(kind)));
        }
        println!("tune: using fixed parameters, search skipped");
    } else {
        let train = matio::read_matrix(&out.join(FUSED_TRAIN_FILE))?;
        for &kind in &cfg.models {
            let space = ParamSpace::default_for(kind);
            let search_cfg = SearchConfig {
                n_iter: cfg.n_iter.min(space.total()),
                k_folds: cfg.k_folds,
                seed: cfg.seed,
            };
            let (result, _) = random_search(&train, &space, &search_cfg)
                .map_err(|e| CliError::precondition(format!("search for {kind}: {e}")))?;
            report::write_search_ledger(&out.join(report::search_ledger_file(kind)), &result)?;
            println!(
                "tune {kind}: best {} with mean accuracy {:.4} over {} candidates",
                report::format_params(&result.best_params),
                result.best_mean,
                result.candidates.len()
            );
            chosen.push((kind, result.best_params));
        }
    }
    report::write_best_params(&out.join(report::BEST_PARAMS_FILE), &chosen)
}

fn chosen_for(
    chosen: &[report::ChosenParams],
    kind: ModelKind,
) -> Result<&[(String, ParamValue)], CliError> {
    chosen
        .iter()
        .find(|(k, _)| *k == kind)
        .map(|(_, assignment)| assignment.as_slice())
        .ok_or_else(|| {
            CliError::precondition(format!(
                "{} has no entry for {kind} (run tune first?)",
                report::BEST_PARAMS_FILE
            ))
        })
}

pub fn stage_train(cfg: &Config, out: &Path) -> Result<(), CliError> {
    let chosen = report::read_best_params(&out.join(report::BEST_PARAMS_FILE))?;
    let train = matio::read_matrix(&out.join(FUSED_TRAIN_FILE))?;
    let model_seed = derive_seed(cfg.seed, "train.model");
    for &kind in &cfg.models {
        let assignment = chosen_for(&chosen, kind)?;
        let params = ModelParams::from_assignment(kind, assignment, model_seed)
            .map_err(|e| CliError::precondition(e.to_string()))?;
        let model = params
            .fit(&train)
            .map_err(|e| CliError::precondition(format!("training {kind}: {e}")))?;
        modelio::write_model(&out.join(modelio::model_file_name(kind)), &model)?;
        println!("train {kind}: fitted on {} rows", train.n_samples());
    }
    Ok(())
}

pub fn stage_evaluate(cfg: &Config, out: &Path) -> Result<(), CliError> {
    let test = matio::read_matrix(&out.join(FUSED_TEST_FILE))?;
    let chosen = report::read_best_params(&out.join(report::BEST_PARAMS_FILE))?;

    let mut rows = Vec::new();
    for &kind in &cfg.models {
        let model = modelio::read_model(&out.join(modelio::model_file_name(kind)))?;
        if model.kind() != kind {
            return Err(CliError::precondition(format!(
                "{} holds a {} model, expected {kind} (re-run train?)",
                modelio::model_file_name(kind),
                model.kind()
            )));
        }
        let predicted = model
            .predict(&test)
            .map_err(|e| CliError::precondition(format!("scoring {kind}: {e}")))?;
        let cm = confusion(&predicted, test.labels())
            .map_err(|e| CliError::internal(e.to_string()))?;
        let report = metrics(&cm).map_err(|e| CliError::internal(e.to_string()))?;
        println!("evaluate {kind}: accuracy {:.4}", report.accuracy);
        rows.push(report::ModelMetrics {
            kind,
            true_pos: cm.true_pos,
            false_pos: cm.false_pos,
            false_neg: cm.false_neg,
            true_neg: cm.true_neg,
            report,
        });
    }
    report::write_metrics_csv(&out.join(report::METRICS_CSV_FILE), &rows)?;
    write_text(
        &out.join(report::METRICS_TEXT_FILE),
        &report::render_metrics_table(&rows),
    )?;

    let unsw_sel = matio::read_matrix(&out.join(UNSW_SELECTED_FILE))?;
    let kdd_sel = matio::read_matrix(&out.join(KDD_SELECTED_FILE))?;
    let model_seed = derive_seed(cfg.seed, "train.model");
    let mut params = Vec::new();
    for &kind in &cfg.models {
        let assignment = chosen_for(&chosen, kind)?;
        params.push(
            ModelParams::from_assignment(kind, assignment, model_seed)
                .map_err(|e| CliError::precondition(e.to_string()))?,
        );
    }
    let points = learning_curve(
        &unsw_sel,
        &kdd_sel,
        &FeatureMap::builtin(),
        &assemble_spec(cfg),
        &cfg.curve_fractions,
        &params,
    )
    .map_err(|e| CliError::precondition(format!("learning curve: {e}")))?;
    report::write_curve_csv(&out.join(report::CURVE_FILE), &points)?;
    for metric in charts::CurveMetric::ALL {
        write_text(
            &out.join(charts::curve_svg_file(metric)),
            &charts::render_curve_svg(metric, &points),
        )?;
    }

    let balance = report::read_class_counts(&out.join(report::CLASS_COUNTS_FILE))?;
    write_text(
        &out.join(charts::CLASS_COUNTS_SVG_FILE),
        &charts::render_class_counts_svg(&balance),
    )?;
    write_text(
        &out.join(report::RUN_REPORT_FILE),
        &run_report_text(cfg, &balance, &chosen, &rows, &points),
    )?;
    println!("evaluate: reports written to {}", out.display());
    Ok(())
}

fn run_report_text(
    cfg: &Config,
    balance: &[SmoteBalance; 2],
    chosen: &[report::ChosenParams],
    rows: &[report::ModelMetrics],
    points: &[CurvePoint],
) -> String {
    let mut text = String::from("intrusion detection run report\n");
    text.push_str("==============================\n\nsettings:\n");
    for line in cfg.to_string().lines() {
        let _ = writeln!(text, "  {line}");
    }

    text.push_str("\nclass balance (rows before -> after oversampling):\n");
    for b in balance {
        let name = match b.kind {
            DatasetKind::Unsw => "unsw",
            DatasetKind::Kdd => "kdd",
        };
        let _ = writeln!(
            text,
            "  {name}: benign {} -> {}, malicious {} -> {}",
            b.benign_before, b.benign_after, b.malicious_before, b.malicious_after
        );
    }

    text.push_str("\nchosen parameters:\n");
    for (kind, assignment) in chosen {
        if assignment.is_empty() {
            let _ = writeln!(text, "  {kind}: (defaults)");
        } else {
            let _ = writeln!(text, "  {kind}: {}", report::format_params(assignment));
        }
    }

    text.push_str("\ntest metrics:\n");
    for line in report::render_metrics_table(rows).lines() {
        let _ = writeln!(text, "  {line}");
    }

    if let (Some(first), Some(last)) = (cfg.curve_fractions.first(), cfg.curve_fractions.last()) {
        let _ = writeln!(
            text,
            "\naccuracy across training fractions {first} to {last}:"
        );
        for &kind in &cfg.models {
            let series: Vec<f64> = points
                .iter()
                .filter(|p| p.kind == kind)
                .map(|p| p.metrics.accuracy)
                .collect();
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for &a in &series {
                lo = lo.min(a);
                hi = hi.max(a);
            }
            if series.is_empty() {
                continue;
            }
            let _ = writeln!(
                text,
                "  {kind}: min {lo:.4} max {hi:.4} spread {:.4}",
                hi - lo
            );
        }
    }
    text
}

/// Runs the four stages in order and records wall-clock timings. The
/// timings file is the only output that varies between identical runs.
pub fn run_all(cfg: &Config, out: &Path) -> Result<(), CliError> {
    let mut timings = String::new();
    let total = Instant::now();
    type StageFn = fn(&Config, &Path) -> Result<(), CliError>;
    let stages: [(&str, StageFn); 4] = [
        ("preprocess", |cfg, out| stage_preprocess(cfg, out).map(|_| ())),
        ("tune", stage_tune),
        ("train", stage_train),
        ("evaluate", stage_evaluate),
    ];
    for (name, stage) in stages {
        let start = Instant::now();
        stage(cfg, out)?;
        let _ = writeln!(timings, "{name} {:.3}s", start.elapsed().as_secs_f64());
    }
    let _ = writeln!(timings, "total {:.3}s", total.elapsed().as_secs_f64());
    write_text(&out.join(TIMINGS_FILE), &timings)
}

/// Everything a `run` would produce with the given configuration.
pub fn planned_files(cfg: &Config) -> Vec<String> {
    let mut names: Vec<String> = PREPROCESS_PRODUCTS.iter().map(|s| String::from(*s)).collect();
    names.push(String::from(MANIFEST_FILE));
    if !cfg.fixed_params {
        for &kind in &cfg.models {
            names.push(report::search_ledger_file(kind));
        }
    }
    names.push(String::from(report::BEST_PARAMS_FILE));
    for &kind in &cfg.models {
        names.push(modelio::model_file_name(kind));
    }
    names.push(String::from(report::METRICS_CSV_FILE));
    names.push(String::from(report::METRICS_TEXT_FILE));
    names.push(String::from(report::CURVE_FILE));
    for metric in charts::CurveMetric::ALL {
        names.push(charts::curve_svg_file(metric));
    }
    names.push(String::from(charts::CLASS_COUNTS_SVG_FILE));
    names.push(String::from(report::RUN_REPORT_FILE));
    names.push(String::from(TIMINGS_FILE));
    names
}

pub fn dry_run_plan(cfg: &Config, out: &Path) -> String {
    let mut text = String::from("dry run: no files will be written\n\neffective configuration:\n");
    for line in cfg.to_string().lines() {
        let _ = writeln!(text, "  {line}");
    }
    text.push_str("\na full run would write:\n");
    for name in planned_files(cfg) {
        let _ = writeln!(text, "  {}", out.join(name).display());
    }
    text
}
