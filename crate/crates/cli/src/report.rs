//! Report and ledger files: plain CSV plus two aligned text summaries.
//!
//! Every writer here is a pure function of its inputs, and numeric cells in
//! CSV files keep full shortest-round-trip precision; rounding to four
//! decimals happens only in the human-readable text renderings. None of the
//! emitted fields ever contain commas, so the CSVs are written and parsed
//! directly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nids_core::data::DatasetKind;
use nids_core::eval::{CurvePoint, MetricsReport};
use nids_core::model::ModelKind;
use nids_core::preprocess::{FeatureMap, SmoteBalance};
use nids_core::tune::{ParamValue, SearchResult};

use crate::config::parse_model_kind;
use crate::error::CliError;

pub const FUSED_COLUMNS_FILE: &str = "fused_columns.csv";
pub const CLASS_COUNTS_FILE: &str = "class_counts.csv";
pub const BEST_PARAMS_FILE: &str = "best_params.txt";
pub const METRICS_CSV_FILE: &str = "metrics.csv";
pub const METRICS_TEXT_FILE: &str = "metrics.txt";
pub const CURVE_FILE: &str = "learning_curve.csv";
pub const RUN_REPORT_FILE: &str = "run_report.txt";

pub fn search_ledger_file(kind: ModelKind) -> String {
    format!("search_{kind}.csv")
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::write_io(path, e))
}

fn read_text(path: &Path, hint: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| {
        CliError::precondition(format!("cannot read {}: {e} ({hint})", path.display()))
    })
}

// ---- column map sidecar ----

pub fn write_fused_columns(path: &Path, map: &FeatureMap) -> Result<(), CliError> {
    let mut text = String::from("index,fused,unsw,kdd\n");
    for i in 0..map.len() {
        let _ = writeln!(
            text,
            "{i},{},{},{}",
            FeatureMap::fused_name(i),
            map.name(DatasetKind::Unsw, i),
            map.name(DatasetKind::Kdd, i)
        );
    }
    write_text(path, &text)
}

/// Rows of (fused, unsw, kdd) names in column order.
pub fn read_fused_columns(path: &Path) -> Result<Vec<(String, String, String)>, CliError> {
    let text = read_text(path, "run preprocess first?")?;
    let bad = |why: &str| {
        CliError::precondition(format!("{}: {why}", path.display()))
    };
    let mut lines = text.lines();
    if lines.next() != Some("index,fused,unsw,kdd") {
        return Err(bad("unexpected header"));
    }
    let mut out = Vec::new();
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 4 || cells[0].parse::<usize>() != Ok(out.len()) {
            return Err(bad("malformed row"));
        }
        out.push((
            String::from(cells[1]),
            String::from(cells[2]),
            String::from(cells[3]),
        ));
    }
    Ok(out)
}

// ---- class balance sidecar ----

pub fn write_class_counts(path: &Path, balance: &[SmoteBalance; 2]) -> Result<(), CliError> {
    let mut text =
        String::from("dataset,benign_before,malicious_before,benign_after,malicious_after\n");
    for b in balance {
        let _ = writeln!(
            text,
            "{},{},{},{},{}",
            dataset_name(b.kind),
            b.benign_before,
            b.malicious_before,
            b.benign_after,
            b.malicious_after
        );
    }
    write_text(path, &text)
}

pub fn read_class_counts(path: &Path) -> Result<[SmoteBalance; 2], CliError> {
    let text = read_text(path, "run preprocess first?")?;
    let bad = |why: &str| CliError::precondition(format!("{}: {why}", path.display()));
    let mut lines = text.lines();
    if lines.next()
        != Some("dataset,benign_before,malicious_before,benign_after,malicious_after")
    {
        return Err(bad("unexpected header"));
    }
    let mut parsed = Vec::new();
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 5 {
            return Err(bad("malformed row"));
        }
        let kind = match cells[0] {
            "unsw" => DatasetKind::Unsw,
            "kdd" => DatasetKind::Kdd,
            _ => return Err(bad("unknown dataset")),
        };
        let mut nums = [0usize; 4];
        for (slot, cell) in nums.iter_mut().zip(&cells[1..]) {
            *slot = cell.parse().map_err(|_| bad("malformed count"))?;
        }
        parsed.push(SmoteBalance {
            kind,
            benign_before: nums[0],
            malicious_before: nums[1],
            benign_after: nums[2],
            malicious_after: nums[3],
        });
    }
    match <[SmoteBalance; 2]>::try_from(parsed) {
        Ok(pair) => Ok(pair),
        Err(_) => Err(bad("expected exactly two dataset rows")),
    }
}

fn dataset_name(kind: DatasetKind) -> &'static str {
    match kind {
        DatasetKind::Unsw => "unsw",
        DatasetKind::Kdd => "kdd",
    }
}

// ---- search ledger ----

/// Every candidate in draw order, plus a `selected` flag on the winner.
pub fn write_search_ledger(path: &Path, result: &SearchResult) -> Result<(), CliError> {
    let mut text = String::from("position,space_index,params,mean_accuracy,selected\n");
    for (pos, cand) in result.candidates.iter().enumerate() {
        let selected = if pos == result.best_index { 1 } else { 0 };
        let _ = writeln!(
            text,
            "{pos},{},{},{},{selected}",
            cand.space_index,
            format_params(&cand.assignment),
            cand.mean_accuracy
        );
    }
    write_text(path, &text)
}

pub struct LedgerRow {
    pub position: usize,
    pub space_index: usize,
    pub params: String,
    pub mean_accuracy: f64,
    pub selected: bool,
}

pub fn read_search_ledger(path: &Path) -> Result<Vec<LedgerRow>, CliError> {
    let text = read_text(path, "run tune first?")?;
    let bad = |why: &str| CliError::precondition(format!("{}: {why}", path.display()));
    let mut lines = text.lines();
    if lines.next() != Some("position,space_index,params,mean_accuracy,selected") {
        return Err(bad("unexpected header"));
    }
    let mut rows = Vec::new();
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 5 {
            return Err(bad("malformed row"));
        }
        rows.push(LedgerRow {
            position: cells[0].parse().map_err(|_| bad("bad position"))?,
            space_index: cells[1].parse().map_err(|_| bad("bad space index"))?,
            params: String::from(cells[2]),
            mean_accuracy: cells[3].parse().map_err(|_| bad("bad mean"))?,
            selected: cells[4] == "1",
        });
    }
    Ok(rows)
}

/// `name=value` pairs joined with `;`, as stored in ledger rows.
pub fn format_params(assignment: &[(String, ParamValue)]) -> String {
    let pairs: Vec<String> = assignment
        .iter()
        .map(|(name, value)| format!("{name}={value}"))
        .collect();
    pairs.join(";")
}

// ---- chosen parameters ----

/// A model kind paired with the `name=value` assignment picked for it.
pub type ChosenParams = (ModelKind, Vec<(String, ParamValue)>);

/// One line per model: the kind, then space-separated `name=value` pairs.
pub fn write_best_params(path: &Path, chosen: &[ChosenParams]) -> Result<(), CliError> {
    let mut text = String::new();
    for (kind, assignment) in chosen {
        text.push_str(kind.as_str());
        for (name, value) in assignment {
            let _ = write!(text, " {name}={value}");
        }
        text.push('\n');
    }
    write_text(path, &text)
}

pub fn read_best_params(path: &Path) -> Result<Vec<ChosenParams>, CliError> {
    let text = read_text(path, "run tune first?")?;
    let bad = |why: String| CliError::precondition(format!("{}: {why}", path.display()));
    let mut out = Vec::new();
    for line in text.lines() {
        let mut parts = line.split(' ');
        let kind = parts
            .next()
            .and_then(parse_model_kind)
            .ok_or_else(|| bad(format!("unknown model kind in {line:?}")))?;
        let mut assignment = Vec::new();
        for pair in parts {
            let (name, value) = pair
                .split_once('=')
                .ok_or_else(|| bad(format!("expected name=value, got {pair:?}")))?;
            assignment.push((String::from(name), parse_value(kind, name, value).map_err(bad)?));
        }
        out.push((kind, assignment));
    }
    Ok(out)
}

/// Whole numbers would parse as either variant, so the parameter's name
/// decides: each model setting has one declared value type.
fn parse_value(kind: ModelKind, name: &str, value: &str) -> Result<ParamValue, String> {
    let is_float = match (kind, name) {
        (ModelKind::Tree, "max_depth" | "min_samples_leaf") => false,
        (
            ModelKind::Forest,
            "n_estimators" | "max_depth" | "min_samples_leaf" | "features_per_split",
        ) => false,
        (ModelKind::Gbm, "n_estimators" | "max_depth") => false,
        (ModelKind::Gbm, "learning_rate" | "l2") => true,
        (ModelKind::LogReg, "max_iterations") => false,
        (ModelKind::LogReg, "c" | "step_size") => true,
        _ => return Err(format!("unknown parameter {name:?} for {kind}")),
    };
    if is_float {
        value
            .parse()
            .map(ParamValue::Float)
            .map_err(|_| format!("bad value for {name:?}: {value:?}"))
    } else {
        value
            .parse()
            .map(ParamValue::Int)
            .map_err(|_| format!("bad value for {name:?}: {value:?}"))
    }
}

// ---- metrics ----

pub struct ModelMetrics {
    pub kind: ModelKind,
    pub true_pos: usize,
    pub false_pos: usize,
    pub false_neg: usize,
    pub true_neg: usize,
    pub report: MetricsReport,
}

pub fn write_metrics_csv(path: &Path, rows: &[ModelMetrics]) -> Result<(), CliError> {
    let mut text = String::from("model,tp,fp,fn,tn,accuracy,precision,recall,f1,degenerate\n");
    for m in rows {
        let _ = writeln!(
            text,
            "{},{},{},{},{},{},{},{},{},{}",
            m.kind,
            m.true_pos,
            m.false_pos,
            m.false_neg,
            m.true_neg,
            m.report.accuracy,
            m.report.precision,
            m.report.recall,
            m.report.f1,
            m.report.degenerate
        );
    }
    write_text(path, &text)
}

pub fn read_metrics_csv(path: &Path) -> Result<Vec<ModelMetrics>, CliError> {
    let text = read_text(path, "run evaluate first?")?;
    let bad = |why: &str| CliError::precondition(format!("{}: {why}", path.display()));
    let mut lines = text.lines();
    if lines.next() != Some("model,tp,fp,fn,tn,accuracy,precision,recall,f1,degenerate") {
        return Err(bad("unexpected header"));
    }
    let mut rows = Vec::new();
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 10 {
            return Err(bad("malformed row"));
        }
        let kind = parse_model_kind(cells[0]).ok_or_else(|| bad("unknown model"))?;
        let count = |i: usize| cells[i].parse::<usize>().map_err(|_| bad("bad count"));
        let num = |i: usize| cells[i].parse::<f64>().map_err(|_| bad("bad number"));
        rows.push(ModelMetrics {
            kind,
            true_pos: count(1)?,
            false_pos: count(2)?,
            false_neg: count(3)?,
            true_neg: count(4)?,
            report: MetricsReport {
                accuracy: num(5)?,
                precision: num(6)?,
                recall: num(7)?,
                f1: num(8)?,
                degenerate: cells[9] == "true",
            },
        });
    }
    Ok(rows)
}

/// Four-decimal table for humans; the CSV keeps the exact values.
pub fn render_metrics_table(rows: &[ModelMetrics]) -> String {
    let mut text = String::from("model     accuracy  precision  recall    f1\n");
    for m in rows {
        let _ = writeln!(
            text,
            "{:<9} {:<9.4} {:<10.4} {:<9.4} {:<9.4}",
            m.kind.as_str(),
            m.report.accuracy,
            m.report.precision,
            m.report.recall,
            m.report.f1
        );
    }
    text
}

// ---- learning curve ----

pub fn write_curve_csv(path: &Path, points: &[CurvePoint]) -> Result<(), CliError> {
    let mut text =
        String::from("fraction,model,train_rows,test_rows,accuracy,precision,recall,f1\n");
    for p in points {
        let _ = writeln!(
            text,
            "{},{},{},{},{},{},{},{}",
            p.fraction,
            p.kind,
            p.train_rows,
            p.test_rows,
            p.metrics.accuracy,
            p.metrics.precision,
            p.metrics.recall,
            p.metrics.f1
        );
    }
    write_text(path, &text)
}

pub fn read_curve_csv(path: &Path) -> Result<Vec<CurvePoint>, CliError> {
    let text = read_text(path, "run evaluate first?")?;
    let bad = |why: &str| CliError::precondition(format!("{}: {why}", path.display()));
    let mut lines = text.lines();
    if lines.next() != Some("fraction,model,train_rows,test_rows,accuracy,precision,recall,f1") {
        return Err(bad("unexpected header"));
    }
    let mut points = Vec::new();
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 8 {
            return Err(bad("malformed row"));
        }
        let num = |i: usize| cells[i].parse::<f64>().map_err(|_| bad("bad number"));
        points.push(CurvePoint {
            fraction: num(0)?,
            kind: parse_model_kind(cells[1]).ok_or_else(|| bad("unknown model"))?,
            train_rows: cells[2].parse().map_err(|_| bad("bad count"))?,
            test_rows: cells[3].parse().map_err(|_| bad("bad count"))?,
            metrics: MetricsReport {
                accuracy: num(4)?,
                precision: num(5)?,
                recall: num(6)?,
                f1: num(7)?,
                degenerate: false,
            },
        });
    }
    Ok(points)
}
