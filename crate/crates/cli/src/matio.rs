//! On-disk matrix caches and the small CSV sidecars.
//!
//! The matrix format is plain text: a version line, `rows`/`cols` counts,
//! the column names, one `0`/`1` character per row label, then one
//! space-separated row per line. Floats are written with the shortest
//! representation that parses back to the same bits, so a write/read cycle
//! is lossless.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nids_core::FeatureMatrix;

use crate::error::CliError;

const MAGIC: &str = "nids-matrix v1";

pub fn write_matrix(path: &Path, m: &FeatureMatrix) -> Result<(), CliError> {
    let mut text = String::new();
    text.push_str(MAGIC);
    text.push('\n');
    let _ = writeln!(text, "rows {}", m.n_samples());
    let _ = writeln!(text, "cols {}", m.n_features());
    for name in m.feature_names() {
        if name.contains([',', '\n']) {
            return Err(CliError::internal(format!(
                "column name {name:?} cannot be serialized"
            )));
        }
    }
    let _ = writeln!(text, "names {}", m.feature_names().join(","));
    text.push_str("labels ");
    for &y in m.labels() {
        text.push(if y == 0 { '0' } else { '1' });
    }
    text.push('\n');
    for r in 0..m.n_samples() {
        let row = m.row(r);
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                text.push(' ');
            }
            let _ = write!(text, "{v}");
        }
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| CliError::write_io(path, e))
}

pub fn read_matrix(path: &Path) -> Result<FeatureMatrix, CliError> {
    let text = fs::read_to_string(path).map_err(|e| {
        CliError::precondition(format!(
            "cannot read cache {}: {e} (run preprocess first?)",
            path.display()
        ))
    })?;
    let bad = |why: String| {
        CliError::precondition(format!("{} is not a valid matrix cache: {why}", path.display()))
    };

    let mut lines = text.lines();
    if lines.next() != Some(MAGIC) {
        return Err(bad(format!("missing `{MAGIC}` header")));
    }
    let rows: usize = field(lines.next(), "rows").map_err(bad)?;
    let cols: usize = field(lines.next(), "cols").map_err(bad)?;

    let names_line = lines
        .next()
        .and_then(|l| l.strip_prefix("names "))
        .ok_or_else(|| bad(String::from("missing names line")))?;
    let names: Vec<String> = names_line.split(',').map(String::from).collect();
    if names.len() != cols {
        return Err(bad(format!("{} names for {cols} columns", names.len())));
    }

    let labels_line = lines
        .next()
        .and_then(|l| l.strip_prefix("labels "))
        .ok_or_else(|| bad(String::from("missing labels line")))?;
    let mut labels = Vec::with_capacity(rows);
    for ch in labels_line.chars() {
        match ch {
            '0' => labels.push(0u8),
            '1' => labels.push(1u8),
            other => return Err(bad(format!("label character {other:?}"))),
        }
    }
    if labels.len() != rows {
        return Err(bad(format!("{} labels for {rows} rows", labels.len())));
    }

    let mut values = Vec::with_capacity(rows * cols);
    for (r, line) in lines.by_ref().take(rows).enumerate() {
        let before = values.len();
        for tok in line.split(' ') {
            let v: f64 = tok
                .parse()
                .map_err(|_| bad(format!("row {r}: bad number {tok:?}")))?;
            values.push(v);
        }
        if values.len() - before != cols {
            return Err(bad(format!(
                "row {r} has {} values, expected {cols}",
                values.len() - before
            )));
        }
    }
    if values.len() != rows * cols {
        return Err(bad(format!(
            "{} value rows, expected {rows}",
            values.len() / cols.max(1)
        )));
    }
    if lines.next().is_some() {
        return Err(bad(String::from("trailing content after the last row")));
    }

    FeatureMatrix::new(values, names, labels).map_err(|e| bad(format!("{e}")))
}

fn field<T: std::str::FromStr>(line: Option<&str>, key: &str) -> Result<T, String> {
    line.and_then(|l| l.strip_prefix(key))
        .map(str::trim)
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| format!("missing or bad `{key}` line"))
}
