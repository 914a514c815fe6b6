//! CSV files to raw tables.
//!
//! Quoting and escapes follow RFC 4180 via the `csv` reader; cell-level
//! cleanup (trimming, dashes, hex ports) happens later in the encoder.
//! Shape problems are reported with 1-based line numbers from the file,
//! counting the header line when one is present.

use std::fs::File;
use std::path::Path;

use nids_core::data::{DatasetKind, DatasetSchema, RawTable};

use crate::error::CliError;

/// Reads `path` into a raw table under the built-in schema for `kind`.
pub fn read_table(path: &Path, kind: DatasetKind, has_header: bool) -> Result<RawTable, CliError> {
    let schema = match kind {
        DatasetKind::Unsw => DatasetSchema::unsw(),
        DatasetKind::Kdd => DatasetSchema::kdd(),
    };
    let expected = schema.n_columns();

    let file = File::open(path)
        .map_err(|e| CliError::data(format!("cannot open {}: {e}", path.display())))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .from_reader(file);

    let mut rows: Vec<Vec<String>> = Vec::new();
    for record in reader.records() {
        let record = record
            .map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
        let line = record
            .position()
            .map(|p| p.line())
            .unwrap_or(rows.len() as u64 + 1);
        if record.len() != expected {
            return Err(CliError::data(format!(
                "{}:{line}: expected {expected} fields, got {}",
                path.display(),
                record.len()
            )));
        }
        rows.push(record.iter().map(String::from).collect());
    }

    if rows.is_empty() {
        return Err(CliError::data(format!(
            "{}: no data rows",
            path.display()
        )));
    }

    RawTable::new(schema, rows)
        .map_err(|e| CliError::internal(format!("{}: {e}", path.display())))
}
