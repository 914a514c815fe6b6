use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::schema::{DatasetSchema, LabelError};

/// A parsed dataset: every cell still raw text, shaped by its schema.
#[derive(Clone, Debug, PartialEq)]
pub struct RawTable {
    schema: DatasetSchema,
    rows: Vec<Vec<String>>,
}

impl RawTable {
    /// Wraps parsed rows; every row must match the schema's column count.
    pub fn new(schema: DatasetSchema, rows: Vec<Vec<String>>) -> Result<Self, TableError> {
        let want = schema.n_columns();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != want {
                return Err(TableError::FieldCount {
                    row: i,
                    expected: want,
                    actual: row.len(),
                });
            }
        }
        Ok(RawTable { schema, rows })
    }

    pub fn schema(&self) -> &DatasetSchema {
        &self.schema
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn cell(&self, row: usize, column: usize) -> &str {
        &self.rows[row][column]
    }

    /// New table holding the given rows, in `keep` order.
    ///
    /// # Panics
    /// Panics if an index is out of range.
    pub fn subset(&self, keep: &[usize]) -> RawTable {
        RawTable {
            schema: self.schema.clone(),
            rows: keep.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }
}

/// Binary labels for every row, using the schema's label rule.
pub fn extract_labels(table: &RawTable) -> Result<Vec<u8>, LabelError> {
    if table.n_rows() == 0 {
        return Err(LabelError::EmptyTable);
    }
    let kind = table.schema().kind();
    let col = table.schema().label_column();
    table
        .rows()
        .iter()
        .enumerate()
        .map(|(i, row)| kind.parse_label(&row[col], i))
        .collect()
}

/// `(benign, malicious)` counts. An empty slice counts as `(0, 0)`.
pub fn class_counts(labels: &[u8]) -> (usize, usize) {
    let malicious = labels.iter().filter(|&&l| l == 1).count();
    (labels.len() - malicious, malicious)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableError {
    FieldCount {
        row: usize,
        expected: usize,
        actual: usize,
    },
}

impl fmt::Display for TableError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableError::FieldCount {
                row,
                expected,
                actual,
            } => write!(
                f,
                "row {row}: expected {expected} fields, got {actual}"
            ),
        }
    }
}

impl core::error::Error for TableError {}
