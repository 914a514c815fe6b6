//! Raw text cells to reals.
//!
//! Conversion rules, in the order they are consulted per cell (cells are
//! trimmed first):
//!
//! * dash (`-`) and empty cells become 0.0 in every non-one-hot column, and
//!   "no category seen" (all indicators zero) in one-hot columns;
//! * numeric columns parse as reals, with unparsable text falling back to
//!   0.0 and any parse yielding NaN or infinity rejected as an error;
//! * port columns accept decimal and `0x`-prefixed hexadecimal integers;
//! * IP columns map a dotted quad to its 32-bit integer value;
//! * one-hot columns expand to one indicator per seen category, named
//!   `<column>_<value>` with every non-alphanumeric character of the value
//!   replaced by an underscore (two raw values that normalize identically
//!   share an indicator);
//! * remaining categorical columns get dense ordinal codes starting at 1,
//!   with 0 reserved for dash/empty/unseen values.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::data::{extract_labels, ColumnRole, DatasetKind, LabelError, RawTable};
use crate::matrix::FeatureMatrix;

/// Fitted per-column conversion plan. Applying the same encoder to the same
/// table always yields the same matrix; category vocabularies are fixed at
/// fit time, and categories unseen then map to the reserved values.
#[derive(Clone, Debug, PartialEq)]
pub struct CategoryEncoder {
    kind: DatasetKind,
    n_columns: usize,
    plans: Vec<ColumnPlan>,
    feature_names: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
enum ColumnPlan {
    Numeric { name: String },
    Port { name: String },
    Ip { name: String },
    Ordinal { name: String, codes: BTreeMap<String, usize> },
    OneHot { name: String, categories: Vec<String> },
    Label,
}

impl CategoryEncoder {
    /// Learns category vocabularies from every row of `table`.
    pub fn fit(table: &RawTable) -> CategoryEncoder {
        let schema = table.schema();
        let mut seen: Vec<BTreeSet<String>> = Vec::new();
        seen.resize_with(schema.n_columns(), BTreeSet::new);

        for row in table.rows() {
            for (c, cell) in row.iter().enumerate() {
                match schema.roles()[c] {
                    ColumnRole::OneHot => {
                        let t = cell.trim();
                        if !is_missing(t) {
                            seen[c].insert(normalize_category(t));
                        }
                    }
                    ColumnRole::Ordinal => {
                        let t = cell.trim();
                        if !is_missing(t) {
                            seen[c].insert(String::from(t));
                        }
                    }
                    _ => {}
                }
            }
        }

        let mut plans = Vec::with_capacity(schema.n_columns());
        let mut feature_names = Vec::new();
        for (c, name) in schema.column_names().iter().enumerate() {
            let plan = match schema.roles()[c] {
                ColumnRole::Numeric => ColumnPlan::Numeric { name: name.clone() },
                ColumnRole::Port => ColumnPlan::Port { name: name.clone() },
                ColumnRole::IpAddr => ColumnPlan::Ip { name: name.clone() },
                ColumnRole::Ordinal => {
                    let codes = seen[c]
                        .iter()
                        .enumerate()
                        .map(|(i, v)| (v.clone(), i + 1))
                        .collect();
                    ColumnPlan::Ordinal {
                        name: name.clone(),
                        codes,
                    }
                }
                ColumnRole::OneHot => ColumnPlan::OneHot {
                    name: name.clone(),
                    categories: seen[c].iter().cloned().collect(),
                },
                ColumnRole::Label => ColumnPlan::Label,
            };
            match &plan {
                ColumnPlan::Label => {}
                ColumnPlan::OneHot { name, categories } => {
                    for cat in categories {
                        let mut indicator = name.clone();
                        indicator.push('_');
                        indicator.push_str(cat);
                        feature_names.push(indicator);
                    }
                }
                ColumnPlan::Numeric { name }
                | ColumnPlan::Port { name }
                | ColumnPlan::Ip { name }
                | ColumnPlan::Ordinal { name, .. } => feature_names.push(name.clone()),
            }
            plans.push(plan);
        }

        CategoryEncoder {
            kind: schema.kind(),
            n_columns: schema.n_columns(),
            plans,
            feature_names,
        }
    }

    /// Names of the encoded output columns, in emission order.
    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    /// Converts a table under this fitted plan. The table must share the
    /// schema shape the encoder was fitted on.
    pub fn apply(&self, table: &RawTable) -> Result<FeatureMatrix, EncodeError> {
        let schema = table.schema();
        if schema.kind() != self.kind || schema.n_columns() != self.n_columns {
            return Err(EncodeError::SchemaMismatch {
                fitted: self.kind,
                given: schema.kind(),
            });
        }
        let labels = extract_labels(table)?;

        let width = self.feature_names.len();
        let mut values = Vec::with_capacity(width * table.n_rows());
        for (r, row) in table.rows().iter().enumerate() {
            for (c, plan) in self.plans.iter().enumerate() {
                let cell = row[c].trim();
                match plan {
                    ColumnPlan::Label => {}
                    ColumnPlan::Numeric { name } => {
                        values.push(numeric_value(cell).map_err(|_| EncodeError::NonFinite {
                            row: r,
                            column: name.clone(),
                        })?);
                    }
                    ColumnPlan::Port { name } => {
                        values.push(port_value(cell).map_err(|_| EncodeError::NonFinite {
                            row: r,
                            column: name.clone(),
                        })?);
                    }
                    ColumnPlan::Ip { .. } => values.push(ip_value(cell)),
                    ColumnPlan::Ordinal { codes, .. } => {
                        let code = if is_missing(cell) {
                            0
                        } else {
                            codes.get(cell).copied().unwrap_or(0)
                        };
                        values.push(code as f64);
                    }
                    ColumnPlan::OneHot { categories, .. } => {
                        let hit = if is_missing(cell) {
                            None
                        } else {
                            let norm = normalize_category(cell);
                            categories.binary_search(&norm).ok()
                        };
                        for i in 0..categories.len() {
                            values.push(if hit == Some(i) { 1.0 } else { 0.0 });
                        }
                    }
                }
            }
        }

        FeatureMatrix::new(values, self.feature_names.clone(), labels)
            .map_err(|_| EncodeError::Internal)
    }
}

/// Fits an encoder on `table` and applies it in one step.
pub fn encode(table: &RawTable) -> Result<(CategoryEncoder, FeatureMatrix), EncodeError> {
    let encoder = CategoryEncoder::fit(table);
    let matrix = encoder.apply(table)?;
    Ok((encoder, matrix))
}

fn is_missing(trimmed: &str) -> bool {
    trimmed.is_empty() || trimmed == "-"
}

/// Indicator-name normalization: ASCII letters and digits pass through,
/// everything else becomes an underscore. Case is preserved.
fn normalize_category(trimmed: &str) -> String {
    trimmed
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

#[derive(Debug)]
struct NonFiniteCell;

fn numeric_value(trimmed: &str) -> Result<f64, NonFiniteCell> {
    if is_missing(trimmed) {
        return Ok(0.0);
    }
    match trimmed.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(_) => Err(NonFiniteCell),
        Err(_) => Ok(0.0),
    }
}

fn port_value(trimmed: &str) -> Result<f64, NonFiniteCell> {
    if is_missing(trimmed) {
        return Ok(0.0);
    }
    let hex = trimmed
        .strip_prefix("0x")
        .or_else(|| trimmed.strip_prefix("0X"));
    if let Some(digits) = hex {
        if let Ok(v) = u64::from_str_radix(digits, 16) {
            return Ok(v as f64);
        }
        return Ok(0.0);
    }
    if let Ok(v) = trimmed.parse::<u64>() {
        return Ok(v as f64);
    }
    numeric_value(trimmed)
}

fn ip_value(trimmed: &str) -> f64 {
    if is_missing(trimmed) {
        return 0.0;
    }
    let mut packed: u32 = 0;
    let mut octets = 0;
    for part in trimmed.split('.') {
        let Ok(octet) = part.parse::<u8>() else {
            return 0.0;
        };
        packed = (packed << 8) | u32::from(octet);
        octets += 1;
    }
    if octets == 4 {
        packed as f64
    } else {
        0.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum EncodeError {
    Label(LabelError),
    NonFinite { row: usize, column: String },
    SchemaMismatch { fitted: DatasetKind, given: DatasetKind },
    Internal,
}

impl From<LabelError> for EncodeError {
    fn from(e: LabelError) -> Self {
        EncodeError::Label(e)
    }
}

impl fmt::Display for EncodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EncodeError::Label(e) => write!(f, "label extraction failed: {e}"),
            EncodeError::NonFinite { row, column } => {
                write!(f, "row {row}, column {column}: cell encodes to NaN or infinity")
            }
            EncodeError::SchemaMismatch { fitted, given } => {
                write!(f, "encoder fitted on {fitted} applied to {given} table")
            }
            EncodeError::Internal => write!(f, "encoded matrix violated its own invariants"),
        }
    }
}

impl core::error::Error for EncodeError {}
