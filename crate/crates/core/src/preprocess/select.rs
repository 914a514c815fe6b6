//! Projection of an encoded matrix onto the 48 mapped columns.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::data::DatasetKind;
use crate::matrix::FeatureMatrix;
use crate::preprocess::feature_map::FeatureMap;

/// Keeps the mapped columns for `kind`, in map order, dropping everything
/// else. Column names are preserved, so selecting an already-selected
/// matrix is a no-op.
pub fn select_features(
    m: &FeatureMatrix,
    map: &FeatureMap,
    kind: DatasetKind,
) -> Result<FeatureMatrix, SelectError> {
    let positions: BTreeMap<&str, usize> = m
        .feature_names()
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();

    let mut picked = Vec::with_capacity(map.len());
    let mut missing = Vec::new();
    for i in 0..map.len() {
        let name = map.name(kind, i);
        match positions.get(name) {
            Some(&col) => picked.push(col),
            None => missing.push(name.to_string()),
        }
    }
    if !missing.is_empty() {
        return Err(SelectError::MissingColumns { kind, missing });
    }

    let mut values = Vec::with_capacity(m.n_samples() * picked.len());
    for r in 0..m.n_samples() {
        let row = m.row(r);
        for &c in &picked {
            values.push(row[c]);
        }
    }
    let names: Vec<String> = (0..map.len()).map(|i| map.name(kind, i).to_string()).collect();
    Ok(FeatureMatrix::new(values, names, m.labels().to_vec()).expect("projection of a valid matrix"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SelectError {
    MissingColumns { kind: DatasetKind, missing: Vec<String> },
}

impl fmt::Display for SelectError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SelectError::MissingColumns { kind, missing } => {
                write!(f, "{kind} matrix lacks mapped columns: ")?;
                for (i, name) in missing.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{name}")?;
                }
                Ok(())
            }
        }
    }
}

impl core::error::Error for SelectError {}
