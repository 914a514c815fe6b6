//! Stacking the two selected datasets into one training matrix.
//!
//! Both inputs must already be projected onto the shared 48-column layout,
//! with column names matching their side of the feature map in order. The
//! fused matrix renames columns to the neutral `f00..f47` scheme so that
//! rows from either source are indistinguishable downstream.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::data::DatasetKind;
use crate::matrix::FeatureMatrix;
use crate::preprocess::feature_map::{FeatureMap, FUSED_WIDTH};

/// Concatenates the rows of `unsw` and `kdd` (in that order) under the
/// fused column names.
pub fn fuse(
    unsw: &FeatureMatrix,
    kdd: &FeatureMatrix,
    map: &FeatureMap,
) -> Result<FeatureMatrix, FuseError> {
    check_side(unsw, map, DatasetKind::Unsw)?;
    check_side(kdd, map, DatasetKind::Kdd)?;

    let mut values = Vec::with_capacity((unsw.n_samples() + kdd.n_samples()) * FUSED_WIDTH);
    values.extend_from_slice(unsw.values());
    values.extend_from_slice(kdd.values());
    let mut labels = Vec::with_capacity(unsw.n_samples() + kdd.n_samples());
    labels.extend_from_slice(unsw.labels());
    labels.extend_from_slice(kdd.labels());
    let names: Vec<String> = (0..map.len()).map(FeatureMap::fused_name).collect();

    FeatureMatrix::new(values, names, labels).map_err(|_| FuseError::Internal)
}

fn check_side(m: &FeatureMatrix, map: &FeatureMap, kind: DatasetKind) -> Result<(), FuseError> {
    if m.n_features() != map.len() {
        return Err(FuseError::Width {
            kind,
            expected: map.len(),
            actual: m.n_features(),
        });
    }
    for (i, name) in m.feature_names().iter().enumerate() {
        let want = map.name(kind, i);
        if name != want {
            return Err(FuseError::ColumnName {
                kind,
                position: i,
                expected: String::from(want),
                actual: name.clone(),
            });
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FuseError {
    Width {
        kind: DatasetKind,
        expected: usize,
        actual: usize,
    },
    ColumnName {
        kind: DatasetKind,
        position: usize,
        expected: String,
        actual: String,
    },
    Internal,
}

impl fmt::Display for FuseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FuseError::Width {
                kind,
                expected,
                actual,
            } => write!(f, "{kind} side has {actual} columns, expected {expected}"),
            FuseError::ColumnName {
                kind,
                position,
                expected,
                actual,
            } => write!(
                f,
                "{kind} column {position} is {actual:?}, expected {expected:?}"
            ),
            FuseError::Internal => write!(f, "fused matrix failed validation"),
        }
    }
}

impl core::error::Error for FuseError {}
