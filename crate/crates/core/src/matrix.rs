//! Dense row-major feature matrix with binary labels.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Encoded samples: `n_samples x n_features` reals plus one 0/1 label per
/// row. Construction enforces the shape and finiteness invariants, so
/// downstream stages never re-check them.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureMatrix {
    values: Vec<f64>,
    n_features: usize,
    feature_names: Vec<String>,
    labels: Vec<u8>,
}

impl FeatureMatrix {
    pub fn new(
        values: Vec<f64>,
        feature_names: Vec<String>,
        labels: Vec<u8>,
    ) -> Result<Self, MatrixError> {
        let n_features = feature_names.len();
        if values.len() != labels.len() * n_features {
            return Err(MatrixError::ValueCount {
                values: values.len(),
                expected: labels.len() * n_features,
            });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(MatrixError::NonFinite {
                row: pos / n_features.max(1),
                column: pos % n_features.max(1),
            });
        }
        if let Some(pos) = labels.iter().position(|&l| l > 1) {
            return Err(MatrixError::BadLabel {
                row: pos,
                value: labels[pos],
            });
        }
        Ok(FeatureMatrix {
            values,
            n_features,
            feature_names,
            labels,
        })
    }

    pub fn n_samples(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// Row-major backing slice, `n_samples * n_features` long.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn value(&self, row: usize, column: usize) -> f64 {
        self.values[row * self.n_features + column]
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_samples()).map(move |i| self.value(i, j))
    }

    /// New matrix holding the given rows, in `keep` order.
    ///
    /// # Panics
    /// Panics if an index is out of range.
    pub fn subset_rows(&self, keep: &[usize]) -> FeatureMatrix {
        let mut values = Vec::with_capacity(keep.len() * self.n_features);
        let mut labels = Vec::with_capacity(keep.len());
        for &i in keep {
            values.extend_from_slice(self.row(i));
            labels.push(self.labels[i]);
        }
        FeatureMatrix {
            values,
            n_features: self.n_features,
            feature_names: self.feature_names.clone(),
            labels,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MatrixError {
    ValueCount { values: usize, expected: usize },
    NonFinite { row: usize, column: usize },
    BadLabel { row: usize, value: u8 },
}

impl fmt::Display for MatrixError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixError::ValueCount { values, expected } => {
                write!(f, "value buffer holds {values} entries, expected {expected}")
            }
            MatrixError::NonFinite { row, column } => {
                write!(f, "non-finite value at row {row}, column {column}")
            }
            MatrixError::BadLabel { row, value } => {
                write!(f, "label at row {row} is {value}, expected 0 or 1")
            }
        }
    }
}

impl core::error::Error for MatrixError {}
