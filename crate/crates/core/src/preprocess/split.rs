//! Seeded train/test splitting, stratified by default.

use alloc::vec::Vec;
use core::fmt;

use crate::fmath;
use crate::matrix::FeatureMatrix;
use crate::rng::Stream;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplitSpec {
    /// Share of rows that becomes training data; must lie in (0, 1).
    pub train_fraction: f64,
    pub seed: u64,
    pub stratified: bool,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            train_fraction: 0.10,
            seed: 0,
            stratified: true,
        }
    }
}

/// Disjoint, exhaustive `(train, test)` row-index partition, each side
/// sorted ascending. Stratified mode keeps per-class training shares within
/// one sample of `train_fraction`.
pub fn split_indices(labels: &[u8], spec: &SplitSpec) -> Result<(Vec<usize>, Vec<usize>), SplitError> {
    if !(spec.train_fraction > 0.0 && spec.train_fraction < 1.0) {
        return Err(SplitError::FractionRange {
            fraction: spec.train_fraction,
        });
    }
    if labels.is_empty() {
        return Err(SplitError::EmptyInput);
    }

    let mut stream = Stream::new(spec.seed);
    let mut train = Vec::new();
    let mut test = Vec::new();

    if spec.stratified {
        let mut class0: Vec<usize> = Vec::new();
        let mut class1: Vec<usize> = Vec::new();
        for (i, &l) in labels.iter().enumerate() {
            if l == 0 {
                class0.push(i);
            } else {
                class1.push(i);
            }
        }
        if class0.is_empty() || class1.is_empty() {
            return Err(SplitError::SingleClass);
        }
        for class in [&mut class0, &mut class1] {
            stream.shuffle(class);
            let take = rounded_share(class.len(), spec.train_fraction);
            train.extend_from_slice(&class[..take]);
            test.extend_from_slice(&class[take..]);
        }
    } else {
        let mut all: Vec<usize> = (0..labels.len()).collect();
        stream.shuffle(&mut all);
        let take = rounded_share(all.len(), spec.train_fraction);
        train.extend_from_slice(&all[..take]);
        test.extend_from_slice(&all[take..]);
    }

    if train.is_empty() {
        return Err(SplitError::EmptyPartition { side: "train" });
    }
    if test.is_empty() {
        return Err(SplitError::EmptyPartition { side: "test" });
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

/// [`split_indices`] materialized into two matrices.
pub fn split(
    m: &FeatureMatrix,
    spec: &SplitSpec,
) -> Result<(FeatureMatrix, FeatureMatrix), SplitError> {
    let (train, test) = split_indices(m.labels(), spec)?;
    Ok((m.subset_rows(&train), m.subset_rows(&test)))
}

/// `round(fraction * n)`, half away from zero, capped at `n`.
fn rounded_share(n: usize, fraction: f64) -> usize {
    let raw = fmath::round(fraction * n as f64) as usize;
    raw.min(n)
}

#[derive(Clone, Debug, PartialEq)]
pub enum SplitError {
    FractionRange { fraction: f64 },
    EmptyInput,
    SingleClass,
    EmptyPartition { side: &'static str },
}

impl fmt::Display for SplitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplitError::FractionRange { fraction } => {
                write!(f, "train_fraction must lie in (0, 1), got {fraction}")
            }
            SplitError::EmptyInput => write!(f, "cannot split an empty dataset"),
            SplitError::SingleClass => {
                write!(f, "stratified split requires both classes to be present")
            }
            SplitError::EmptyPartition { side } => {
                write!(f, "train_fraction leaves the {side} partition empty")
            }
        }
    }
}

impl core::error::Error for SplitError {}
