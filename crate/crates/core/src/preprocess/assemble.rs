//! Split, oversample, and fuse the two selected datasets in one step.
//!
//! Each dataset is partitioned and balanced independently, then the
//! per-dataset training and test halves are stacked. Seeds for the four
//! random stages are derived from the master seed with fixed tags, so an
//! assembly at some train fraction is bit-identical whether it runs alone
//! or as one point of a learning-curve sweep.

use core::fmt;

use crate::data::{class_counts, DatasetKind};
use crate::matrix::FeatureMatrix;
use crate::preprocess::feature_map::FeatureMap;
use crate::preprocess::fuse::{fuse, FuseError};
use crate::preprocess::smote::{smote, SmoteConfig, SmoteError};
use crate::preprocess::split::{split, SplitError, SplitSpec};
use crate::rng::derive_seed;

/// Where oversampling is applied relative to the train/test split.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmoteScope {
    /// Balance only the training half; the test half keeps the natural
    /// class ratio. This is the default.
    TrainOnly,
    /// Balance the whole dataset before splitting, so synthetic rows can
    /// land in the test half as well.
    Whole,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AssembleSpec {
    pub train_fraction: f64,
    pub seed: u64,
    pub scope: SmoteScope,
    pub k_neighbors: usize,
}

impl Default for AssembleSpec {
    fn default() -> Self {
        AssembleSpec {
            train_fraction: 0.10,
            seed: 0,
            scope: SmoteScope::TrainOnly,
            k_neighbors: 5,
        }
    }
}

/// Class counts around the oversampling step for one dataset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SmoteBalance {
    pub kind: DatasetKind,
    pub benign_before: usize,
    pub malicious_before: usize,
    pub benign_after: usize,
    pub malicious_after: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Assembled {
    pub train: FeatureMatrix,
    pub test: FeatureMatrix,
    pub balance: [SmoteBalance; 2],
}

pub fn assemble(
    unsw: &FeatureMatrix,
    kdd: &FeatureMatrix,
    map: &FeatureMap,
    spec: &AssembleSpec,
) -> Result<Assembled, AssembleError> {
    let (unsw_train, unsw_test, unsw_balance) = one_side(unsw, DatasetKind::Unsw, spec)?;
    let (kdd_train, kdd_test, kdd_balance) = one_side(kdd, DatasetKind::Kdd, spec)?;
    let train = fuse(&unsw_train, &kdd_train, map)?;
    let test = fuse(&unsw_test, &kdd_test, map)?;
    Ok(Assembled {
        train,
        test,
        balance: [unsw_balance, kdd_balance],
    })
}

fn one_side(
    m: &FeatureMatrix,
    kind: DatasetKind,
    spec: &AssembleSpec,
) -> Result<(FeatureMatrix, FeatureMatrix, SmoteBalance), AssembleError> {
    let tag_split = match kind {
        DatasetKind::Unsw => "split.unsw",
        DatasetKind::Kdd => "split.kdd",
    };
    let tag_smote = match kind {
        DatasetKind::Unsw => "smote.unsw",
        DatasetKind::Kdd => "smote.kdd",
    };
    let split_spec = SplitSpec {
        train_fraction: spec.train_fraction,
        seed: derive_seed(spec.seed, tag_split),
        stratified: true,
    };
    let smote_cfg = SmoteConfig {
        k_neighbors: spec.k_neighbors,
        seed: derive_seed(spec.seed, tag_smote),
    };

    match spec.scope {
        SmoteScope::TrainOnly => {
            let (train, test) = split(m, &split_spec).map_err(|source| AssembleError::Split {
                kind,
                source,
            })?;
            let balanced =
                smote(&train, &smote_cfg).map_err(|source| AssembleError::Smote { kind, source })?;
            let balance = balance_record(kind, &train, &balanced);
            Ok((balanced, test, balance))
        }
        SmoteScope::Whole => {
            let balanced =
                smote(m, &smote_cfg).map_err(|source| AssembleError::Smote { kind, source })?;
            let balance = balance_record(kind, m, &balanced);
            let (train, test) =
                split(&balanced, &split_spec).map_err(|source| AssembleError::Split {
                    kind,
                    source,
                })?;
            Ok((train, test, balance))
        }
    }
}

fn balance_record(kind: DatasetKind, before: &FeatureMatrix, after: &FeatureMatrix) -> SmoteBalance {
    let (benign_before, malicious_before) = class_counts(before.labels());
    let (benign_after, malicious_after) = class_counts(after.labels());
    SmoteBalance {
        kind,
        benign_before,
        malicious_before,
        benign_after,
        malicious_after,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AssembleError {
    Split { kind: DatasetKind, source: SplitError },
    Smote { kind: DatasetKind, source: SmoteError },
    Fuse(FuseError),
}

impl From<FuseError> for AssembleError {
    fn from(e: FuseError) -> Self {
        AssembleError::Fuse(e)
    }
}

impl fmt::Display for AssembleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AssembleError::Split { kind, source } => write!(f, "{kind} split: {source}"),
            AssembleError::Smote { kind, source } => write!(f, "{kind} oversampling: {source}"),
            AssembleError::Fuse(source) => write!(f, "fuse: {source}"),
        }
    }
}

impl core::error::Error for AssembleError {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            AssembleError::Split { source, .. } => Some(source),
            AssembleError::Smote { source, .. } => Some(source),
            AssembleError::Fuse(source) => Some(source),
        }
    }
}
