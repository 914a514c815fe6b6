//! Hyperparameter search: candidate spaces, stratified folds, and
//! seeded random search scored by cross-validated accuracy.

mod kfold;
mod search;
mod space;

pub use kfold::stratified_kfold;
pub use search::{cross_val_accuracy, random_search, Candidate, SearchConfig, SearchResult};
pub use space::{ModelParams, ParamAxis, ParamSpace, ParamValue};

use alloc::string::String;
use core::fmt;

use crate::model::{ModelKind, PredictError, TrainError};

#[derive(Clone, Debug, PartialEq)]
pub enum TuneError {
    KTooSmall { k: usize },
    ClassTooSmall { class: u8, count: usize, k: usize },
    UnknownParam { kind: ModelKind, name: String },
    WrongType { name: String },
    EmptySpace,
    ZeroIterations,
    TooManyIterations { requested: usize, available: usize },
    Fold { fold: usize, source: TrainError },
    Refit(TrainError),
    Predict(PredictError),
}

impl fmt::Display for TuneError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TuneError::KTooSmall { k } => write!(f, "need at least 2 folds, got {k}"),
            TuneError::ClassTooSmall { class, count, k } => write!(
                f,
                "class {class} has {count} rows, fewer than the {k} folds"
            ),
            TuneError::UnknownParam { kind, name } => {
                write!(f, "{kind} models have no parameter named {name:?}")
            }
            TuneError::WrongType { name } => {
                write!(f, "parameter {name:?} received a value of the wrong type")
            }
            TuneError::EmptySpace => write!(f, "the parameter space has no candidates"),
            TuneError::ZeroIterations => write!(f, "n_iter must be at least 1"),
            TuneError::TooManyIterations {
                requested,
                available,
            } => write!(
                f,
                "cannot draw {requested} distinct candidates from a space of {available}"
            ),
            TuneError::Fold { fold, source } => write!(f, "fold {fold}: {source}"),
            TuneError::Refit(source) => write!(f, "refit on the full data: {source}"),
            TuneError::Predict(source) => write!(f, "{source}"),
        }
    }
}

impl core::error::Error for TuneError {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            TuneError::Fold { source, .. } | TuneError::Refit(source) => Some(source),
            TuneError::Predict(source) => Some(source),
            _ => None,
        }
    }
}
