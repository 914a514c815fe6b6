//! The three detectors and their shared tree plumbing.
//!
//! Every tree-shaped model stores its structure as a flat `Vec<TreeNode>`
//! with the root at index 0, so traversal, inspection, and on-disk
//! encoding work the same for single trees, forest members, and boosted
//! rounds. Scores are always "probability of the malicious class"; the
//! decision rule at 0.5 is documented per model.

mod forest;
mod gbm;
mod logreg;
mod tree;

pub use forest::{ForestConfig, ForestModel};
pub use gbm::{GbmConfig, GbmModel};
pub use logreg::{logreg_objective, LogRegConfig, LogRegModel};
pub use tree::{TreeConfig, TreeModel};

use alloc::vec::Vec;
use core::fmt;

use crate::matrix::FeatureMatrix;

/// One node of a flattened binary decision tree.
///
/// Internal nodes route a row left when `row[feature] <= threshold`.
/// `left` and `right` index into the owning node vector. For leaves only
/// `value` is meaningful; the remaining fields are zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TreeNode {
    pub feature: usize,
    pub threshold: f64,
    pub left: usize,
    pub right: usize,
    pub leaf: bool,
    pub value: f64,
}

impl TreeNode {
    pub(crate) fn leaf(value: f64) -> Self {
        TreeNode {
            feature: 0,
            threshold: 0.0,
            left: 0,
            right: 0,
            leaf: true,
            value,
        }
    }
}

/// Evaluates a flattened tree on one row.
pub(crate) fn tree_output(nodes: &[TreeNode], row: &[f64]) -> f64 {
    let mut i = 0;
    loop {
        let node = &nodes[i];
        if node.leaf {
            return node.value;
        }
        i = if row[node.feature] <= node.threshold {
            node.left
        } else {
            node.right
        };
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ModelKind {
    Tree,
    Forest,
    Gbm,
    LogReg,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Tree => "tree",
            ModelKind::Forest => "forest",
            ModelKind::Gbm => "gbm",
            ModelKind::LogReg => "logreg",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A fitted model of any kind, for uniform dispatch in search and the
/// command pipeline.
#[derive(Clone, Debug, PartialEq)]
pub enum TrainedModel {
    Tree(TreeModel),
    Forest(ForestModel),
    Gbm(GbmModel),
    LogReg(LogRegModel),
}

impl TrainedModel {
    pub fn kind(&self) -> ModelKind {
        match self {
            TrainedModel::Tree(_) => ModelKind::Tree,
            TrainedModel::Forest(_) => ModelKind::Forest,
            TrainedModel::Gbm(_) => ModelKind::Gbm,
            TrainedModel::LogReg(_) => ModelKind::LogReg,
        }
    }

    pub fn predict_scores(&self, m: &FeatureMatrix) -> Result<Vec<f64>, PredictError> {
        match self {
            TrainedModel::Tree(t) => t.predict_scores(m),
            TrainedModel::Forest(t) => t.predict_scores(m),
            TrainedModel::Gbm(t) => t.predict_scores(m),
            TrainedModel::LogReg(t) => t.predict_scores(m),
        }
    }

    pub fn predict(&self, m: &FeatureMatrix) -> Result<Vec<u8>, PredictError> {
        match self {
            TrainedModel::Tree(t) => t.predict(m),
            TrainedModel::Forest(t) => t.predict(m),
            TrainedModel::Gbm(t) => t.predict(m),
            TrainedModel::LogReg(t) => t.predict(m),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TrainError {
    EmptyInput,
    /// Boosting needs both classes present to anchor its base score.
    SingleClass,
    /// The optimizer left the finite range; a smaller step size usually
    /// fixes this.
    NonFiniteObjective,
    InvalidConfig { what: &'static str },
}

impl fmt::Display for TrainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrainError::EmptyInput => write!(f, "cannot fit a model on zero rows"),
            TrainError::SingleClass => write!(f, "training rows contain only one class"),
            TrainError::NonFiniteObjective => {
                write!(f, "objective became non-finite; retry with a smaller step_size")
            }
            TrainError::InvalidConfig { what } => write!(f, "invalid model settings: {what}"),
        }
    }
}

impl core::error::Error for TrainError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PredictError {
    FeatureCount { expected: usize, actual: usize },
}

impl fmt::Display for PredictError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PredictError::FeatureCount { expected, actual } => {
                write!(f, "model expects {expected} features, matrix has {actual}")
            }
        }
    }
}

impl core::error::Error for PredictError {}

pub(crate) fn check_width(expected: usize, m: &FeatureMatrix) -> Result<(), PredictError> {
    if m.n_features() != expected {
        return Err(PredictError::FeatureCount {
            expected,
            actual: m.n_features(),
        });
    }
    Ok(())
}
