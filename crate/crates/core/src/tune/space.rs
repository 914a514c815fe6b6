//! Candidate grids and their translation into model settings.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::matrix::FeatureMatrix;
use crate::model::{
    ForestConfig, ForestModel, GbmConfig, GbmModel, LogRegConfig, LogRegModel, ModelKind,
    TrainError, TrainedModel, TreeConfig, TreeModel,
};
use crate::tune::TuneError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ParamValue {
    Int(u64),
    Float(f64),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Float(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParamAxis {
    pub name: String,
    pub values: Vec<ParamValue>,
}

impl ParamAxis {
    fn new(name: &str, values: Vec<ParamValue>) -> Self {
        ParamAxis {
            name: String::from(name),
            values,
        }
    }
}

/// A finite grid of candidate settings for one model kind. Candidates are
/// numbered 0..total() in mixed radix with the last axis moving fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamSpace {
    pub kind: ModelKind,
    pub axes: Vec<ParamAxis>,
}

impl ParamSpace {
    /// The grids searched by default for each model kind.
    pub fn default_for(kind: ModelKind) -> ParamSpace {
        let ints = |vals: &[u64]| vals.iter().map(|&v| ParamValue::Int(v)).collect();
        let floats = |vals: &[f64]| vals.iter().map(|&v| ParamValue::Float(v)).collect();
        let axes = match kind {
            ModelKind::Tree => vec![ParamAxis::new("min_samples_leaf", ints(&[1, 2, 4]))],
            ModelKind::Forest => vec![
                ParamAxis::new("n_estimators", ints(&[50, 100, 200])),
                ParamAxis::new("min_samples_leaf", ints(&[1, 2, 4])),
            ],
            ModelKind::Gbm => vec![
                ParamAxis::new("n_estimators", ints(&[50, 100, 200])),
                ParamAxis::new("max_depth", ints(&[3, 5, 7])),
                ParamAxis::new("learning_rate", floats(&[0.01, 0.1, 0.3])),
            ],
            ModelKind::LogReg => vec![ParamAxis::new(
                "c",
                floats(&[0.01, 0.1, 1.0, 10.0, 100.0]),
            )],
        };
        ParamSpace { kind, axes }
    }

    pub fn total(&self) -> usize {
        self.axes.iter().map(|a| a.values.len()).product()
    }

    /// The `index`-th candidate as name/value pairs in axis order.
    ///
    /// `index` must be below `total()`.
    pub fn assignment(&self, index: usize) -> Vec<(String, ParamValue)> {
        assert!(index < self.total(), "candidate index out of range");
        let mut rem = index;
        let mut digits = vec![0usize; self.axes.len()];
        for (d, axis) in self.axes.iter().enumerate().rev() {
            digits[d] = rem % axis.values.len();
            rem /= axis.values.len();
        }
        self.axes
            .iter()
            .zip(digits)
            .map(|(axis, d)| (axis.name.clone(), axis.values[d]))
            .collect()
    }
}

/// Ready-to-fit settings for one model kind.
#[derive(Clone, Debug, PartialEq)]
pub enum ModelParams {
    Tree(TreeConfig),
    Forest(ForestConfig),
    Gbm(GbmConfig),
    LogReg(LogRegConfig),
}

impl ModelParams {
    /// Applies an assignment over the default settings for `kind`. The
    /// seed lands in the settings of models that sample.
    pub fn from_assignment(
        kind: ModelKind,
        assignment: &[(String, ParamValue)],
        seed: u64,
    ) -> Result<ModelParams, TuneError> {
        let unknown = |name: &String| TuneError::UnknownParam {
            kind,
            name: name.clone(),
        };
        let int = |name: &String, value: &ParamValue| match value {
            ParamValue::Int(v) => Ok(*v as usize),
            ParamValue::Float(_) => Err(TuneError::WrongType { name: name.clone() }),
        };
        let float = |name: &String, value: &ParamValue| match value {
            ParamValue::Float(v) => Ok(*v),
            ParamValue::Int(_) => Err(TuneError::WrongType { name: name.clone() }),
        };

        match kind {
            ModelKind::Tree => {
                let mut cfg = TreeConfig::default();
                for (name, value) in assignment {
                    match name.as_str() {
                        "max_depth" => cfg.max_depth = Some(int(name, value)?),
                        "min_samples_leaf" => cfg.min_samples_leaf = int(name, value)?,
                        _ => return Err(unknown(name)),
                    }
                }
                Ok(ModelParams::Tree(cfg))
            }
            ModelKind::Forest => {
                let mut cfg = ForestConfig {
                    seed,
                    ..ForestConfig::default()
                };
                for (name, value) in assignment {
                    match name.as_str() {
                        "n_estimators" => cfg.n_estimators = int(name, value)?,
                        "max_depth" => cfg.max_depth = Some(int(name, value)?),
                        "min_samples_leaf" => cfg.min_samples_leaf = int(name, value)?,
                        "features_per_split" => {
                            cfg.features_per_split = Some(int(name, value)?)
                        }
                        _ => return Err(unknown(name)),
                    }
                }
                Ok(ModelParams::Forest(cfg))
            }
            ModelKind::Gbm => {
                let mut cfg = GbmConfig {
                    seed,
                    ..GbmConfig::default()
                };
                for (name, value) in assignment {
                    match name.as_str() {
                        "n_estimators" => cfg.n_estimators = int(name, value)?,
                        "max_depth" => cfg.max_depth = int(name, value)?,
                        "learning_rate" => cfg.learning_rate = float(name, value)?,
                        "l2" => cfg.l2 = float(name, value)?,
                        _ => return Err(unknown(name)),
                    }
                }
                Ok(ModelParams::Gbm(cfg))
            }
            ModelKind::LogReg => {
                let mut cfg = LogRegConfig::default();
                for (name, value) in assignment {
                    match name.as_str() {
                        "c" => cfg.c = float(name, value)?,
                        "max_iterations" => cfg.max_iterations = int(name, value)?,
                        "step_size" => cfg.step_size = float(name, value)?,
                        _ => return Err(unknown(name)),
                    }
                }
                Ok(ModelParams::LogReg(cfg))
            }
        }
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            ModelParams::Tree(_) => ModelKind::Tree,
            ModelParams::Forest(_) => ModelKind::Forest,
            ModelParams::Gbm(_) => ModelKind::Gbm,
            ModelParams::LogReg(_) => ModelKind::LogReg,
        }
    }

    pub fn fit(&self, m: &FeatureMatrix) -> Result<TrainedModel, TrainError> {
        match self {
            ModelParams::Tree(cfg) => TreeModel::fit(m, cfg).map(TrainedModel::Tree),
            ModelParams::Forest(cfg) => ForestModel::fit(m, cfg).map(TrainedModel::Forest),
            ModelParams::Gbm(cfg) => GbmModel::fit(m, cfg).map(TrainedModel::Gbm),
            ModelParams::LogReg(cfg) => LogRegModel::fit(m, cfg).map(TrainedModel::LogReg),
        }
    }
}
