//! Metrics as a function of the training fraction.
//!
//! Each curve point reruns the full assembly (split, oversample, fuse) at
//! its fraction and scores freshly fitted models on that assembly's test
//! half. Assembly seeds do not depend on the fraction, so a single curve
//! point is bit-identical to a standalone run at the same fraction.

use alloc::vec::Vec;
use core::fmt;

use crate::eval::metrics::{confusion, metrics, MetricsError, MetricsReport};
use crate::matrix::FeatureMatrix;
use crate::model::{ModelKind, PredictError, TrainError};
use crate::preprocess::{assemble, AssembleError, AssembleSpec, FeatureMap};
use crate::tune::ModelParams;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub fraction: f64,
    pub kind: ModelKind,
    pub train_rows: usize,
    pub test_rows: usize,
    pub metrics: MetricsReport,
}

/// Sweeps `fractions` (strictly ascending, each inside (0, 1)) and fits
/// every model at every fraction. Points come back fraction-major in the
/// given model order.
pub fn learning_curve(
    unsw: &FeatureMatrix,
    kdd: &FeatureMatrix,
    map: &FeatureMap,
    base: &AssembleSpec,
    fractions: &[f64],
    models: &[ModelParams],
) -> Result<Vec<CurvePoint>, CurveError> {
    if fractions.is_empty() {
        return Err(CurveError::BadFractions {
            why: "at least one fraction is required",
        });
    }
    for &f in fractions {
        if !(f > 0.0 && f < 1.0) {
            return Err(CurveError::BadFractions {
                why: "fractions must lie strictly between 0 and 1",
            });
        }
    }
    if fractions.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CurveError::BadFractions {
            why: "fractions must be strictly ascending",
        });
    }
    if models.is_empty() {
        return Err(CurveError::NoModels);
    }

    let mut points = Vec::with_capacity(fractions.len() * models.len());
    for &fraction in fractions {
        let spec = AssembleSpec {
            train_fraction: fraction,
            ..*base
        };
        let assembled = assemble(unsw, kdd, map, &spec)
            .map_err(|source| CurveError::Assemble { fraction, source })?;
        for params in models {
            let kind = params.kind();
            let model = params
                .fit(&assembled.train)
                .map_err(|source| CurveError::Train {
                    fraction,
                    kind,
                    source,
                })?;
            let predicted = model
                .predict(&assembled.test)
                .map_err(|source| CurveError::Predict {
                    fraction,
                    kind,
                    source,
                })?;
            let cm = confusion(&predicted, assembled.test.labels()).map_err(|source| {
                CurveError::Metrics {
                    fraction,
                    kind,
                    source,
                }
            })?;
            let report = metrics(&cm).map_err(|source| CurveError::Metrics {
                fraction,
                kind,
                source,
            })?;
            points.push(CurvePoint {
                fraction,
                kind,
                train_rows: assembled.train.n_samples(),
                test_rows: assembled.test.n_samples(),
                metrics: report,
            });
        }
    }
    Ok(points)
}

#[derive(Clone, Debug, PartialEq)]
pub enum CurveError {
    BadFractions { why: &'static str },
    NoModels,
    Assemble { fraction: f64, source: AssembleError },
    Train { fraction: f64, kind: ModelKind, source: TrainError },
    Predict { fraction: f64, kind: ModelKind, source: PredictError },
    Metrics { fraction: f64, kind: ModelKind, source: MetricsError },
}

impl fmt::Display for CurveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveError::BadFractions { why } => write!(f, "bad fraction list: {why}"),
            CurveError::NoModels => write!(f, "at least one model is required"),
            CurveError::Assemble { fraction, source } => {
                write!(f, "assembly at fraction {fraction}: {source}")
            }
            CurveError::Train {
                fraction,
                kind,
                source,
            } => write!(f, "{kind} at fraction {fraction}: {source}"),
            CurveError::Predict {
                fraction,
                kind,
                source,
            } => write!(f, "{kind} prediction at fraction {fraction}: {source}"),
            CurveError::Metrics {
                fraction,
                kind,
                source,
            } => write!(f, "{kind} scoring at fraction {fraction}: {source}"),
        }
    }
}

impl core::error::Error for CurveError {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            CurveError::BadFractions { .. } | CurveError::NoModels => None,
            CurveError::Assemble { source, .. } => Some(source),
            CurveError::Train { source, .. } => Some(source),
            CurveError::Predict { source, .. } => Some(source),
            CurveError::Metrics { source, .. } => Some(source),
        }
    }
}
