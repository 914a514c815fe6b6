//! Scoring: confusion counts, the four headline metrics, and learning
//! curves over the training fraction.

mod curve;
mod metrics;

pub use curve::{learning_curve, CurveError, CurvePoint};
pub use metrics::{confusion, metrics, ConfusionMatrix, MetricsError, MetricsReport};
