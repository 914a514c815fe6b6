//! Confusion counts and the derived scores.
//!
//! Malicious is the positive class. Degenerate denominators (no positive
//! predictions, no positive rows, or both) yield 0.0 for the affected
//! score and set the `degenerate` flag instead of dividing by zero.

use core::fmt;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub true_pos: usize,
    pub false_pos: usize,
    pub false_neg: usize,
    pub true_neg: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.true_pos + self.false_pos + self.false_neg + self.true_neg
    }
}

/// Tallies predictions against reference labels.
pub fn confusion(predicted: &[u8], actual: &[u8]) -> Result<ConfusionMatrix, MetricsError> {
    if predicted.len() != actual.len() {
        return Err(MetricsError::LengthMismatch {
            predicted: predicted.len(),
            actual: actual.len(),
        });
    }
    if predicted.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    let mut cm = ConfusionMatrix::default();
    for (&p, &y) in predicted.iter().zip(actual) {
        match (p != 0, y != 0) {
            (true, true) => cm.true_pos += 1,
            (true, false) => cm.false_pos += 1,
            (false, true) => cm.false_neg += 1,
            (false, false) => cm.true_neg += 1,
        }
    }
    Ok(cm)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricsReport {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// True when any score above was zeroed for lack of a denominator.
    pub degenerate: bool,
}

/// Accuracy, precision, recall, and F1 from confusion counts.
pub fn metrics(cm: &ConfusionMatrix) -> Result<MetricsReport, MetricsError> {
    let total = cm.total();
    if total == 0 {
        return Err(MetricsError::EmptyInput);
    }
    let tp = cm.true_pos as f64;
    let mut degenerate = false;
    let mut ratio = |num: f64, denom: f64| {
        if denom == 0.0 {
            degenerate = true;
            0.0
        } else {
            num / denom
        }
    };

    let accuracy = (cm.true_pos + cm.true_neg) as f64 / total as f64;
    let precision = ratio(tp, (cm.true_pos + cm.false_pos) as f64);
    let recall = ratio(tp, (cm.true_pos + cm.false_neg) as f64);
    let f1 = ratio(2.0 * precision * recall, precision + recall);
    Ok(MetricsReport {
        accuracy,
        precision,
        recall,
        f1,
        degenerate,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricsError {
    LengthMismatch { predicted: usize, actual: usize },
    EmptyInput,
}

impl fmt::Display for MetricsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricsError::LengthMismatch { predicted, actual } => write!(
                f,
                "{predicted} predictions against {actual} reference labels"
            ),
            MetricsError::EmptyInput => write!(f, "no rows to score"),
        }
    }
}

impl core::error::Error for MetricsError {}
