//! Synthetic minority oversampling.
//!
//! New minority rows are drawn as `s = x + g * (nn - x)` where `x` is a
//! random minority row, `nn` one of its `k_neighbors` nearest minority
//! rows (Euclidean), and `g` uniform in [0, 1). Originals are preserved
//! verbatim ahead of the synthetics, and the draw sequence per synthetic
//! row is fixed (base row, neighbor choice, gap), so output depends only on
//! the input and the seed.

use alloc::vec::Vec;
use core::fmt;

use crate::data::class_counts;
use crate::matrix::FeatureMatrix;
use crate::rng::Stream;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmoteConfig {
    /// Neighborhood size; must satisfy `1 <= k_neighbors <= minority - 1`.
    pub k_neighbors: usize,
    pub seed: u64,
}

impl Default for SmoteConfig {
    fn default() -> Self {
        SmoteConfig {
            k_neighbors: 5,
            seed: 0,
        }
    }
}

/// Balances the classes by appending synthetic minority rows until the
/// counts match. Already balanced input is returned unchanged.
pub fn smote(m: &FeatureMatrix, cfg: &SmoteConfig) -> Result<FeatureMatrix, SmoteError> {
    let (benign, malicious) = class_counts(m.labels());
    if benign == malicious {
        return Ok(m.clone());
    }
    let minority_label: u8 = u8::from(malicious < benign);
    let minority_count = benign.min(malicious);
    let majority_count = benign.max(malicious);

    if minority_count < 2 {
        return Err(SmoteError::MinorityTooSmall {
            count: minority_count,
        });
    }
    if cfg.k_neighbors == 0 {
        return Err(SmoteError::ZeroNeighbors);
    }
    if cfg.k_neighbors > minority_count - 1 {
        return Err(SmoteError::TooFewMinority {
            k_neighbors: cfg.k_neighbors,
            minority: minority_count,
        });
    }

    let minority: Vec<usize> = m
        .labels()
        .iter()
        .enumerate()
        .filter(|(_, &l)| l == minority_label)
        .map(|(i, _)| i)
        .collect();

    let neighbors = minority_neighbors(m, &minority, cfg.k_neighbors);

    let needed = majority_count - minority_count;
    let mut stream = Stream::new(cfg.seed);
    let width = m.n_features();

    let mut values = Vec::with_capacity((m.n_samples() + needed) * width);
    values.extend_from_slice(m.values());
    let mut labels = Vec::with_capacity(m.n_samples() + needed);
    labels.extend_from_slice(m.labels());

    for _ in 0..needed {
        let base = stream.below(minority.len());
        let pick = stream.below(cfg.k_neighbors);
        let gap = stream.unit_f64();
        let x = m.row(minority[base]);
        let nn = m.row(minority[neighbors[base][pick]]);
        for j in 0..width {
            values.push(x[j] + gap * (nn[j] - x[j]));
        }
        labels.push(minority_label);
    }

    FeatureMatrix::new(values, m.feature_names().to_vec(), labels)
        .map_err(|_| SmoteError::NonFiniteInterpolation)
}

/// For each minority row, the positions (into `minority`) of its `k`
/// nearest minority rows, self excluded. Ties break on the lower minority
/// position, so the neighbor lists are fully deterministic.
fn minority_neighbors(m: &FeatureMatrix, minority: &[usize], k: usize) -> Vec<Vec<usize>> {
    let n = minority.len();
    let mut result = Vec::with_capacity(n);
    let mut scratch: Vec<(f64, usize)> = Vec::with_capacity(n - 1);
    for (a, &row_a) in minority.iter().enumerate() {
        scratch.clear();
        let xa = m.row(row_a);
        for (b, &row_b) in minority.iter().enumerate() {
            if a == b {
                continue;
            }
            let xb = m.row(row_b);
            let mut d2 = 0.0;
            for j in 0..xa.len() {
                let d = xa[j] - xb[j];
                d2 += d * d;
            }
            scratch.push((d2, b));
        }
        let order = |x: &(f64, usize), y: &(f64, usize)| {
            x.0.partial_cmp(&y.0)
                .expect("finite distances")
                .then(x.1.cmp(&y.1))
        };
        if k < scratch.len() {
            scratch.select_nth_unstable_by(k - 1, order);
        }
        scratch[..k].sort_unstable_by(order);
        result.push(scratch[..k].iter().map(|&(_, b)| b).collect());
    }
    result
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SmoteError {
    MinorityTooSmall { count: usize },
    ZeroNeighbors,
    TooFewMinority { k_neighbors: usize, minority: usize },
    NonFiniteInterpolation,
}

impl fmt::Display for SmoteError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SmoteError::MinorityTooSmall { count } => {
                write!(f, "oversampling needs at least 2 minority rows, got {count}")
            }
            SmoteError::ZeroNeighbors => write!(f, "k_neighbors must be at least 1"),
            SmoteError::TooFewMinority {
                k_neighbors,
                minority,
            } => write!(
                f,
                "k_neighbors = {k_neighbors} exceeds minority size - 1 = {}",
                minority - 1
            ),
            SmoteError::NonFiniteInterpolation => {
                write!(f, "interpolation produced a non-finite value")
            }
        }
    }
}

impl core::error::Error for SmoteError {}
