//! Stratified subsampling for capped experiment sizes.

use alloc::vec::Vec;
use core::fmt;

use crate::rng::Stream;

/// Picks `target` row indices preserving the class ratio of `labels`.
///
/// Per-class quotas come from largest-remainder rounding of the exact
/// proportional shares, so the quotas always sum to `target` and each
/// class with at least one row keeps representation whenever its exact
/// share rounds above zero. Rows within a class are chosen by seeded
/// shuffle. The returned indices are sorted ascending.
pub fn stratified_sample_indices(
    labels: &[u8],
    target: usize,
    seed: u64,
) -> Result<Vec<usize>, SampleError> {
    if labels.is_empty() {
        return Err(SampleError::EmptyInput);
    }
    if target == 0 || target > labels.len() {
        return Err(SampleError::TargetRange {
            target,
            available: labels.len(),
        });
    }
    if target == labels.len() {
        return Ok((0..labels.len()).collect());
    }

    let mut per_class: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (i, &l) in labels.iter().enumerate() {
        per_class[usize::from(l)].push(i);
    }

    // Largest-remainder allocation of `target` across the two classes.
    let n = labels.len();
    let mut quota = [0usize; 2];
    let mut remainder = [0.0f64; 2];
    let mut assigned = 0;
    for c in 0..2 {
        let exact = target as f64 * per_class[c].len() as f64 / n as f64;
        quota[c] = exact as usize; // floor: exact >= 0
        remainder[c] = exact - quota[c] as f64;
        assigned += quota[c];
    }
    while assigned < target {
        let c = if remainder[0] >= remainder[1] { 0 } else { 1 };
        quota[c] += 1;
        remainder[c] = -1.0;
        assigned += 1;
    }

    let mut stream = Stream::new(seed);
    let mut picked = Vec::with_capacity(target);
    for c in 0..2 {
        if quota[c] > per_class[c].len() {
            return Err(SampleError::ClassExhausted {
                class: c as u8,
                quota: quota[c],
                available: per_class[c].len(),
            });
        }
        stream.shuffle(&mut per_class[c]);
        picked.extend_from_slice(&per_class[c][..quota[c]]);
    }
    picked.sort_unstable();
    Ok(picked)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SampleError {
    EmptyInput,
    TargetRange { target: usize, available: usize },
    ClassExhausted { class: u8, quota: usize, available: usize },
}

impl fmt::Display for SampleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SampleError::EmptyInput => write!(f, "cannot sample from an empty label set"),
            SampleError::TargetRange { target, available } => {
                write!(f, "sample size {target} outside 1..={available}")
            }
            SampleError::ClassExhausted {
                class,
                quota,
                available,
            } => write!(
                f,
                "class {class} quota {quota} exceeds its {available} rows"
            ),
        }
    }
}

impl core::error::Error for SampleError {}
