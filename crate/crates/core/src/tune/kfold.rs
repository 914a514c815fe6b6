//! Stratified fold assignment for cross-validation.

use alloc::vec;
use alloc::vec::Vec;

use crate::rng::Stream;
use crate::tune::TuneError;

/// Assigns every row to one of `k` folds, keeping the class mix of each
/// fold close to the overall mix. Each class is shuffled separately and
/// dealt round-robin, so fold sizes differ by at most one per class.
/// Folds come back as sorted row indices.
pub fn stratified_kfold(labels: &[u8], k: usize, seed: u64) -> Result<Vec<Vec<usize>>, TuneError> {
    if k < 2 {
        return Err(TuneError::KTooSmall { k });
    }
    let mut per_class: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (i, &l) in labels.iter().enumerate() {
        per_class[usize::from(l)].push(i);
    }
    for (class, rows) in per_class.iter().enumerate() {
        if rows.len() < k {
            return Err(TuneError::ClassTooSmall {
                class: class as u8,
                count: rows.len(),
                k,
            });
        }
    }

    let mut stream = Stream::new(seed);
    let mut folds = vec![Vec::new(); k];
    for rows in &mut per_class {
        stream.shuffle(rows);
        for (pos, &row) in rows.iter().enumerate() {
            folds[pos % k].push(row);
        }
    }
    for fold in &mut folds {
        fold.sort_unstable();
    }
    Ok(folds)
}
