//! Gini decision trees.
//!
//! The grower is iterative (explicit work stack) and fully deterministic:
//! candidate features are evaluated in ascending index order, thresholds
//! in ascending value order, and a candidate replaces the incumbent only
//! on strictly larger gain. Thresholds sit halfway between adjacent
//! distinct values; a row goes left when `value <= threshold`.
//!
//! An impure node may split at zero gain as long as both halves are
//! non-empty. Without that rule, parity-like targets (two features whose
//! XOR decides the class) stall at the root because every single split
//! has zero Gini gain on its own.

use alloc::vec;
use alloc::vec::Vec;

use crate::matrix::FeatureMatrix;
use crate::model::{check_width, tree_output, PredictError, TrainError, TreeNode};
use crate::rng::Stream;

/// Settings shared by every tree grown in this crate's Gini models.
pub(crate) struct GrowConfig {
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
    /// How many features to consider per node. When this is fewer than
    /// the matrix width a seeded permutation picks the candidates; the
    /// candidate set is widened one feature at a time if none of the
    /// first choices admits a valid split.
    pub features_per_split: usize,
}

struct Work {
    rows: Vec<usize>,
    depth: usize,
    slot: usize,
}

/// Grows one Gini tree over `rows`. Leaves hold the positive-class
/// fraction of their rows. `rng` is consumed only when a node actually
/// subsamples features, so with `features_per_split` equal to the matrix
/// width the result is independent of the stream.
pub(crate) fn grow(
    m: &FeatureMatrix,
    rows: Vec<usize>,
    cfg: &GrowConfig,
    mut rng: Option<&mut Stream>,
) -> Vec<TreeNode> {
    let mut nodes = vec![TreeNode::leaf(0.0)];
    let mut stack = vec![Work {
        rows,
        depth: 0,
        slot: 0,
    }];

    while let Some(work) = stack.pop() {
        let positives = work
            .rows
            .iter()
            .filter(|&&r| m.labels()[r] == 1)
            .count();
        let fraction = positives as f64 / work.rows.len() as f64;
        let pure = positives == 0 || positives == work.rows.len();
        let depth_capped = cfg.max_depth.is_some_and(|d| work.depth >= d);
        let too_small = work.rows.len() < 2 * cfg.min_samples_leaf || work.rows.len() < 2;

        let found = if pure || depth_capped || too_small {
            None
        } else {
            find_split(m, &work.rows, cfg, rng.as_deref_mut())
        };

        match found {
            None => nodes[work.slot] = TreeNode::leaf(fraction),
            Some((feature, threshold)) => {
                let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = work
                    .rows
                    .into_iter()
                    .partition(|&r| m.value(r, feature) <= threshold);
                let left = nodes.len();
                let right = nodes.len() + 1;
                nodes.push(TreeNode::leaf(0.0));
                nodes.push(TreeNode::leaf(0.0));
                nodes[work.slot] = TreeNode {
                    feature,
                    threshold,
                    left,
                    right,
                    leaf: false,
                    value: 0.0,
                };
                stack.push(Work {
                    rows: right_rows,
                    depth: work.depth + 1,
                    slot: right,
                });
                stack.push(Work {
                    rows: left_rows,
                    depth: work.depth + 1,
                    slot: left,
                });
            }
        }
    }
    nodes
}

/// Best `(feature, threshold)` over the candidate features, or None when
/// every candidate is constant within the node.
fn find_split(
    m: &FeatureMatrix,
    rows: &[usize],
    cfg: &GrowConfig,
    rng: Option<&mut Stream>,
) -> Option<(usize, f64)> {
    let width = m.n_features();
    let subsampling = cfg.features_per_split < width;
    let perm: Vec<usize> = match (subsampling, rng) {
        (true, Some(stream)) => {
            let mut all: Vec<usize> = (0..width).collect();
            stream.shuffle(&mut all);
            all
        }
        _ => (0..width).collect(),
    };

    let mut take = cfg.features_per_split.min(width);
    loop {
        // Candidates are re-sorted ascending so ties resolve by feature
        // index, never by permutation order.
        let mut candidates = perm[..take].to_vec();
        candidates.sort_unstable();

        let mut best: Option<(f64, usize, f64)> = None;
        for &feature in &candidates {
            if let Some((gain, threshold)) = best_threshold(m, rows, feature, cfg.min_samples_leaf)
            {
                let better = match best {
                    None => true,
                    Some((best_gain, _, _)) => gain > best_gain,
                };
                if better {
                    best = Some((gain, feature, threshold));
                }
            }
        }
        if let Some((_, feature, threshold)) = best {
            return Some((feature, threshold));
        }
        if take == width {
            return None;
        }
        take += 1;
    }
}

/// Best threshold for one feature by Gini gain, ascending threshold order,
/// strictly-greater replacement. None when the feature is constant within
/// the node or no cut satisfies `min_samples_leaf`.
fn best_threshold(
    m: &FeatureMatrix,
    rows: &[usize],
    feature: usize,
    min_samples_leaf: usize,
) -> Option<(f64, f64)> {
    let mut pairs: Vec<(f64, u8)> = rows
        .iter()
        .map(|&r| (m.value(r, feature), m.labels()[r]))
        .collect();
    pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));

    let n = pairs.len();
    let total_pos = pairs.iter().filter(|&&(_, l)| l == 1).count();
    let parent = gini(total_pos, n);

    let mut best: Option<(f64, f64)> = None;
    let mut left_n = 0usize;
    let mut left_pos = 0usize;
    let mut i = 0;
    while i < n {
        // absorb the whole run of equal values
        let value = pairs[i].0;
        while i < n && pairs[i].0 == value {
            left_pos += usize::from(pairs[i].1 == 1);
            left_n += 1;
            i += 1;
        }
        if i == n {
            break;
        }
        let right_n = n - left_n;
        if left_n < min_samples_leaf || right_n < min_samples_leaf {
            continue;
        }
        let next = pairs[i].0;
        let mut threshold = value + (next - value) * 0.5;
        if threshold >= next {
            // adjacent floats: the midpoint rounded up, fall back to the
            // lower value so `<=` still separates the two runs
            threshold = value;
        }
        let right_pos = total_pos - left_pos;
        let gain = parent
            - (left_n as f64 / n as f64) * gini(left_pos, left_n)
            - (right_n as f64 / n as f64) * gini(right_pos, right_n);
        let better = match best {
            None => true,
            Some((best_gain, _)) => gain > best_gain,
        };
        if better {
            best = Some((gain, threshold));
        }
    }
    best
}

fn gini(pos: usize, n: usize) -> f64 {
    let p = pos as f64 / n as f64;
    2.0 * p * (1.0 - p)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TreeConfig {
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
}

impl Default for TreeConfig {
    fn default() -> Self {
        TreeConfig {
            max_depth: None,
            min_samples_leaf: 1,
        }
    }
}

/// A single decision tree. Leaves are collapsed to hard class values, so
/// scores are exactly 0.0 or 1.0.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeModel {
    pub nodes: Vec<TreeNode>,
    pub n_features: usize,
}

impl TreeModel {
    pub fn fit(m: &FeatureMatrix, cfg: &TreeConfig) -> Result<TreeModel, TrainError> {
        if m.n_samples() == 0 {
            return Err(TrainError::EmptyInput);
        }
        let grow_cfg = GrowConfig {
            max_depth: cfg.max_depth,
            min_samples_leaf: cfg.min_samples_leaf,
            features_per_split: m.n_features(),
        };
        let mut nodes = grow(m, (0..m.n_samples()).collect(), &grow_cfg, None);
        for node in &mut nodes {
            if node.leaf {
                node.value = f64::from(node.value > 0.5);
            }
        }
        Ok(TreeModel {
            nodes,
            n_features: m.n_features(),
        })
    }

    pub fn predict_scores(&self, m: &FeatureMatrix) -> Result<Vec<f64>, PredictError> {
        check_width(self.n_features, m)?;
        Ok((0..m.n_samples())
            .map(|r| tree_output(&self.nodes, m.row(r)))
            .collect())
    }

    /// Malicious when the score exceeds one half.
    pub fn predict(&self, m: &FeatureMatrix) -> Result<Vec<u8>, PredictError> {
        Ok(self
            .predict_scores(m)?
            .into_iter()
            .map(|s| u8::from(s > 0.5))
            .collect())
    }
}
