//! Bagged Gini trees with per-node feature subsampling.

use alloc::vec::Vec;

use crate::fmath;
use crate::matrix::FeatureMatrix;
use crate::model::tree::{grow, GrowConfig};
use crate::model::{check_width, tree_output, PredictError, TrainError, TreeNode};
use crate::rng::{derive_seed_indexed, Stream};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ForestConfig {
    pub n_estimators: usize,
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
    /// Candidate features per node; None picks `ceil(sqrt(width))`.
    pub features_per_split: Option<usize>,
    /// Draw each tree's training set with replacement. Off, every tree
    /// sees the full input.
    pub bootstrap: bool,
    pub seed: u64,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig {
            n_estimators: 100,
            max_depth: None,
            min_samples_leaf: 1,
            features_per_split: None,
            bootstrap: true,
            seed: 0,
        }
    }
}

/// A majority-vote ensemble. Member trees keep probability leaves; each
/// tree votes malicious when its leaf fraction exceeds one half, and the
/// ensemble score is the fraction of malicious votes.
#[derive(Clone, Debug, PartialEq)]
pub struct ForestModel {
    pub trees: Vec<Vec<TreeNode>>,
    pub n_features: usize,
}

impl ForestModel {
    pub fn fit(m: &FeatureMatrix, cfg: &ForestConfig) -> Result<ForestModel, TrainError> {
        if m.n_samples() == 0 {
            return Err(TrainError::EmptyInput);
        }
        if cfg.n_estimators == 0 {
            return Err(TrainError::InvalidConfig {
                what: "n_estimators must be at least 1",
            });
        }
        let width = m.n_features();
        let per_split = cfg
            .features_per_split
            .unwrap_or_else(|| fmath::ceil(fmath::sqrt(width as f64)) as usize)
            .clamp(1, width.max(1));
        let grow_cfg = GrowConfig {
            max_depth: cfg.max_depth,
            min_samples_leaf: cfg.min_samples_leaf,
            features_per_split: per_split,
        };

        let n = m.n_samples();
        let mut trees = Vec::with_capacity(cfg.n_estimators);
        for t in 0..cfg.n_estimators {
            let mut stream = Stream::new(derive_seed_indexed(
                cfg.seed,
                "forest.tree",
                t as u64,
            ));
            let rows: Vec<usize> = if cfg.bootstrap {
                (0..n).map(|_| stream.below(n)).collect()
            } else {
                (0..n).collect()
            };
            trees.push(grow(m, rows, &grow_cfg, Some(&mut stream)));
        }
        Ok(ForestModel {
            trees,
            n_features: width,
        })
    }

    pub fn predict_scores(&self, m: &FeatureMatrix) -> Result<Vec<f64>, PredictError> {
        check_width(self.n_features, m)?;
        let total = self.trees.len() as f64;
        Ok((0..m.n_samples())
            .map(|r| {
                let row = m.row(r);
                let votes = self
                    .trees
                    .iter()
                    .filter(|nodes| tree_output(nodes, row) > 0.5)
                    .count();
                votes as f64 / total
            })
            .collect())
    }

    /// Malicious when more than half the trees vote malicious.
    pub fn predict(&self, m: &FeatureMatrix) -> Result<Vec<u8>, PredictError> {
        Ok(self
            .predict_scores(m)?
            .into_iter()
            .map(|s| u8::from(s > 0.5))
            .collect())
    }
}
