//! Second-order gradient boosting for the logistic objective.
//!
//! Each round fits a regression tree to the current gradient/hessian
//! pairs (g = p - y, h = p(1 - p)), choosing splits by the regularized
//! gain
//!
//!   0.5 * (GL^2/(HL+l2) + GR^2/(HR+l2) - GP^2/(HP+l2))
//!
//! and only when that gain is strictly positive. Leaves carry the raw
//! Newton step -G/(H+l2); the learning rate scales them at prediction
//! time. Fitting is deterministic, there is no row or feature sampling.

use alloc::vec;
use alloc::vec::Vec;

use crate::fmath;
use crate::matrix::FeatureMatrix;
use crate::model::{check_width, tree_output, PredictError, TrainError, TreeNode};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GbmConfig {
    pub n_estimators: usize,
    pub max_depth: usize,
    pub learning_rate: f64,
    /// L2 penalty on leaf weights, the lambda in the gain formula.
    pub l2: f64,
    /// Accepted for interface symmetry with the sampled models; boosting
    /// itself is deterministic and never reads it.
    pub seed: u64,
}

impl Default for GbmConfig {
    fn default() -> Self {
        GbmConfig {
            n_estimators: 100,
            max_depth: 3,
            learning_rate: 0.1,
            l2: 1.0,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GbmModel {
    pub trees: Vec<Vec<TreeNode>>,
    /// Log-odds of the positive class in the training data; exactly 0.0
    /// on balanced input.
    pub base_score: f64,
    pub learning_rate: f64,
    pub n_features: usize,
}

impl GbmModel {
    pub fn fit(m: &FeatureMatrix, cfg: &GbmConfig) -> Result<GbmModel, TrainError> {
        if m.n_samples() == 0 {
            return Err(TrainError::EmptyInput);
        }
        let positives = m.labels().iter().filter(|&&l| l == 1).count();
        let negatives = m.n_samples() - positives;
        if positives == 0 || negatives == 0 {
            return Err(TrainError::SingleClass);
        }
        let base_score = fmath::ln(positives as f64 / negatives as f64);

        let n = m.n_samples();
        let mut margins = vec![base_score; n];
        let mut g = vec![0.0; n];
        let mut h = vec![0.0; n];
        let mut trees = Vec::with_capacity(cfg.n_estimators);

        for _ in 0..cfg.n_estimators {
            for i in 0..n {
                let p = fmath::sigmoid(margins[i]);
                g[i] = p - f64::from(m.labels()[i]);
                h[i] = p * (1.0 - p);
            }
            let nodes = grow_round(m, &g, &h, cfg, &mut margins);
            trees.push(nodes);
        }

        Ok(GbmModel {
            trees,
            base_score,
            learning_rate: cfg.learning_rate,
            n_features: m.n_features(),
        })
    }

    fn margins(&self, m: &FeatureMatrix) -> Result<Vec<f64>, PredictError> {
        check_width(self.n_features, m)?;
        Ok((0..m.n_samples())
            .map(|r| {
                let row = m.row(r);
                let sum: f64 = self.trees.iter().map(|t| tree_output(t, row)).sum();
                self.base_score + self.learning_rate * sum
            })
            .collect())
    }

    pub fn predict_scores(&self, m: &FeatureMatrix) -> Result<Vec<f64>, PredictError> {
        Ok(self.margins(m)?.into_iter().map(fmath::sigmoid).collect())
    }

    /// Malicious at score 0.5 or above.
    pub fn predict(&self, m: &FeatureMatrix) -> Result<Vec<u8>, PredictError> {
        Ok(self
            .predict_scores(m)?
            .into_iter()
            .map(|s| u8::from(s >= 0.5))
            .collect())
    }

    /// Mean logistic loss on `m` after 0, 1, ... up to all rounds. Entry
    /// zero is the loss of the bare base score. Computed from raw margins
    /// so saturation cannot wash it out.
    pub fn staged_log_loss(&self, m: &FeatureMatrix) -> Result<Vec<f64>, PredictError> {
        check_width(self.n_features, m)?;
        let n = m.n_samples();
        let mut margins = vec![self.base_score; n];
        let mut out = Vec::with_capacity(self.trees.len() + 1);
        out.push(mean_log_loss(&margins, m.labels()));
        for nodes in &self.trees {
            for (r, margin) in margins.iter_mut().enumerate() {
                *margin += self.learning_rate * tree_output(nodes, m.row(r));
            }
            out.push(mean_log_loss(&margins, m.labels()));
        }
        Ok(out)
    }
}

fn mean_log_loss(margins: &[f64], labels: &[u8]) -> f64 {
    let total: f64 = margins
        .iter()
        .zip(labels)
        .map(|(&s, &y)| fmath::log_loss_raw(s, f64::from(y)))
        .sum();
    total / margins.len() as f64
}

struct Work {
    rows: Vec<usize>,
    depth: usize,
    slot: usize,
}

/// Grows one boosting round and folds its scaled leaf values into the
/// running margins.
fn grow_round(
    m: &FeatureMatrix,
    g: &[f64],
    h: &[f64],
    cfg: &GbmConfig,
    margins: &mut [f64],
) -> Vec<TreeNode> {
    let mut nodes = vec![TreeNode::leaf(0.0)];
    let mut stack = vec![Work {
        rows: (0..m.n_samples()).collect(),
        depth: 0,
        slot: 0,
    }];

    while let Some(work) = stack.pop() {
        let g_sum: f64 = work.rows.iter().map(|&r| g[r]).sum();
        let h_sum: f64 = work.rows.iter().map(|&r| h[r]).sum();

        let found = if work.depth >= cfg.max_depth || work.rows.len() < 2 {
            None
        } else {
            find_split(m, &work.rows, g, h, g_sum, h_sum, cfg.l2)
        };

        match found {
            None => {
                let weight = -g_sum / (h_sum + cfg.l2);
                nodes[work.slot] = TreeNode::leaf(weight);
                for &r in &work.rows {
                    margins[r] += cfg.learning_rate * weight;
                }
            }
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

/// Positive-gain split with the best regularized gain, features ascending,
/// thresholds ascending, strictly-greater replacement.
fn find_split(
    m: &FeatureMatrix,
    rows: &[usize],
    g: &[f64],
    h: &[f64],
    g_sum: f64,
    h_sum: f64,
    l2: f64,
) -> Option<(usize, f64)> {
    let parent_term = g_sum * g_sum / (h_sum + l2);
    let mut best: Option<(f64, usize, f64)> = None;

    let mut pairs: Vec<(f64, f64, f64)> = Vec::with_capacity(rows.len());
    for feature in 0..m.n_features() {
        pairs.clear();
        pairs.extend(rows.iter().map(|&r| (m.value(r, feature), g[r], h[r])));
        pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));

        let mut gl = 0.0;
        let mut hl = 0.0;
        let mut i = 0;
        while i < pairs.len() {
            let value = pairs[i].0;
            while i < pairs.len() && pairs[i].0 == value {
                gl += pairs[i].1;
                hl += pairs[i].2;
                i += 1;
            }
            if i == pairs.len() {
                break;
            }
            let gr = g_sum - gl;
            let hr = h_sum - hl;
            let gain = 0.5 * (gl * gl / (hl + l2) + gr * gr / (hr + l2) - parent_term);
            if gain <= 0.0 {
                continue;
            }
            let next = pairs[i].0;
            let mut threshold = value + (next - value) * 0.5;
            if threshold >= next {
                threshold = value;
            }
            let better = match best {
                None => true,
                Some((best_gain, _, _)) => gain > best_gain,
            };
            if better {
                best = Some((gain, feature, threshold));
            }
        }
    }
    best.map(|(_, feature, threshold)| (feature, threshold))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Stream;
    use alloc::format;
    use alloc::string::String;

    fn matrix(rows: &[(&[f64], u8)]) -> FeatureMatrix {
        let width = rows[0].0.len();
        let names: Vec<String> = (0..width).map(|i| format!("x{i}")).collect();
        let mut values = Vec::new();
        let mut labels = Vec::new();
        for (row, label) in rows {
            values.extend_from_slice(row);
            labels.push(*label);
        }
        FeatureMatrix::new(values, names, labels).unwrap()
    }

    fn random_matrix(stream: &mut Stream, n: usize, width: usize) -> FeatureMatrix {
        let names: Vec<String> = (0..width).map(|i| format!("x{i}")).collect();
        let mut values = Vec::with_capacity(n * width);
        let mut labels = Vec::with_capacity(n);
        for i in 0..n {
            for _ in 0..width {
                values.push(stream.unit_f64() * 4.0 - 2.0);
            }
            // force both classes, then randomize the rest
            labels.push(if i < 2 { i as u8 } else { stream.below(2) as u8 });
        }
        FeatureMatrix::new(values, names, labels).unwrap()
    }

    #[test]
    fn balanced_input_has_exactly_zero_base_score() {
        let m = matrix(&[(&[0.0], 0), (&[1.0], 1), (&[2.0], 0), (&[3.0], 1)]);
        let model = GbmModel::fit(&m, &GbmConfig::default()).unwrap();
        assert_eq!(model.base_score, 0.0);
    }

    #[test]
    fn skewed_input_has_log_odds_base_score() {
        let m = matrix(&[(&[0.0], 1), (&[1.0], 1), (&[2.0], 1), (&[3.0], 0)]);
        let model = GbmModel::fit(&m, &GbmConfig::default()).unwrap();
        assert!((model.base_score - fmath::ln(3.0)).abs() < 1e-15);
    }

    #[test]
    fn training_loss_never_increases() {
        let mut stream = Stream::new(606);
        for case in 0..5 {
            let m = random_matrix(&mut stream, 80, 3);
            let cfg = GbmConfig {
                n_estimators: 40,
                ..GbmConfig::default()
            };
            let model = GbmModel::fit(&m, &cfg).unwrap();
            let losses = model.staged_log_loss(&m).unwrap();
            assert_eq!(losses.len(), 41);
            for w in losses.windows(2) {
                assert!(
                    w[1] <= w[0] + 1e-9,
                    "case {case}: loss rose from {} to {}",
                    w[0],
                    w[1]
                );
            }
        }
    }

    #[test]
    fn separable_data_is_classified_perfectly() {
        let m = matrix(&[
            (&[0.1], 0),
            (&[0.4], 0),
            (&[0.9], 0),
            (&[3.1], 1),
            (&[3.5], 1),
            (&[4.0], 1),
        ]);
        let model = GbmModel::fit(&m, &GbmConfig::default()).unwrap();
        assert_eq!(&model.predict(&m).unwrap(), m.labels());
    }

    #[test]
    fn noisy_parity_pattern_is_learned() {
        // XOR over jittered cluster centers: needs interaction depth
        let mut stream = Stream::new(12);
        let mut rows: Vec<(Vec<f64>, u8)> = Vec::new();
        for i in 0..80 {
            let a = i % 2;
            let b = (i / 2) % 2;
            let x = a as f64 * 5.0 + stream.unit_f64();
            let y = b as f64 * 5.0 + stream.unit_f64();
            rows.push((vec![x, y], (a ^ b) as u8));
        }
        let borrowed: Vec<(&[f64], u8)> = rows.iter().map(|(v, l)| (v.as_slice(), *l)).collect();
        let m = matrix(&borrowed);
        let model = GbmModel::fit(&m, &GbmConfig::default()).unwrap();
        assert_eq!(&model.predict(&m).unwrap(), m.labels());
    }

    #[test]
    fn single_class_is_rejected() {
        let m = matrix(&[(&[0.0], 1), (&[1.0], 1)]);
        assert_eq!(
            GbmModel::fit(&m, &GbmConfig::default()),
            Err(TrainError::SingleClass)
        );
    }

    #[test]
    fn fitting_is_deterministic() {
        let mut stream = Stream::new(3);
        let m = random_matrix(&mut stream, 60, 4);
        let cfg = GbmConfig {
            n_estimators: 15,
            ..GbmConfig::default()
        };
        let a = GbmModel::fit(&m, &cfg).unwrap();
        let b = GbmModel::fit(&m, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_rounds_predicts_from_base_score_alone() {
        let m = matrix(&[(&[0.0], 1), (&[1.0], 1), (&[2.0], 1), (&[3.0], 0)]);
        let cfg = GbmConfig {
            n_estimators: 0,
            ..GbmConfig::default()
        };
        let model = GbmModel::fit(&m, &cfg).unwrap();
        let scores = model.predict_scores(&m).unwrap();
        let expected = fmath::sigmoid(fmath::ln(3.0));
        for s in scores {
            assert!((s - expected).abs() < 1e-15);
        }
        // scores above one half: everything is called malicious
        assert_eq!(model.predict(&m).unwrap(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn decision_rule_includes_the_boundary() {
        // an exactly balanced two-point dataset with zero rounds sits at
        // score 0.5 and must be called malicious
        let m = matrix(&[(&[0.0], 0), (&[1.0], 1)]);
        let cfg = GbmConfig {
            n_estimators: 0,
            ..GbmConfig::default()
        };
        let model = GbmModel::fit(&m, &cfg).unwrap();
        assert_eq!(model.predict_scores(&m).unwrap(), vec![0.5, 0.5]);
        assert_eq!(model.predict(&m).unwrap(), vec![1, 1]);
    }
}
