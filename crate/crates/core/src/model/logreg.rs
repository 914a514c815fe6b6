//! L2-regularized logistic regression trained by full-batch gradient
//! descent on standardized inputs.
//!
//! The objective is the mean logistic loss plus `||w||^2 / (2 C n)`; the
//! bias is not penalized. Columns that are constant in the training data
//! standardize to zero everywhere, so their weights start at zero and
//! stay there.

use alloc::vec;
use alloc::vec::Vec;

use crate::fmath;
use crate::matrix::FeatureMatrix;
use crate::model::{check_width, PredictError, TrainError};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogRegConfig {
    /// Inverse regularization strength; larger means weaker penalty.
    pub c: f64,
    pub max_iterations: usize,
    /// Stop once the gradient's max norm falls below this.
    pub tolerance: f64,
    pub step_size: f64,
}

impl Default for LogRegConfig {
    fn default() -> Self {
        LogRegConfig {
            c: 1.0,
            max_iterations: 500,
            tolerance: 1e-6,
            step_size: 0.1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LogRegModel {
    /// Coefficients in standardized space, one per input column.
    pub weights: Vec<f64>,
    pub bias: f64,
    pub means: Vec<f64>,
    /// Population standard deviations; 0.0 marks a constant column whose
    /// standardized value is pinned to zero.
    pub stds: Vec<f64>,
}

impl LogRegModel {
    pub fn n_features(&self) -> usize {
        self.means.len()
    }

    pub fn fit(m: &FeatureMatrix, cfg: &LogRegConfig) -> Result<LogRegModel, TrainError> {
        if m.n_samples() == 0 {
            return Err(TrainError::EmptyInput);
        }
        if cfg.c <= 0.0 {
            return Err(TrainError::InvalidConfig {
                what: "c must be positive",
            });
        }
        if cfg.step_size <= 0.0 {
            return Err(TrainError::InvalidConfig {
                what: "step_size must be positive",
            });
        }
        if cfg.tolerance < 0.0 {
            return Err(TrainError::InvalidConfig {
                what: "tolerance must be non-negative",
            });
        }

        let (means, stds) = column_moments(m);
        let z = standardized(m, &means, &stds);
        let width = m.n_features();
        let mut weights = vec![0.0; width];
        let mut bias = 0.0;

        for _ in 0..cfg.max_iterations {
            let (objective, grad_w, grad_b) =
                objective_and_grad(&z, width, m.labels(), &weights, bias, cfg.c);
            if !objective.is_finite() {
                return Err(TrainError::NonFiniteObjective);
            }
            let mut grad_max = fmath::abs(grad_b);
            for &gw in &grad_w {
                let a = fmath::abs(gw);
                if a > grad_max {
                    grad_max = a;
                }
            }
            if grad_max < cfg.tolerance {
                break;
            }
            for (w, gw) in weights.iter_mut().zip(&grad_w) {
                *w -= cfg.step_size * gw;
            }
            bias -= cfg.step_size * grad_b;
        }

        Ok(LogRegModel {
            weights,
            bias,
            means,
            stds,
        })
    }

    pub fn predict_scores(&self, m: &FeatureMatrix) -> Result<Vec<f64>, PredictError> {
        check_width(self.n_features(), m)?;
        Ok((0..m.n_samples())
            .map(|r| {
                let row = m.row(r);
                let mut margin = self.bias;
                for (j, &x) in row.iter().enumerate() {
                    if self.stds[j] > 0.0 {
                        margin += self.weights[j] * (x - self.means[j]) / self.stds[j];
                    }
                }
                fmath::sigmoid(margin)
            })
            .collect())
    }

    /// Malicious at score 0.5 or above.
    pub fn predict(&self, m: &FeatureMatrix) -> Result<Vec<u8>, PredictError> {
        Ok(self
            .predict_scores(m)?
            .into_iter()
            .map(|s| u8::from(s >= 0.5))
            .collect())
    }
}

/// Objective value and analytic gradient at the given parameters, with
/// the matrix standardized exactly as `fit` would standardize it. Meant
/// for verifying the gradient against finite differences; `fit` uses the
/// same inner routine.
pub fn logreg_objective(
    m: &FeatureMatrix,
    weights: &[f64],
    bias: f64,
    c: f64,
) -> Result<(f64, Vec<f64>, f64), TrainError> {
    if m.n_samples() == 0 {
        return Err(TrainError::EmptyInput);
    }
    if weights.len() != m.n_features() {
        return Err(TrainError::InvalidConfig {
            what: "weight count must match the matrix width",
        });
    }
    if c <= 0.0 {
        return Err(TrainError::InvalidConfig {
            what: "c must be positive",
        });
    }
    let (means, stds) = column_moments(m);
    let z = standardized(m, &means, &stds);
    Ok(objective_and_grad(
        &z,
        m.n_features(),
        m.labels(),
        weights,
        bias,
        c,
    ))
}

fn column_moments(m: &FeatureMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = m.n_samples() as f64;
    let width = m.n_features();
    let mut means = vec![0.0; width];
    for r in 0..m.n_samples() {
        for (j, &v) in m.row(r).iter().enumerate() {
            means[j] += v;
        }
    }
    for mean in &mut means {
        *mean /= n;
    }
    let mut vars = vec![0.0; width];
    for r in 0..m.n_samples() {
        for (j, &v) in m.row(r).iter().enumerate() {
            let d = v - means[j];
            vars[j] += d * d;
        }
    }
    let stds = vars.iter().map(|&v| fmath::sqrt(v / n)).collect();
    (means, stds)
}

fn standardized(m: &FeatureMatrix, means: &[f64], stds: &[f64]) -> Vec<f64> {
    let width = m.n_features();
    let mut z = Vec::with_capacity(m.n_samples() * width);
    for r in 0..m.n_samples() {
        for (j, &v) in m.row(r).iter().enumerate() {
            if stds[j] > 0.0 {
                z.push((v - means[j]) / stds[j]);
            } else {
                z.push(0.0);
            }
        }
    }
    z
}

fn objective_and_grad(
    z: &[f64],
    width: usize,
    labels: &[u8],
    weights: &[f64],
    bias: f64,
    c: f64,
) -> (f64, Vec<f64>, f64) {
    let n = labels.len();
    let nf = n as f64;
    let mut loss = 0.0;
    let mut grad_w = vec![0.0; width];
    let mut grad_b = 0.0;

    for (i, &label) in labels.iter().enumerate() {
        let row = &z[i * width..(i + 1) * width];
        let mut margin = bias;
        for j in 0..width {
            margin += weights[j] * row[j];
        }
        let y = f64::from(label);
        loss += fmath::log_loss_raw(margin, y);
        let residual = fmath::sigmoid(margin) - y;
        grad_b += residual;
        for j in 0..width {
            grad_w[j] += residual * row[j];
        }
    }

    let mut objective = loss / nf;
    let ridge_scale = 1.0 / (c * nf);
    for j in 0..width {
        objective += weights[j] * weights[j] * ridge_scale * 0.5;
        grad_w[j] = grad_w[j] / nf + weights[j] * ridge_scale;
    }
    (objective, grad_w, grad_b / nf)
}
