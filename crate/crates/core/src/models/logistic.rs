//! Multinomial (softmax) logistic regression with an L2 penalty on the
//! weights, trained by full-batch gradient descent.
//!
//! The objective is
//!
//! ```text
//! L(W, b) = -(1/n) sum_i log softmax(W x_i + b)[y_i] + (lambda/2) ||W||^2
//! ```
//!
//! Each epoch takes a gradient step on the cross-entropy term followed by the
//! exact proximal step for the penalty, `W <- W / (1 + lr * lambda)`. The
//! stationary points are those of `L`, and the update stays stable for any
//! `lambda`. The bias is not penalized.

use serde::{Deserialize, Serialize};

use super::{argmax, check_training_data, log_sum_exp, TrainConfig};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticRegressionParams {
    /// `classes x dim`
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
    pub l2_lambda: f64,
    /// Epochs actually run before stopping.
    pub epochs_run: usize,
    /// Regularized training loss at the last evaluated epoch.
    pub final_loss: f64,
}

impl LogisticRegressionParams {
    pub fn zeros(n_classes: usize, dim: usize, l2_lambda: f64) -> Self {
        Self {
            weights: vec![vec![0.0; dim]; n_classes],
            bias: vec![0.0; n_classes],
            l2_lambda,
            epochs_run: 0,
            final_loss: f64::NAN,
        }
    }

    pub fn n_classes(&self) -> usize {
        self.bias.len()
    }

    pub fn dim(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }

    pub fn logits(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(logits(&self.weights, &self.bias, x))
    }

    pub fn predict_proba(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(softmax(&self.logits(x)?))
    }

    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        Ok(argmax(&self.logits(x)?))
    }
}

fn logits(w: &[Vec<f64>], b: &[f64], x: &[f64]) -> Vec<f64> {
    w.iter()
        .zip(b)
        .map(|(row, &bk)| bk + row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>())
        .collect()
}

pub fn softmax(z: &[f64]) -> Vec<f64> {
    let norm = log_sum_exp(z);
    z.iter().map(|v| (v - norm).exp()).collect()
}

/// Regularized loss and its analytic gradient at `(weights, bias)`.
pub struct LossGradient {
    pub loss: f64,
    /// Mean cross-entropy without the penalty.
    pub data_loss: f64,
    pub grad_weights: Vec<Vec<f64>>,
    pub grad_bias: Vec<f64>,
}

pub fn loss_and_gradient<X: AsRef<[f64]>>(
    weights: &[Vec<f64>],
    bias: &[f64],
    x: &[X],
    y: &[usize],
    l2_lambda: f64,
) -> LossGradient {
    let (data_loss, mut grad_weights, grad_bias) = data_term(weights, bias, x, y);
    let mut penalty = 0.0;
    for (g_row, w_row) in grad_weights.iter_mut().zip(weights) {
        for (g, &w) in g_row.iter_mut().zip(w_row) {
            *g += l2_lambda * w;
            penalty += w * w;
        }
    }
    LossGradient {
        loss: data_loss + 0.5 * l2_lambda * penalty,
        data_loss,
        grad_weights,
        grad_bias,
    }
}

fn data_term<X: AsRef<[f64]>>(
    weights: &[Vec<f64>],
    bias: &[f64],
    x: &[X],
    y: &[usize],
) -> (f64, Vec<Vec<f64>>, Vec<f64>) {
    let k = bias.len();
    let dim = weights.first().map_or(0, Vec::len);
    let n = x.len() as f64;
    let mut loss = 0.0;
    let mut gw = vec![vec![0.0; dim]; k];
    let mut gb = vec![0.0; k];
    for (row, &yi) in x.iter().zip(y) {
        let row = row.as_ref();
        let z = logits(weights, bias, row);
        let norm = log_sum_exp(&z);
        loss += norm - z[yi];
        for c in 0..k {
            let resid = (z[c] - norm).exp() - if c == yi { 1.0 } else { 0.0 };
            gb[c] += resid;
            for (g, &xj) in gw[c].iter_mut().zip(row) {
                *g += resid * xj;
            }
        }
    }
    if n > 0.0 {
        loss /= n;
        gb.iter_mut().for_each(|g| *g /= n);
        gw.iter_mut().flatten().for_each(|g| *g /= n);
    }
    (loss, gw, gb)
}

/// Mean cross-entropy of `params` on `(x, y)`, penalty excluded.
pub fn data_loss<X: AsRef<[f64]>>(params: &LogisticRegressionParams, x: &[X], y: &[usize]) -> f64 {
    data_term(&params.weights, &params.bias, x, y).0
}

/// Trains from zero weights. Deterministic: the seed is not consumed here.
pub fn lg_fit<X: AsRef<[f64]>>(
    x: &[X],
    y: &[usize],
    n_classes: usize,
    config: &TrainConfig,
    l2_lambda: f64,
) -> Result<LogisticRegressionParams> {
    let dim = check_training_data(x, y, n_classes)?;
    config.validate()?;
    if !(l2_lambda.is_finite() && l2_lambda >= 0.0) {
        return Err(Error::invalid(
            "l2_lambda must be a non-negative finite number",
        ));
    }

    let mut p = LogisticRegressionParams::zeros(n_classes, dim, l2_lambda);
    let lr = config.learning_rate;
    let shrink = 1.0 / (1.0 + lr * l2_lambda);
    let mut prev: Option<f64> = None;

    for epoch in 0..config.epochs {
        let (data_loss, gw, gb) = data_term(&p.weights, &p.bias, x, y);
        let penalty: f64 = p.weights.iter().flatten().map(|w| w * w).sum();
        let loss = data_loss + 0.5 * l2_lambda * penalty;
        if !loss.is_finite() {
            return Err(Error::Diverged { epoch });
        }
        p.final_loss = loss;
        if prev.is_some_and(|prev_loss| (prev_loss - loss).abs() < config.tolerance) {
            break;
        }
        prev = Some(loss);

        for (w_row, g_row) in p.weights.iter_mut().zip(&gw) {
            for (w, g) in w_row.iter_mut().zip(g_row) {
                *w = (*w - lr * g) * shrink;
            }
        }
        for (b, g) in p.bias.iter_mut().zip(&gb) {
            *b -= lr * g;
        }
        p.epochs_run = epoch + 1;
    }

    let check = p.weights.iter().flatten().chain(&p.bias);
    if check.into_iter().any(|v| !v.is_finite()) {
        return Err(Error::Diverged {
            epoch: p.epochs_run,
        });
    }
    Ok(p)
}
