//! From-scratch classifiers over dense document vectors.
//!
//! Class ids are `0..n_classes`; every prediction breaks ties toward the
//! lowest id.

mod logistic;
mod naive_bayes;
mod oversample;
mod scaler;

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use logistic::{
    data_loss, lg_fit, loss_and_gradient, softmax, LogisticRegressionParams, LossGradient,
};
pub use naive_bayes::{nb_fit, nb_fit_with_smoothing, GaussianNbParams, DEFAULT_VAR_SMOOTHING};
pub use oversample::{oversample, oversample_indices};
pub use scaler::FeatureScaler;

use crate::{Error, Result};

/// Gradient-descent settings for logistic regression.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    /// Reserved for data-order randomization; training itself starts from
    /// zero weights and consumes no randomness.
    pub seed: u64,
    /// Stop once the loss changes by less than this between epochs.
    pub tolerance: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.1,
            epochs: 500,
            seed: 0,
            tolerance: 1e-6,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::invalid("learning_rate must be positive"));
        }
        if self.tolerance.is_nan() || self.tolerance < 0.0 {
            return Err(Error::invalid("tolerance must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelKind {
    #[serde(rename = "NB")]
    NaiveBayes,
    #[serde(rename = "LG")]
    LogisticRegression,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::NaiveBayes => "NB",
            ModelKind::LogisticRegression => "LG",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "NB" => Ok(ModelKind::NaiveBayes),
            "LG" | "LR" => Ok(ModelKind::LogisticRegression),
            _ => Err(Error::invalid(format!("unknown model `{s}`"))),
        }
    }
}

/// A trained classifier of either kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Model {
    NaiveBayes(GaussianNbParams),
    LogisticRegression(LogisticRegressionParams),
}

impl Model {
    pub fn kind(&self) -> ModelKind {
        match self {
            Model::NaiveBayes(_) => ModelKind::NaiveBayes,
            Model::LogisticRegression(_) => ModelKind::LogisticRegression,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Model::NaiveBayes(p) => p.dim(),
            Model::LogisticRegression(p) => p.dim(),
        }
    }

    pub fn n_classes(&self) -> usize {
        match self {
            Model::NaiveBayes(p) => p.n_classes(),
            Model::LogisticRegression(p) => p.n_classes(),
        }
    }

    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        match self {
            Model::NaiveBayes(p) => p.predict(x),
            Model::LogisticRegression(p) => p.predict(x),
        }
    }

    /// Class probabilities.
    pub fn predict_proba(&self, x: &[f64]) -> Result<Vec<f64>> {
        match self {
            Model::NaiveBayes(p) => Ok(p.log_posterior(x)?.into_iter().map(f64::exp).collect()),
            Model::LogisticRegression(p) => p.predict_proba(x),
        }
    }
}

/// JSON document for persisting a trained model with its context.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SavedModel {
    pub class_names: Vec<String>,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaler: Option<FeatureScaler>,
    pub model: Model,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<TrainConfig>,
}

impl SavedModel {
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let json = serde_json::to_string_pretty(self)?;
        fs::write(path, json).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let saved: SavedModel = serde_json::from_str(&text)?;
        if saved.model.dim() != saved.dim || saved.model.n_classes() != saved.class_names.len() {
            return Err(Error::invalid(format!(
                "{}: header says {} classes x {} dims, parameters disagree",
                path.display(),
                saved.class_names.len(),
                saved.dim
            )));
        }
        Ok(saved)
    }
}

/// Index of the largest value; the first one wins ties.
pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

pub(crate) fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// Validates a training set and returns its feature dimension.
pub(crate) fn check_training_data<X: AsRef<[f64]>>(
    x: &[X],
    y: &[usize],
    n_classes: usize,
) -> Result<usize> {
    if n_classes < 2 {
        return Err(Error::invalid("need at least two classes"));
    }
    let first = x
        .first()
        .ok_or(Error::EmptyInput("no training instances"))?;
    if x.len() != y.len() {
        return Err(Error::invalid(format!(
            "{} feature rows but {} labels",
            x.len(),
            y.len()
        )));
    }
    let dim = first.as_ref().len();
    if let Some(bad) = x.iter().find(|r| r.as_ref().len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.as_ref().len(),
        });
    }
    let mut seen = vec![false; n_classes];
    for &c in y {
        *seen
            .get_mut(c)
            .ok_or_else(|| Error::invalid(format!("class id {c} out of range 0..{n_classes}")))? =
            true;
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(Error::MissingClass {
            class: missing.to_string(),
        });
    }
    Ok(dim)
}
