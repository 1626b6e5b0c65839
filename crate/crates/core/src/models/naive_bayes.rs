//! Gaussian naive Bayes over dense feature vectors.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{argmax, check_training_data, log_sum_exp};
use crate::{Error, Result};

pub const DEFAULT_VAR_SMOOTHING: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianNbParams {
    pub log_priors: Vec<f64>,
    /// `classes x dim`
    pub means: Vec<Vec<f64>>,
    /// `classes x dim`, each entry at least `variance_floor`.
    pub variances: Vec<Vec<f64>>,
    pub var_smoothing: f64,
    /// `var_smoothing` times the largest per-feature variance of the
    /// training data (or `var_smoothing` itself if that variance is zero).
    pub variance_floor: f64,
}

impl GaussianNbParams {
    pub fn n_classes(&self) -> usize {
        self.log_priors.len()
    }

    pub fn dim(&self) -> usize {
        self.means.first().map_or(0, Vec::len)
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(())
    }

    /// Unnormalized log joint `log P(c) + sum_j log N(x_j; mu_cj, var_cj)`.
    pub fn joint_log_likelihood(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        Ok(self
            .log_priors
            .iter()
            .zip(self.means.iter().zip(&self.variances))
            .map(|(&prior, (mu, var))| {
                prior
                    + x.iter()
                        .zip(mu.iter().zip(var))
                        .map(|(&xj, (&m, &v))| {
                            let d = xj - m;
                            -0.5 * (2.0 * PI * v).ln() - d * d / (2.0 * v)
                        })
                        .sum::<f64>()
            })
            .collect())
    }

    /// Normalized log posteriors; they exponentiate to a distribution.
    pub fn log_posterior(&self, x: &[f64]) -> Result<Vec<f64>> {
        let jll = self.joint_log_likelihood(x)?;
        let norm = log_sum_exp(&jll);
        Ok(jll.into_iter().map(|v| v - norm).collect())
    }

    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        Ok(argmax(&self.joint_log_likelihood(x)?))
    }
}

pub fn nb_fit<X: AsRef<[f64]>>(x: &[X], y: &[usize], n_classes: usize) -> Result<GaussianNbParams> {
    nb_fit_with_smoothing(x, y, n_classes, DEFAULT_VAR_SMOOTHING)
}

/// Per-class sample means and population variances, priors from class
/// frequencies.
pub fn nb_fit_with_smoothing<X: AsRef<[f64]>>(
    x: &[X],
    y: &[usize],
    n_classes: usize,
    var_smoothing: f64,
) -> Result<GaussianNbParams> {
    let dim = check_training_data(x, y, n_classes)?;
    if var_smoothing.is_nan() || var_smoothing <= 0.0 {
        return Err(Error::invalid("var_smoothing must be positive"));
    }

    let n = x.len() as f64;
    let mut counts = vec![0usize; n_classes];
    let mut sums = vec![vec![0.0; dim]; n_classes];
    let mut total = vec![0.0; dim];
    for (row, &c) in x.iter().zip(y) {
        counts[c] += 1;
        for (j, &v) in row.as_ref().iter().enumerate() {
            sums[c][j] += v;
            total[j] += v;
        }
    }
    let means: Vec<Vec<f64>> = sums
        .into_iter()
        .zip(&counts)
        .map(|(s, &k)| s.into_iter().map(|v| v / k as f64).collect())
        .collect();
    let grand_mean: Vec<f64> = total.into_iter().map(|v| v / n).collect();

    let mut sq = vec![vec![0.0; dim]; n_classes];
    let mut grand_sq = vec![0.0; dim];
    for (row, &c) in x.iter().zip(y) {
        for (j, &v) in row.as_ref().iter().enumerate() {
            let d = v - means[c][j];
            sq[c][j] += d * d;
            let g = v - grand_mean[j];
            grand_sq[j] += g * g;
        }
    }
    let max_var = grand_sq.iter().map(|s| s / n).fold(0.0, f64::max);
    let variance_floor = if max_var > 0.0 {
        var_smoothing * max_var
    } else {
        var_smoothing
    };
    let variances = sq
        .into_iter()
        .zip(&counts)
        .map(|(s, &k)| {
            s.into_iter()
                .map(|v| (v / k as f64).max(variance_floor))
                .collect()
        })
        .collect();
    let log_priors = counts.iter().map(|&k| (k as f64 / n).ln()).collect();

    Ok(GaussianNbParams {
        log_priors,
        means,
        variances,
        var_smoothing,
        variance_floor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn ab() -> GaussianNbParams {
        nb_fit(&[[1.0], [3.0], [5.0], [7.0]], &[0, 0, 1, 1], 2).unwrap()
    }

    #[test]
    fn hand_computed_moments() {
        let p = ab();
        assert_eq!(p.means, vec![vec![2.0], vec![6.0]]);
        assert_eq!(p.variances, vec![vec![1.0], vec![1.0]]);
        assert_relative_eq!(p.log_priors[0].exp(), 0.5);
        assert_relative_eq!(p.log_priors[1].exp(), 0.5);
        // overall variance of {1,3,5,7} is 5
        assert_relative_eq!(p.variance_floor, 5e-9);
    }

    #[test]
    fn predictions_and_tie_break() {
        let p = ab();
        assert_eq!(p.predict(&[2.0]).unwrap(), 0);
        assert_eq!(p.predict(&[4.0]).unwrap(), 0);
        assert_eq!(p.predict(&[6.0]).unwrap(), 1);
    }

    #[test]
    fn constant_class_uses_floor() {
        let p = nb_fit(&[[1.0], [1.0], [4.0], [6.0]], &[0, 0, 1, 1], 2).unwrap();
        assert_eq!(p.variances[0][0], p.variance_floor);
        let lp = p.log_posterior(&[1.0]).unwrap();
        assert!(lp.iter().all(|v| v.is_finite() || *v == f64::NEG_INFINITY));
        assert_eq!(p.predict(&[1.0]).unwrap(), 0);
    }

    #[test]
    fn all_identical_data_still_finite() {
        let p = nb_fit(&[[2.0], [2.0]], &[0, 1], 2).unwrap();
        assert_eq!(p.variance_floor, DEFAULT_VAR_SMOOTHING);
        assert!(p
            .joint_log_likelihood(&[2.0])
            .unwrap()
            .iter()
            .all(|v| v.is_finite()));
    }

    #[test]
    fn duplicated_dataset_same_parameters() {
        let x = [[0.3, -1.0], [1.1, 2.0], [0.7, 0.5], [2.2, -0.4], [1.9, 1.0]];
        let y = [0, 0, 1, 1, 1];
        let a = nb_fit(&x, &y, 2).unwrap();
        let x2: Vec<_> = x
            .iter()
            .chain(&x)
            .collect::<Vec<_>>()
            .into_iter()
            .copied()
            .collect();
        let y2: Vec<_> = y.iter().chain(&y).copied().collect();
        let b = nb_fit(&x2, &y2, 2).unwrap();
        for (ra, rb) in a
            .means
            .iter()
            .chain(&a.variances)
            .zip(b.means.iter().chain(&b.variances))
        {
            for (va, vb) in ra.iter().zip(rb) {
                assert_relative_eq!(va, vb, max_relative = 1e-12);
            }
        }
        assert_relative_eq!(a.log_priors[0], b.log_priors[0], max_relative = 1e-12);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            nb_fit(&[[1.0], [2.0]], &[0, 0], 2),
            Err(Error::MissingClass { .. })
        ));
        assert!(nb_fit::<[f64; 1]>(&[], &[], 2).is_err());
        assert!(nb_fit(&[[1.0], [2.0]], &[0, 1], 1).is_err());
        let p = ab();
        assert!(matches!(
            p.predict(&[1.0, 2.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    proptest! {
        #[test]
        fn posteriors_normalize_and_argmax_is_shift_invariant(
            rows in prop::collection::vec(prop::collection::vec(-2.0f64..2.0, 3), 6..20),
            q in prop::collection::vec(-3.0f64..3.0, 3),
            shift in -50.0f64..50.0,
        ) {
            let y: Vec<usize> = (0..rows.len()).map(|i| i % 3).collect();
            let p = nb_fit(&rows, &y, 3).unwrap();
            let lp = p.log_posterior(&q).unwrap();
            let total: f64 = lp.iter().map(|v| v.exp()).sum();
            prop_assert!((total - 1.0).abs() < 1e-9);
            let shifted: Vec<f64> = p.joint_log_likelihood(&q).unwrap().iter().map(|v| v + shift).collect();
            prop_assert_eq!(argmax(&shifted), p.predict(&q).unwrap());
            for row in &p.variances {
                prop_assert!(row.iter().all(|&v| v >= p.variance_floor));
            }
        }
    }
}
