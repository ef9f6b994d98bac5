use super::encode::{Column, Encoder};
use super::ClassDistribution;
use crate::data::FeatureVector;
use crate::error::Result;

#[derive(Debug, Clone)]
enum Likelihood {
    /// Per class: (mean, variance).
    Gaussian(Vec<(f64, f64)>),
    /// Per class: Laplace-smoothed log probabilities over categories.
    Categorical(Vec<Vec<f64>>),
}

/// Gaussian naive Bayes for numeric attributes, Laplace-1 categorical
/// likelihoods for nominal ones.
#[derive(Debug, Clone)]
pub struct NaiveBayesModel {
    encoder: Encoder,
    log_priors: Vec<f64>,
    likelihoods: Vec<Likelihood>,
}

impl NaiveBayesModel {
    pub(crate) fn fit(
        encoder: Encoder,
        rows: &[&FeatureVector],
        classes: &[usize],
        n_classes: usize,
        variance_floor: f64,
    ) -> Result<Self> {
        let encoded: Vec<Vec<f64>> = rows.iter().map(|x| encoder.encode(x)).collect::<Result<_>>()?;
        let mut class_n = vec![0usize; n_classes];
        for &c in classes {
            class_n[c] += 1;
        }
        let total = classes.len() as f64;
        let log_priors = class_n
            .iter()
            .map(|&n| {
                if n == 0 {
                    f64::NEG_INFINITY
                } else {
                    (n as f64 / total).ln()
                }
            })
            .collect();

        let likelihoods = encoder
            .columns
            .iter()
            .enumerate()
            .map(|(a, col)| match col {
                Column::Numeric { .. } => {
                    let mut sum = vec![0.0; n_classes];
                    for (row, &c) in encoded.iter().zip(classes) {
                        sum[c] += row[a];
                    }
                    let means: Vec<f64> = sum
                        .iter()
                        .zip(&class_n)
                        .map(|(s, &n)| if n == 0 { 0.0 } else { s / n as f64 })
                        .collect();
                    let mut sq = vec![0.0; n_classes];
                    for (row, &c) in encoded.iter().zip(classes) {
                        sq[c] += (row[a] - means[c]).powi(2);
                    }
                    Likelihood::Gaussian(
                        means
                            .iter()
                            .zip(sq.iter().zip(&class_n))
                            .map(|(&m, (&s, &n))| {
                                let var = if n == 0 { 0.0 } else { s / n as f64 };
                                (m, var.max(variance_floor))
                            })
                            .collect(),
                    )
                }
                Column::Nominal { categories } => {
                    let mut counts = vec![vec![0.0; *categories]; n_classes];
                    for (row, &c) in encoded.iter().zip(classes) {
                        counts[c][row[a] as usize] += 1.0;
                    }
                    Likelihood::Categorical(
                        counts
                            .iter()
                            .zip(&class_n)
                            .map(|(cs, &n)| {
                                let denom = n as f64 + *categories as f64;
                                cs.iter().map(|&k| ((k + 1.0) / denom).ln()).collect()
                            })
                            .collect(),
                    )
                }
            })
            .collect();

        Ok(NaiveBayesModel {
            encoder,
            log_priors,
            likelihoods,
        })
    }

    pub(crate) fn n_classes(&self) -> usize {
        self.log_priors.len()
    }

    pub(crate) fn predict_dist(&self, x: &FeatureVector) -> Result<ClassDistribution> {
        let v = self.encoder.encode(x)?;
        let mut log_post = self.log_priors.clone();
        for (c, lp) in log_post.iter_mut().enumerate() {
            if lp.is_infinite() {
                continue;
            }
            for (value, lik) in v.iter().zip(&self.likelihoods) {
                *lp += match lik {
                    Likelihood::Gaussian(params) => {
                        let (mean, var) = params[c];
                        -0.5 * ((2.0 * std::f64::consts::PI * var).ln() + (value - mean).powi(2) / var)
                    }
                    Likelihood::Categorical(table) => table[c][*value as usize],
                };
            }
        }
        Ok(ClassDistribution::from_log_weights(&log_post))
    }
}
