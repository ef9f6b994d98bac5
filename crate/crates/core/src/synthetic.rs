//! Seeded synthetic multi-label data with correlated labels.
//!
//! Features are independent standard normals. Every label scores the input
//! with the same shared linear direction plus a label-specific direction and
//! Gaussian noise, then thresholds at a label-specific offset. The shared
//! term dominates and the directions are orthonormal, so the latent scores of
//! any two labels correlate at `1 / (1 + w^2 + noise^2)` by construction.

use crate::data::{FeatureVector, LabelSet, MLDataset, Schema};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, SeededRng};

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub n_train: usize,
    pub n_test: usize,
    pub n_labels: usize,
    pub n_features: usize,
    /// Weight of the label-specific direction relative to the shared one.
    pub specific_weight: f64,
    pub noise: f64,
    /// Offsets are spread evenly over this range, label 0 lowest.
    pub offset_range: (f64, f64),
    pub seed: u64,
}

impl Default for SyntheticSpec {
    /// 200 train and 100 test rows, 6 labels, 10 features.
    fn default() -> Self {
        SyntheticSpec {
            n_train: 200,
            n_test: 100,
            n_labels: 6,
            n_features: 10,
            specific_weight: 0.5,
            noise: 0.25,
            offset_range: (-0.3, 0.5),
            seed: 0,
        }
    }
}

impl SyntheticSpec {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// `count` random orthonormal directions (Gram-Schmidt on Gaussian draws).
/// Needs `count <= d`.
fn orthonormal(rng: &mut SeededRng, count: usize, d: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(count);
    while basis.len() < count {
        let mut v: Vec<f64> = (0..d).map(|_| rng.normal()).collect();
        for b in &basis {
            let p = dot(&v, b);
            for (x, y) in v.iter_mut().zip(b) {
                *x -= p * y;
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm > 1e-6 {
            basis.push(v.iter().map(|x| x / norm).collect());
        }
    }
    basis
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Draws a train and a test set from the same generator.
pub fn generate(spec: &SyntheticSpec) -> Result<(MLDataset, MLDataset)> {
    if spec.n_labels == 0 || spec.n_features == 0 || spec.n_train == 0 || spec.n_test == 0 {
        return Err(Error::Config("synthetic data needs rows, labels and features".into()));
    }
    if spec.n_labels + 1 > spec.n_features {
        return Err(Error::Config(format!(
            "{} labels need at least {} features",
            spec.n_labels,
            spec.n_labels + 1
        )));
    }
    let mut params = SeededRng::new(derive_seed(spec.seed, 0));
    let mut directions = orthonormal(&mut params, spec.n_labels + 1, spec.n_features);
    let shared = directions.remove(0);
    let specific = directions;
    let (lo, hi) = spec.offset_range;
    let offsets: Vec<f64> = (0..spec.n_labels)
        .map(|j| {
            if spec.n_labels == 1 {
                lo
            } else {
                lo + (hi - lo) * j as f64 / (spec.n_labels - 1) as f64
            }
        })
        .collect();

    let mut rows = SeededRng::new(derive_seed(spec.seed, 1));
    let mut draw = |n: usize| {
        let data = (0..n)
            .map(|_| {
                let x: Vec<f64> = (0..spec.n_features).map(|_| rows.normal()).collect();
                let common = dot(&shared, &x);
                let bits: Vec<bool> = (0..spec.n_labels)
                    .map(|j| {
                        common + spec.specific_weight * dot(&specific[j], &x) + spec.noise * rows.normal() > offsets[j]
                    })
                    .collect();
                (FeatureVector::numeric(&x), LabelSet::from_bools(&bits))
            })
            .collect();
        MLDataset::new(Schema::numeric(spec.n_features, spec.n_labels), data)
    };
    let train = draw(spec.n_train)?;
    let test = draw(spec.n_test)?;
    Ok((train, test))
}

/// Pearson correlation between every pair of label indicator columns.
/// Constant columns correlate 0 with everything.
pub fn label_correlations(d: &MLDataset) -> Vec<Vec<f64>> {
    let m = d.n_labels();
    let n = d.len() as f64;
    let cols: Vec<Vec<f64>> = (0..m)
        .map(|j| d.labelsets().map(|y| if y.contains(j) { 1.0 } else { 0.0 }).collect())
        .collect();
    let means: Vec<f64> = cols.iter().map(|c| c.iter().sum::<f64>() / n).collect();
    let mut out = vec![vec![0.0; m]; m];
    for a in 0..m {
        for b in 0..m {
            let cov: f64 = cols[a]
                .iter()
                .zip(&cols[b])
                .map(|(x, y)| (x - means[a]) * (y - means[b]))
                .sum();
            let va: f64 = cols[a].iter().map(|x| (x - means[a]).powi(2)).sum();
            let vb: f64 = cols[b].iter().map(|y| (y - means[b]).powi(2)).sum();
            out[a][b] = if va == 0.0 || vb == 0.0 {
                0.0
            } else {
                cov / (va * vb).sqrt()
            };
        }
    }
    out
}
