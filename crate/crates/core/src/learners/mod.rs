//! Single-label, probability-emitting base learners: k-nearest neighbours,
//! naive Bayes and a configurable decision tree.
//!
//! The five named presets stand in for the Weka learners conventionally
//! used with multi-label transformations (NB, k-NN, RandomTree, REPTree,
//! J48). They approximate those learners' behaviour; they are not
//! bit-compatible with Weka.

mod encode;
mod knn;
mod naive_bayes;
mod tree;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use knn::{Distance, KnnModel};
pub use naive_bayes::NaiveBayesModel;
pub use tree::{pruning_partition, Node, PruneReport, SplitCriterion, SplitInfo, SubsetSize, TreeModel, TreeSpec};

use crate::data::{Attribute, FeatureVector};
use crate::error::{Error, Result};
use encode::Encoder;

/// Probability vector over the classes of a single-label problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassDistribution {
    probs: Vec<f64>,
}

impl ClassDistribution {
    /// Normalized counts; all-zero counts give the uniform distribution.
    pub fn from_counts(counts: &[f64]) -> Self {
        let total: f64 = counts.iter().sum();
        if total <= 0.0 {
            let n = counts.len().max(1) as f64;
            return ClassDistribution {
                probs: vec![1.0 / n; counts.len()],
            };
        }
        ClassDistribution {
            probs: counts.iter().map(|c| c / total).collect(),
        }
    }

    /// Laplace-1 smoothed frequencies: `(count + 1) / (total + C)`.
    pub fn laplace(counts: &[f64]) -> Self {
        let total: f64 = counts.iter().sum::<f64>() + counts.len() as f64;
        ClassDistribution {
            probs: counts.iter().map(|c| (c + 1.0) / total).collect(),
        }
    }

    /// Softmax of unnormalized log weights; `-inf` entries get probability 0.
    pub fn from_log_weights(logs: &[f64]) -> Self {
        let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !max.is_finite() {
            return Self::from_counts(&vec![0.0; logs.len()]);
        }
        let weights: Vec<f64> = logs.iter().map(|&l| (l - max).exp()).collect();
        Self::from_counts(&weights)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn n_classes(&self) -> usize {
        self.probs.len()
    }

    /// Most probable class; ties go to the lower class index.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (c, &p) in self.probs.iter().enumerate() {
            if p > self.probs[best] {
                best = c;
            }
        }
        best
    }
}

/// Base learner configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LearnerSpec {
    Knn {
        k: usize,
        #[serde(default)]
        distance: Distance,
    },
    NaiveBayes {
        variance_floor: f64,
    },
    Tree(TreeSpec),
}

impl LearnerSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            LearnerSpec::Knn { k, .. } if *k == 0 => Err(Error::Learner("k must be at least 1".into())),
            LearnerSpec::NaiveBayes { variance_floor } if variance_floor.is_nan() || *variance_floor <= 0.0 => {
                Err(Error::Learner("variance_floor must be positive".into()))
            }
            LearnerSpec::Tree(t) if t.min_leaf == 0 => Err(Error::Learner("min_leaf must be at least 1".into())),
            LearnerSpec::Tree(TreeSpec {
                random_subset_size: Some(SubsetSize::Count(0)),
                ..
            }) => Err(Error::Learner("random_subset_size must be at least 1".into())),
            _ => Ok(()),
        }
    }

    /// Same learner with its tree seed replaced (no-op for other kinds).
    pub fn with_seed(&self, seed: u64) -> LearnerSpec {
        match self {
            LearnerSpec::Tree(t) => LearnerSpec::Tree(TreeSpec { seed, ..t.clone() }),
            other => other.clone(),
        }
    }
}

/// The five named base-learner presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Preset {
    #[serde(rename = "NB")]
    NaiveBayes,
    #[serde(rename = "k-NN")]
    Knn,
    #[serde(rename = "RANDOM-T")]
    RandomTree,
    #[serde(rename = "REPTREE")]
    RepTree,
    #[serde(rename = "J48")]
    J48,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::NaiveBayes,
        Preset::Knn,
        Preset::RandomTree,
        Preset::RepTree,
        Preset::J48,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::NaiveBayes => "NB",
            Preset::Knn => "k-NN",
            Preset::RandomTree => "RANDOM-T",
            Preset::RepTree => "REPTREE",
            Preset::J48 => "J48",
        }
    }

    /// Learner configuration; `seed` only affects the tree presets.
    pub fn spec(self, seed: u64) -> LearnerSpec {
        match self {
            Preset::NaiveBayes => LearnerSpec::NaiveBayes { variance_floor: 1e-6 },
            Preset::Knn => LearnerSpec::Knn {
                k: 5,
                distance: Distance::Euclidean,
            },
            Preset::RandomTree => LearnerSpec::Tree(TreeSpec {
                criterion: SplitCriterion::InfoGain,
                random_subset_size: Some(SubsetSize::Sqrt),
                rep_pruning: false,
                min_leaf: 1,
                max_depth: None,
                seed,
            }),
            Preset::RepTree => LearnerSpec::Tree(TreeSpec {
                criterion: SplitCriterion::InfoGain,
                random_subset_size: None,
                rep_pruning: true,
                min_leaf: 2,
                max_depth: None,
                seed,
            }),
            Preset::J48 => LearnerSpec::Tree(TreeSpec {
                criterion: SplitCriterion::GainRatio,
                random_subset_size: None,
                rep_pruning: false,
                min_leaf: 2,
                max_depth: None,
                seed,
            }),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "nb" | "naivebayes" => Ok(Preset::NaiveBayes),
            "knn" => Ok(Preset::Knn),
            "randomt" | "randomtree" | "rt" => Ok(Preset::RandomTree),
            "reptree" => Ok(Preset::RepTree),
            "j48" => Ok(Preset::J48),
            _ => Err(Error::Learner(format!("unknown learner preset `{s}`"))),
        }
    }
}

/// A trained base learner.
#[derive(Debug, Clone)]
pub enum Classifier {
    Knn(KnnModel),
    NaiveBayes(NaiveBayesModel),
    Tree(TreeModel),
}

impl Classifier {
    pub fn n_classes(&self) -> usize {
        match self {
            Classifier::Knn(m) => m.n_classes(),
            Classifier::NaiveBayes(m) => m.n_classes(),
            Classifier::Tree(m) => m.n_classes(),
        }
    }

    pub fn predict_dist(&self, x: &FeatureVector) -> Result<ClassDistribution> {
        match self {
            Classifier::Knn(m) => m.predict_dist(x),
            Classifier::NaiveBayes(m) => m.predict_dist(x),
            Classifier::Tree(m) => m.predict_dist(x),
        }
    }

    pub fn as_tree(&self) -> Option<&TreeModel> {
        match self {
            Classifier::Tree(t) => Some(t),
            _ => None,
        }
    }
}

/// Trains a base learner with `C = max(class) + 1` classes.
pub fn fit(
    spec: &LearnerSpec,
    attributes: &[Attribute],
    features: &[&FeatureVector],
    classes: &[usize],
) -> Result<Classifier> {
    let n_classes = classes.iter().max().map_or(0, |&c| c + 1);
    fit_with_classes(spec, attributes, features, classes, n_classes)
}

/// Trains a base learner over an explicit class count `n_classes`.
pub fn fit_with_classes(
    spec: &LearnerSpec,
    attributes: &[Attribute],
    features: &[&FeatureVector],
    classes: &[usize],
    n_classes: usize,
) -> Result<Classifier> {
    spec.validate()?;
    if features.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if features.len() != classes.len() {
        return Err(Error::LengthMismatch {
            expected: features.len(),
            got: classes.len(),
        });
    }
    if let Some(&c) = classes.iter().find(|&&c| c >= n_classes) {
        return Err(Error::Learner(format!("class index {c} outside 0..{n_classes}")));
    }
    let encoder = Encoder::fit(attributes, features)?;
    Ok(match spec {
        LearnerSpec::Knn { k, distance } => {
            Classifier::Knn(KnnModel::fit(encoder, features, classes, n_classes, *k, *distance)?)
        }
        LearnerSpec::NaiveBayes { variance_floor } => Classifier::NaiveBayes(NaiveBayesModel::fit(
            encoder,
            features,
            classes,
            n_classes,
            *variance_floor,
        )?),
        LearnerSpec::Tree(t) => Classifier::Tree(TreeModel::fit(encoder, features, classes, n_classes, t)?),
    })
}
