//! Problem transformations: multi-label models assembled from single-label
//! base learners.

mod br;
mod lp;
mod pruned_sets;
mod rakel;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use br::{br_fit, BinaryRelevanceModel};
pub use lp::{lp_fit, LabelPowersetModel};
pub use pruned_sets::{prune_and_reintroduce, ps_fit, PruneSpec, PrunedSetsModel, PruningSummary};
pub use rakel::{rakel_fit, RakelModel, RakelSpec, UNCOVERED_SCORE};

use crate::data::{FeatureVector, MLDataset};
use crate::ensemble::Prediction;
use crate::error::{Error, Result};
use crate::learners::LearnerSpec;

/// A trained multi-label classifier producing one score in `[0, 1]` per label.
pub trait MultiLabelModel: Send + Sync + fmt::Debug {
    fn n_labels(&self) -> usize;

    fn predict_scores(&self, x: &FeatureVector) -> Result<Vec<f64>>;

    /// Scores plus the bipartition at threshold `t` and the label ranking.
    fn predict(&self, x: &FeatureVector, t: f64) -> Result<Prediction> {
        Prediction::from_scores(self.predict_scores(x)?, t)
    }
}

/// Model that returns the same score vector for every input.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantModel {
    scores: Vec<f64>,
}

impl ConstantModel {
    pub fn new(scores: Vec<f64>) -> Result<Self> {
        crate::ensemble::check_scores(&scores)?;
        Ok(ConstantModel { scores })
    }
}

impl MultiLabelModel for ConstantModel {
    fn n_labels(&self) -> usize {
        self.scores.len()
    }

    fn predict_scores(&self, _x: &FeatureVector) -> Result<Vec<f64>> {
        Ok(self.scores.clone())
    }
}

/// Which transformation to apply, with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TransformSpec {
    Br,
    Lp,
    Rakel(RakelSpec),
    Ps(PruneSpec),
    Constant { scores: Vec<f64> },
}

impl TransformSpec {
    pub fn name(&self) -> &'static str {
        match self {
            TransformSpec::Br => "BR",
            TransformSpec::Lp => "LP",
            TransformSpec::Rakel(_) => "RAKEL",
            TransformSpec::Ps(_) => "PS",
            TransformSpec::Constant { .. } => "CONST",
        }
    }

    pub fn fit(&self, train: &MLDataset, learner: &LearnerSpec) -> Result<Box<dyn MultiLabelModel>> {
        Ok(match self {
            TransformSpec::Br => Box::new(br_fit(train, learner)?),
            TransformSpec::Lp => Box::new(lp_fit(train, learner)?),
            TransformSpec::Rakel(spec) => Box::new(rakel_fit(train, learner, spec)?),
            TransformSpec::Ps(spec) => Box::new(ps_fit(train, learner, spec)?),
            TransformSpec::Constant { scores } => {
                if scores.len() != train.n_labels() {
                    return Err(Error::Transform(format!(
                        "constant model has {} scores for {} labels",
                        scores.len(),
                        train.n_labels()
                    )));
                }
                Box::new(ConstantModel::new(scores.clone())?)
            }
        })
    }
}

impl fmt::Display for TransformSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub(crate) fn feature_refs(d: &MLDataset) -> Vec<&FeatureVector> {
    d.features().collect()
}

#[cfg(test)]
mod tests;
