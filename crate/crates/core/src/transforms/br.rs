use rayon::prelude::*;

use super::{feature_refs, MultiLabelModel};
use crate::data::{FeatureVector, MLDataset};
use crate::error::{Error, Result};
use crate::learners::{fit_with_classes, Classifier, LearnerSpec};

#[derive(Debug, Clone)]
enum LabelScorer {
    /// The label had a single observed value in training.
    Constant(f64),
    Binary(Classifier),
}

/// Binary Relevance: one independent binary classifier per label.
#[derive(Debug, Clone)]
pub struct BinaryRelevanceModel {
    scorers: Vec<LabelScorer>,
}

pub fn br_fit(train: &MLDataset, spec: &LearnerSpec) -> Result<BinaryRelevanceModel> {
    let m = train.n_labels();
    if m == 0 {
        return Err(Error::Transform("binary relevance needs at least one label".into()));
    }
    if train.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let features = feature_refs(train);
    let attributes = &train.schema().attributes;
    let scorers = (0..m)
        .into_par_iter()
        .map(|j| {
            let classes: Vec<usize> = train.labelsets().map(|y| usize::from(y.contains(j))).collect();
            let positives = classes.iter().filter(|&&c| c == 1).count();
            if positives == 0 || positives == classes.len() {
                return Ok(LabelScorer::Constant(if positives == 0 { 0.0 } else { 1.0 }));
            }
            fit_with_classes(spec, attributes, &features, &classes, 2).map(LabelScorer::Binary)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BinaryRelevanceModel { scorers })
}

impl MultiLabelModel for BinaryRelevanceModel {
    fn n_labels(&self) -> usize {
        self.scorers.len()
    }

    fn predict_scores(&self, x: &FeatureVector) -> Result<Vec<f64>> {
        self.scorers
            .iter()
            .map(|s| match s {
                LabelScorer::Constant(v) => Ok(*v),
                LabelScorer::Binary(c) => Ok(c.predict_dist(x)?.probs()[1]),
            })
            .collect()
    }
}
