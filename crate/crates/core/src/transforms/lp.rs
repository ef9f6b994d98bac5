use std::collections::BTreeMap;

use super::{feature_refs, MultiLabelModel};
use crate::data::{FeatureVector, LabelSet, MLDataset};
use crate::error::{Error, Result};
use crate::learners::{fit_with_classes, ClassDistribution, Classifier, LearnerSpec};

/// Label Powerset: one multiclass classifier whose classes are the distinct
/// training labelsets.
///
/// Class indices follow the labelsets' bit-pattern order. The score of label
/// `j` is the total probability of the classes whose labelset contains `j`.
#[derive(Debug, Clone)]
pub struct LabelPowersetModel {
    n_labels: usize,
    labelsets: Vec<LabelSet>,
    classifier: Classifier,
}

pub fn lp_fit(train: &MLDataset, spec: &LearnerSpec) -> Result<LabelPowersetModel> {
    let m = train.n_labels();
    if m == 0 {
        return Err(Error::Transform("label powerset needs at least one label".into()));
    }
    if train.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut index: BTreeMap<&LabelSet, usize> = train.labelsets().map(|y| (y, 0)).collect();
    for (i, v) in index.values_mut().enumerate() {
        *v = i;
    }
    let classes: Vec<usize> = train.labelsets().map(|y| index[y]).collect();
    let labelsets: Vec<LabelSet> = index.keys().map(|&y| y.clone()).collect();
    let classifier = fit_with_classes(
        spec,
        &train.schema().attributes,
        &feature_refs(train),
        &classes,
        labelsets.len(),
    )?;
    Ok(LabelPowersetModel {
        n_labels: m,
        labelsets,
        classifier,
    })
}

impl LabelPowersetModel {
    /// Training labelsets in class-index order.
    pub fn labelsets(&self) -> &[LabelSet] {
        &self.labelsets
    }

    pub fn class_distribution(&self, x: &FeatureVector) -> Result<ClassDistribution> {
        self.classifier.predict_dist(x)
    }

    /// Most probable training labelset.
    pub fn predict_labelset(&self, x: &FeatureVector) -> Result<LabelSet> {
        Ok(self.labelsets[self.class_distribution(x)?.argmax()].clone())
    }
}

impl MultiLabelModel for LabelPowersetModel {
    fn n_labels(&self) -> usize {
        self.n_labels
    }

    fn predict_scores(&self, x: &FeatureVector) -> Result<Vec<f64>> {
        let dist = self.class_distribution(x)?;
        let mut scores = vec![0.0; self.n_labels];
        for (set, &p) in self.labelsets.iter().zip(dist.probs()) {
            for j in set.iter() {
                scores[j] += p;
            }
        }
        // Sums of probabilities can drift past 1 by an ulp.
        for s in &mut scores {
            *s = s.clamp(0.0, 1.0);
        }
        Ok(scores)
    }
}
