use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::lp::{lp_fit, LabelPowersetModel};
use super::MultiLabelModel;
use crate::data::{FeatureVector, LabelSet, MLDataset};
use crate::error::{Error, Result};
use crate::learners::LearnerSpec;

/// Pruned-sets parameters: labelsets seen fewer than `p` times are pruned,
/// and each pruned row comes back at most `b` times under frequent subsets
/// of its labelset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruneSpec {
    #[serde(default = "default_p")]
    pub p: usize,
    #[serde(default = "default_b")]
    pub b: usize,
}

fn default_p() -> usize {
    2
}

fn default_b() -> usize {
    2
}

impl Default for PruneSpec {
    fn default() -> Self {
        PruneSpec { p: 2, b: 2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PruningSummary {
    pub pruned_rows: usize,
    pub reintroduced_rows: usize,
    pub dropped_rows: usize,
}

/// Rewrites `train`: rows whose labelset is infrequent are replaced, in
/// place, by copies labelled with the frequent non-empty subsets of their
/// labelset, largest first, ties in bit-pattern order, at most `b` copies.
pub fn prune_and_reintroduce(train: &MLDataset, prune: &PruneSpec) -> Result<(MLDataset, PruningSummary)> {
    let mut freq: HashMap<&LabelSet, usize> = HashMap::new();
    for y in train.labelsets() {
        *freq.entry(y).or_default() += 1;
    }
    let mut frequent: Vec<&LabelSet> = freq
        .iter()
        .filter(|&(y, &n)| n >= prune.p && !y.is_empty())
        .map(|(&y, _)| y)
        .collect();
    frequent.sort_by(|a, b| b.cardinality().cmp(&a.cardinality()).then_with(|| a.cmp(b)));

    let mut summary = PruningSummary::default();
    let mut rows = Vec::with_capacity(train.len());
    for (x, y) in train.rows() {
        if freq[y] >= prune.p {
            rows.push((x.clone(), y.clone()));
            continue;
        }
        summary.pruned_rows += 1;
        let mut added = 0;
        for &s in &frequent {
            if added == prune.b {
                break;
            }
            if s.is_subset_of(y)? {
                rows.push((x.clone(), s.clone()));
                added += 1;
            }
        }
        summary.reintroduced_rows += added;
        if added == 0 {
            summary.dropped_rows += 1;
        }
    }
    if rows.is_empty() {
        return Err(Error::OverPruned { p: prune.p });
    }
    Ok((MLDataset::new(train.schema().clone(), rows)?, summary))
}

/// Pruned sets: label powerset trained on the pruned and reintroduced data.
#[derive(Debug, Clone)]
pub struct PrunedSetsModel {
    lp: LabelPowersetModel,
    summary: PruningSummary,
}

pub fn ps_fit(train: &MLDataset, spec: &LearnerSpec, prune: &PruneSpec) -> Result<PrunedSetsModel> {
    if train.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let (rewritten, summary) = prune_and_reintroduce(train, prune)?;
    Ok(PrunedSetsModel {
        lp: lp_fit(&rewritten, spec)?,
        summary,
    })
}

impl PrunedSetsModel {
    pub fn summary(&self) -> PruningSummary {
        self.summary
    }

    /// The underlying label powerset model.
    pub fn lp(&self) -> &LabelPowersetModel {
        &self.lp
    }

    pub fn predict_labelset(&self, x: &FeatureVector) -> Result<LabelSet> {
        self.lp.predict_labelset(x)
    }
}

impl MultiLabelModel for PrunedSetsModel {
    fn n_labels(&self) -> usize {
        self.lp.n_labels()
    }

    fn predict_scores(&self, x: &FeatureVector) -> Result<Vec<f64>> {
        self.lp.predict_scores(x)
    }
}
