use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lp::{lp_fit, LabelPowersetModel};
use super::MultiLabelModel;
use crate::data::{FeatureVector, LabelSet, MLDataset};
use crate::error::{Error, Result};
use crate::learners::LearnerSpec;
use crate::rng::SeededRng;

/// Score given to labels that no member covers.
pub const UNCOVERED_SCORE: f64 = 0.5;

/// RAKEL parameters. `m` defaults to `2M`, `k` to `min(3, M)`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RakelSpec {
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub seed: u64,
}

impl RakelSpec {
    pub fn new(m: usize, k: usize, seed: u64) -> Self {
        RakelSpec {
            m: Some(m),
            k: Some(k),
            seed,
        }
    }

    pub fn resolve(&self, n_labels: usize) -> (usize, usize) {
        (self.m.unwrap_or(2 * n_labels), self.k.unwrap_or(n_labels.min(3)))
    }
}

/// `C(n, k)`, saturating.
fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// `m` random `k`-subsets of `0..n_labels`, each sorted. Subsets do not
/// repeat until all `C(M, k)` of them have been drawn.
pub(crate) fn draw_labelsets(n_labels: usize, m: usize, k: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = SeededRng::new(seed);
    let total = binomial(n_labels, k);
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::with_capacity(m);
    while out.len() < m {
        let s = rng.sample_distinct(n_labels, k);
        if (seen.len() as u128) < total && seen.contains(&s) {
            continue;
        }
        if seen.len() as u128 >= total {
            seen.clear();
        }
        seen.insert(s.clone());
        out.push(s);
    }
    out
}

/// Random k-labelsets: an ensemble of LP models over random label subsets.
#[derive(Debug, Clone)]
pub struct RakelModel {
    n_labels: usize,
    members: Vec<(Vec<usize>, LabelPowersetModel)>,
    coverage: Vec<usize>,
}

pub fn rakel_fit(train: &MLDataset, spec: &LearnerSpec, rakel: &RakelSpec) -> Result<RakelModel> {
    let n_labels = train.n_labels();
    let (m, k) = rakel.resolve(n_labels);
    if k == 0 || k > n_labels {
        return Err(Error::Transform(format!(
            "labelset size k = {k} must be in 1..={n_labels}"
        )));
    }
    if m == 0 {
        return Err(Error::Transform("RAKEL needs at least one member".into()));
    }
    let subsets = draw_labelsets(n_labels, m, k, rakel.seed);
    let members = subsets
        .into_par_iter()
        .map(|labels| {
            let names = labels.iter().map(|&j| train.schema().label_names[j].clone()).collect();
            let sets: Vec<LabelSet> = train.labelsets().map(|y| y.project(&labels)).collect();
            let restricted = train.with_labels(names, sets)?;
            Ok((labels, lp_fit(&restricted, spec)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut coverage = vec![0; n_labels];
    for (labels, _) in &members {
        for &j in labels {
            coverage[j] += 1;
        }
    }
    Ok(RakelModel {
        n_labels,
        members,
        coverage,
    })
}

impl RakelModel {
    /// Member label subsets (original label indices) with their LP models.
    pub fn members(&self) -> &[(Vec<usize>, LabelPowersetModel)] {
        &self.members
    }

    /// Labels covered by no member; they always score [`UNCOVERED_SCORE`].
    pub fn uncovered_labels(&self) -> Vec<usize> {
        (0..self.n_labels).filter(|&j| self.coverage[j] == 0).collect()
    }
}

impl MultiLabelModel for RakelModel {
    fn n_labels(&self) -> usize {
        self.n_labels
    }

    fn predict_scores(&self, x: &FeatureVector) -> Result<Vec<f64>> {
        let mut sums = vec![0.0; self.n_labels];
        for (labels, model) in &self.members {
            let member_scores = model.predict_scores(x)?;
            for (&j, s) in labels.iter().zip(member_scores) {
                sums[j] += s;
            }
        }
        Ok(sums
            .iter()
            .zip(&self.coverage)
            .map(|(&s, &c)| if c == 0 { UNCOVERED_SCORE } else { s / c as f64 })
            .collect())
    }
}
