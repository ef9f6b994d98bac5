//! EN-MLC: a heterogeneous ensemble of multi-label models, each trained on
//! its own random sample of the training rows, merged by an algebraic or
//! voting rule.

mod combine;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use combine::{bipartition, combine, rank_labels, CombinationRule, Prediction};
pub(crate) use combine::{check_scores, check_weights};

use crate::data::{FeatureVector, MLDataset};
use crate::error::{Error, Result};
use crate::learners::{LearnerSpec, Preset};
use crate::rng::{derive_seed, SeededRng};
use crate::transforms::{MultiLabelModel, PruneSpec, TransformSpec};

pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// A base learner given either by preset name or in full.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LearnerChoice {
    Preset(Preset),
    Spec(LearnerSpec),
}

impl LearnerChoice {
    /// Concrete learner; presets take `seed` as their tree seed.
    pub fn resolve(&self, seed: u64) -> LearnerSpec {
        match self {
            LearnerChoice::Preset(p) => p.spec(seed),
            LearnerChoice::Spec(s) => s.clone(),
        }
    }
}

impl From<Preset> for LearnerChoice {
    fn from(p: Preset) -> Self {
        LearnerChoice::Preset(p)
    }
}

impl From<LearnerSpec> for LearnerChoice {
    fn from(s: LearnerSpec) -> Self {
        LearnerChoice::Spec(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberSpec {
    pub transform: TransformSpec,
    pub learner: LearnerChoice,
}

fn default_members() -> Vec<MemberSpec> {
    EnsembleSpec::default().members
}

fn default_ratio() -> f64 {
    0.67
}

fn default_threshold() -> f64 {
    DEFAULT_THRESHOLD
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    #[serde(default = "default_members")]
    pub members: Vec<MemberSpec>,
    /// Fraction of training rows drawn for each member.
    #[serde(default = "default_ratio")]
    pub sample_ratio: f64,
    #[serde(default)]
    pub with_replacement: bool,
    #[serde(default)]
    pub rule: CombinationRule,
    #[serde(default)]
    pub weights: Option<Vec<f64>>,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    #[serde(default)]
    pub seed: u64,
}

impl Default for EnsembleSpec {
    /// Ten pruned-sets members (p = 2, b = 2) cycling through the five
    /// learner presets, 67% row samples without replacement, majority vote.
    fn default() -> Self {
        Self::heterogeneous(10, TransformSpec::Ps(PruneSpec::default()), 0)
    }
}

impl EnsembleSpec {
    /// `q` members of one transform, learners cycling through all presets.
    pub fn heterogeneous(q: usize, transform: TransformSpec, seed: u64) -> Self {
        let members = (0..q)
            .map(|i| MemberSpec {
                transform: transform.clone(),
                learner: Preset::ALL[i % Preset::ALL.len()].into(),
            })
            .collect();
        EnsembleSpec {
            members,
            sample_ratio: default_ratio(),
            with_replacement: false,
            rule: CombinationRule::default(),
            weights: None,
            threshold: DEFAULT_THRESHOLD,
            seed,
        }
    }

    /// `q` members sharing one transform and one learner.
    pub fn homogeneous(q: usize, transform: TransformSpec, learner: LearnerChoice, seed: u64) -> Self {
        let mut spec = Self::heterogeneous(q, transform, seed);
        for m in &mut spec.members {
            m.learner = learner.clone();
        }
        spec
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn q(&self) -> usize {
        self.members.len()
    }

    /// Resolved learner of member `i`.
    pub fn member_learner(&self, i: usize) -> LearnerSpec {
        self.members[i]
            .learner
            .resolve(derive_seed(self.seed, 2 * i as u64 + 1))
    }

    /// Row indices (ascending, repeats allowed with replacement) drawn for
    /// member `i` out of `n` training rows.
    pub fn member_sample(&self, i: usize, n: usize) -> Result<Vec<usize>> {
        let size = (self.sample_ratio * n as f64).round() as usize;
        if size == 0 {
            return Err(Error::Ensemble(format!(
                "sample ratio {} leaves member {i} with no rows",
                self.sample_ratio
            )));
        }
        let mut rng = SeededRng::new(derive_seed(self.seed, 2 * i as u64));
        let mut idx = if self.with_replacement {
            (0..size).map(|_| rng.below(n)).collect::<Vec<_>>()
        } else {
            rng.sample_distinct(n, size.min(n))
        };
        idx.sort_unstable();
        Ok(idx)
    }

    pub fn validate(&self) -> Result<()> {
        if self.members.is_empty() {
            return Err(Error::Ensemble("an ensemble needs at least one member".into()));
        }
        if !(self.sample_ratio > 0.0 && self.sample_ratio <= 1.0) {
            return Err(Error::Ensemble(format!(
                "sample ratio {} is outside (0, 1]",
                self.sample_ratio
            )));
        }
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(Error::Ensemble(format!(
                "threshold {} is outside [0, 1]",
                self.threshold
            )));
        }
        match &self.weights {
            Some(w) => check_weights(w, self.q())?,
            None if self.rule.is_weighted() => {
                return Err(Error::Ensemble(format!("rule {:?} requires weights", self.rule)))
            }
            None => {}
        }
        Ok(())
    }
}

/// A trained EN-MLC ensemble.
#[derive(Debug)]
pub struct EnsembleModel {
    n_labels: usize,
    members: Vec<Box<dyn MultiLabelModel>>,
    samples: Vec<Vec<usize>>,
    rule: CombinationRule,
    weights: Option<Vec<f64>>,
    threshold: f64,
}

pub fn enmlc_fit(train: &MLDataset, spec: &EnsembleSpec) -> Result<EnsembleModel> {
    spec.validate()?;
    if train.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let n = train.len();
    let trained = (0..spec.q())
        .into_par_iter()
        .map(|i| {
            let sample = spec.member_sample(i, n)?;
            let subset = train.subset(&sample);
            let model = spec.members[i].transform.fit(&subset, &spec.member_learner(i))?;
            Ok((sample, model))
        })
        .collect::<Result<Vec<_>>>()?;
    let (samples, members) = trained.into_iter().unzip();
    Ok(EnsembleModel {
        n_labels: train.n_labels(),
        members,
        samples,
        rule: spec.rule,
        weights: spec.weights.clone(),
        threshold: spec.threshold,
    })
}

impl EnsembleModel {
    pub fn members(&self) -> &[Box<dyn MultiLabelModel>] {
        &self.members
    }

    /// Training-row indices each member was fitted on.
    pub fn samples(&self) -> &[Vec<usize>] {
        &self.samples
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn member_scores(&self, x: &FeatureVector) -> Result<Vec<Vec<f64>>> {
        self.members.iter().map(|m| m.predict_scores(x)).collect()
    }
}

impl MultiLabelModel for EnsembleModel {
    fn n_labels(&self) -> usize {
        self.n_labels
    }

    fn predict_scores(&self, x: &FeatureVector) -> Result<Vec<f64>> {
        combine(
            &self.member_scores(x)?,
            self.rule,
            self.weights.as_deref(),
            self.threshold,
        )
    }
}
