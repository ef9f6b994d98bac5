use serde::{Deserialize, Serialize};

use crate::data::LabelSet;
use crate::error::{Error, Result};

/// How member score vectors are merged into one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CombinationRule {
    Mean,
    WeightedMean,
    Max,
    Min,
    /// Fraction of members whose score reaches the threshold.
    #[default]
    MajorityVote,
    /// Weighted fraction of members whose score reaches the threshold.
    WeightedMajorityVote,
}

impl CombinationRule {
    pub fn is_weighted(self) -> bool {
        matches!(
            self,
            CombinationRule::WeightedMean | CombinationRule::WeightedMajorityVote
        )
    }
}

pub(crate) fn check_scores(scores: &[f64]) -> Result<()> {
    for (label, &value) in scores.iter().enumerate() {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::InvalidScore { label, value });
        }
    }
    Ok(())
}

pub(crate) fn check_weights(weights: &[f64], q: usize) -> Result<()> {
    if weights.len() != q {
        return Err(Error::LengthMismatch {
            expected: q,
            got: weights.len(),
        });
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::Ensemble("weights must be finite and non-negative".into()));
    }
    if weights.iter().sum::<f64>() <= 0.0 {
        return Err(Error::Ensemble("weights sum to zero".into()));
    }
    Ok(())
}

/// Combines `q` member score vectors of length `M` component-wise.
///
/// Weighted rules normalize by the weight total. Voting rules threshold each
/// member's scores at `t` (inclusive) before tallying.
pub fn combine(member_scores: &[Vec<f64>], rule: CombinationRule, weights: Option<&[f64]>, t: f64) -> Result<Vec<f64>> {
    let Some(first) = member_scores.first() else {
        return Err(Error::Ensemble("no member scores to combine".into()));
    };
    let m = first.len();
    for s in member_scores {
        if s.len() != m {
            return Err(Error::LengthMismatch {
                expected: m,
                got: s.len(),
            });
        }
        check_scores(s)?;
    }
    let q = member_scores.len();
    let weights = if rule.is_weighted() {
        let w = weights.ok_or_else(|| Error::Ensemble("weighted rule without weights".into()))?;
        check_weights(w, q)?;
        Some(w)
    } else {
        None
    };

    let column = |j: usize| member_scores.iter().map(move |s| s[j]);
    let out = (0..m)
        .map(|j| match rule {
            CombinationRule::Mean => column(j).sum::<f64>() / q as f64,
            CombinationRule::Max => column(j).fold(f64::NEG_INFINITY, f64::max),
            CombinationRule::Min => column(j).fold(f64::INFINITY, f64::min),
            CombinationRule::MajorityVote => column(j).filter(|&s| s >= t).count() as f64 / q as f64,
            CombinationRule::WeightedMean => {
                let w = weights.unwrap();
                column(j).zip(w).map(|(s, w)| s * w).sum::<f64>() / w.iter().sum::<f64>()
            }
            CombinationRule::WeightedMajorityVote => {
                let w = weights.unwrap();
                column(j).zip(w).filter(|(s, _)| *s >= t).map(|(_, w)| w).sum::<f64>() / w.iter().sum::<f64>()
            }
        })
        .map(|v| v.clamp(0.0, 1.0))
        .collect();
    Ok(out)
}

/// Labels whose score reaches `t` (inclusive).
pub fn bipartition(scores: &[f64], t: f64) -> LabelSet {
    let bits: Vec<bool> = scores.iter().map(|&s| s >= t).collect();
    LabelSet::from_bools(&bits)
}

/// Ranks `1..=M` by descending score; equal scores rank by ascending label
/// index. `ranks[j]` is the rank of label `j`.
pub fn rank_labels(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let mut ranks = vec![0; scores.len()];
    for (pos, &j) in order.iter().enumerate() {
        ranks[j] = pos + 1;
    }
    ranks
}

/// Per-label scores with the derived bipartition and ranking.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub scores: Vec<f64>,
    pub bipartition: LabelSet,
    pub ranks: Vec<usize>,
}

impl Prediction {
    pub fn from_scores(scores: Vec<f64>, t: f64) -> Result<Self> {
        check_scores(&scores)?;
        Ok(Prediction {
            bipartition: bipartition(&scores, t),
            ranks: rank_labels(&scores),
            scores,
        })
    }
}
