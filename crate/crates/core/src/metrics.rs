//! Multi-label evaluation measures.
//!
//! Bipartition measures (accuracy, Hamming loss) compare predicted labelsets
//! with the truth. Ranking measures (one-error, ranking loss, average
//! precision) take per-instance rankings where `ranks[j]` is the rank of
//! label `j`, 1 being the most relevant.
//!
//! Conventions:
//! * accuracy counts an instance with empty truth and empty prediction as 1;
//! * one-error counts an instance as a miss when its rank-1 label is not
//!   relevant (so an empty truth is always a miss);
//! * ranking loss skips instances whose truth is empty or full, average
//!   precision skips instances whose truth is empty. Skips are counted in
//!   the report.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{LabelSet, MLDataset};
use crate::ensemble::Prediction;
use crate::error::{Error, Result};
use crate::transforms::MultiLabelModel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub accuracy: f64,
    pub hamming_loss: f64,
    pub one_error: f64,
    pub ranking_loss: f64,
    pub avg_precision: f64,
    pub n_evaluated: usize,
    /// Instances left out of ranking loss (empty or full truth).
    pub n_skipped_ranking: usize,
    /// Instances left out of average precision (empty truth).
    pub n_skipped_avg_precision: usize,
}

fn check_pairs(truths: &[LabelSet], others: usize) -> Result<()> {
    if truths.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if truths.len() != others {
        return Err(Error::LengthMismatch {
            expected: truths.len(),
            got: others,
        });
    }
    Ok(())
}

fn check_ranking(truth: &LabelSet, ranks: &[usize]) -> Result<()> {
    let m = truth.universe();
    if ranks.len() != m {
        return Err(Error::InvalidRanking(format!(
            "ranking has {} entries for {m} labels",
            ranks.len()
        )));
    }
    let mut seen = vec![false; m];
    for &r in ranks {
        if r == 0 || r > m || seen[r - 1] {
            return Err(Error::InvalidRanking(format!(
                "{ranks:?} is not a permutation of 1..={m}"
            )));
        }
        seen[r - 1] = true;
    }
    Ok(())
}

/// Mean over instances of `|Y ∩ Z| / |Y ∪ Z|`.
pub fn accuracy(truths: &[LabelSet], preds: &[LabelSet]) -> Result<f64> {
    check_pairs(truths, preds.len())?;
    let mut total = 0.0;
    for (y, z) in truths.iter().zip(preds) {
        let union = y.union(z)?.cardinality();
        let inter = y.intersection(z)?.cardinality();
        total += if union == 0 { 1.0 } else { inter as f64 / union as f64 };
    }
    Ok(total / truths.len() as f64)
}

/// Mean over instances of `|Y Δ Z| / M`.
pub fn hamming_loss(truths: &[LabelSet], preds: &[LabelSet]) -> Result<f64> {
    check_pairs(truths, preds.len())?;
    let m = truths[0].universe();
    if m == 0 {
        return Err(Error::Schema("hamming loss needs at least one label".into()));
    }
    let mut total = 0.0;
    for (y, z) in truths.iter().zip(preds) {
        total += y.symdiff_count(z)? as f64 / m as f64;
    }
    Ok(total / truths.len() as f64)
}

/// Fraction of instances whose top-ranked label is not relevant.
pub fn one_error(truths: &[LabelSet], rankings: &[Vec<usize>]) -> Result<f64> {
    check_pairs(truths, rankings.len())?;
    let mut misses = 0usize;
    for (y, ranks) in truths.iter().zip(rankings) {
        check_ranking(y, ranks)?;
        let top = ranks.iter().position(|&r| r == 1).expect("checked permutation");
        if !y.contains(top) {
            misses += 1;
        }
    }
    Ok(misses as f64 / truths.len() as f64)
}

fn ranking_loss_terms(truths: &[LabelSet], rankings: &[Vec<usize>]) -> Result<(f64, usize)> {
    check_pairs(truths, rankings.len())?;
    let mut total = 0.0;
    let mut used = 0usize;
    for (y, ranks) in truths.iter().zip(rankings) {
        check_ranking(y, ranks)?;
        let n_rel = y.cardinality();
        let n_irr = y.universe() - n_rel;
        if n_rel == 0 || n_irr == 0 {
            continue;
        }
        // Walk labels from best to worst rank, counting irrelevant labels
        // seen so far; each relevant label is misordered with all of them.
        let mut by_rank = vec![0; ranks.len()];
        for (j, &r) in ranks.iter().enumerate() {
            by_rank[r - 1] = j;
        }
        let mut irrelevant_above = 0usize;
        let mut bad = 0usize;
        for &j in &by_rank {
            if y.contains(j) {
                bad += irrelevant_above;
            } else {
                irrelevant_above += 1;
            }
        }
        total += bad as f64 / (n_rel * n_irr) as f64;
        used += 1;
    }
    Ok((total, used))
}

/// Mean fraction of (relevant, irrelevant) label pairs ranked in the wrong
/// order, over instances whose truth is neither empty nor full.
pub fn ranking_loss(truths: &[LabelSet], rankings: &[Vec<usize>]) -> Result<f64> {
    let (total, used) = ranking_loss_terms(truths, rankings)?;
    if used == 0 {
        return Err(Error::UndefinedMetric("ranking_loss"));
    }
    Ok(total / used as f64)
}

fn avg_precision_terms(truths: &[LabelSet], rankings: &[Vec<usize>]) -> Result<(f64, usize)> {
    check_pairs(truths, rankings.len())?;
    let mut total = 0.0;
    let mut used = 0usize;
    for (y, ranks) in truths.iter().zip(rankings) {
        check_ranking(y, ranks)?;
        let mut relevant_ranks: Vec<usize> = y.iter().map(|j| ranks[j]).collect();
        if relevant_ranks.is_empty() {
            continue;
        }
        relevant_ranks.sort_unstable();
        // The i-th best relevant label (0-based) has i + 1 relevant labels
        // ranked at or above it.
        let sum: f64 = relevant_ranks
            .iter()
            .enumerate()
            .map(|(i, &r)| (i + 1) as f64 / r as f64)
            .sum();
        total += sum / relevant_ranks.len() as f64;
        used += 1;
    }
    Ok((total, used))
}

/// Mean over relevant labels of the fraction of labels ranked at or above
/// them that are relevant, averaged over instances with non-empty truth.
pub fn average_precision(truths: &[LabelSet], rankings: &[Vec<usize>]) -> Result<f64> {
    let (total, used) = avg_precision_terms(truths, rankings)?;
    if used == 0 {
        return Err(Error::UndefinedMetric("avg_precision"));
    }
    Ok(total / used as f64)
}

/// All five measures over precomputed predictions.
pub fn evaluate_predictions(truths: &[LabelSet], preds: &[Prediction]) -> Result<EvaluationReport> {
    check_pairs(truths, preds.len())?;
    let bips: Vec<LabelSet> = preds.iter().map(|p| p.bipartition.clone()).collect();
    let ranks: Vec<Vec<usize>> = preds.iter().map(|p| p.ranks.clone()).collect();
    let (_, rl_used) = ranking_loss_terms(truths, &ranks)?;
    let (_, ap_used) = avg_precision_terms(truths, &ranks)?;
    Ok(EvaluationReport {
        accuracy: accuracy(truths, &bips)?,
        hamming_loss: hamming_loss(truths, &bips)?,
        one_error: one_error(truths, &ranks)?,
        ranking_loss: ranking_loss(truths, &ranks)?,
        avg_precision: average_precision(truths, &ranks)?,
        n_evaluated: truths.len(),
        n_skipped_ranking: truths.len() - rl_used,
        n_skipped_avg_precision: truths.len() - ap_used,
    })
}

/// Scores every test row with `model`, thresholds at `t`, and reports all
/// five measures.
pub fn evaluate(model: &dyn MultiLabelModel, test: &MLDataset, t: f64) -> Result<EvaluationReport> {
    if test.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if model.n_labels() != test.n_labels() {
        return Err(Error::UniverseMismatch {
            left: model.n_labels(),
            right: test.n_labels(),
        });
    }
    let preds = test
        .rows()
        .par_iter()
        .map(|(x, _)| model.predict(x, t))
        .collect::<Result<Vec<_>>>()?;
    let truths: Vec<LabelSet> = test.labelsets().cloned().collect();
    evaluate_predictions(&truths, &preds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(m: usize, idx: &[usize]) -> LabelSet {
        LabelSet::from_indices(m, idx.iter().copied()).unwrap()
    }

    #[test]
    fn accuracy_examples() {
        let y = vec![s(3, &[0]), s(3, &[1, 2])];
        assert_eq!(accuracy(&y, &y).unwrap(), 1.0);
        let disjoint = vec![s(3, &[1]), s(3, &[0])];
        assert_eq!(accuracy(&y, &disjoint).unwrap(), 0.0);
        let single = accuracy(&[s(4, &[1, 2])], &[s(4, &[2, 3])]).unwrap();
        assert!((single - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(accuracy(&[s(2, &[])], &[s(2, &[])]).unwrap(), 1.0);
    }

    #[test]
    fn hamming_examples() {
        let y = vec![s(3, &[0]), s(3, &[1, 2])];
        assert_eq!(hamming_loss(&y, &y).unwrap(), 0.0);
        let comp: Vec<LabelSet> = y.iter().map(LabelSet::complement).collect();
        assert_eq!(hamming_loss(&y, &comp).unwrap(), 1.0);
        let z = vec![s(3, &[0, 1]), s(3, &[1])];
        assert!((hamming_loss(&y, &z).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn one_error_examples() {
        let y = vec![s(3, &[0]), s(3, &[1]), s(3, &[2]), s(3, &[0, 2])];
        let good = vec![vec![1, 2, 3], vec![2, 1, 3], vec![3, 2, 1], vec![2, 3, 1]];
        assert_eq!(one_error(&y, &good).unwrap(), 0.0);
        let bad = vec![vec![2, 1, 3], vec![1, 2, 3], vec![1, 2, 3], vec![3, 1, 2]];
        assert_eq!(one_error(&y, &bad).unwrap(), 1.0);
        let one_miss = vec![vec![1, 2, 3], vec![2, 1, 3], vec![3, 2, 1], vec![3, 1, 2]];
        assert_eq!(one_error(&y, &one_miss).unwrap(), 0.25);
        // Full truth never misses; empty truth always does.
        assert_eq!(
            one_error(&[s(2, &[0, 1]), s(2, &[])], &[vec![2, 1], vec![1, 2]]).unwrap(),
            0.5
        );
    }

    #[test]
    fn ranking_loss_examples() {
        let y = vec![s(4, &[0, 1])];
        assert_eq!(ranking_loss(&y, &[vec![1, 2, 3, 4]]).unwrap(), 0.0);
        assert_eq!(ranking_loss(&y, &[vec![3, 4, 1, 2]]).unwrap(), 1.0);
        assert_eq!(ranking_loss(&[s(3, &[0])], &[vec![2, 1, 3]]).unwrap(), 0.5);
        assert_eq!(
            ranking_loss(&[s(2, &[]), s(2, &[0, 1])], &[vec![1, 2], vec![1, 2]]),
            Err(Error::UndefinedMetric("ranking_loss"))
        );
    }

    #[test]
    fn average_precision_examples() {
        assert_eq!(average_precision(&[s(3, &[0, 2])], &[vec![2, 3, 1]]).unwrap(), 1.0);
        assert_eq!(average_precision(&[s(3, &[1])], &[vec![1, 2, 3]]).unwrap(), 0.5);
        let v = average_precision(&[s(3, &[0, 2])], &[vec![1, 2, 3]]).unwrap();
        assert!((v - 5.0 / 6.0).abs() < 1e-15);
        assert!(average_precision(&[s(3, &[])], &[vec![1, 2, 3]]).is_err());
    }

    #[test]
    fn malformed_inputs() {
        let y = vec![s(3, &[0])];
        assert!(one_error(&y, &[vec![1, 1, 2]]).is_err());
        assert!(one_error(&y, &[vec![1, 2]]).is_err());
        assert!(one_error(&y, &[vec![0, 1, 2]]).is_err());
        assert!(accuracy(&y, &[]).is_err());
        assert!(accuracy(&[], &[]).is_err());
        assert!(hamming_loss(&y, &[s(4, &[0])]).is_err());
    }
}
