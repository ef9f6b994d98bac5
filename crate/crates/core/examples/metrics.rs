//! The five evaluation measures on a hand-sized example.
//!
//! Rankings list the rank of each label (1 = most relevant); bipartitions
//! are the labels scored at or above the threshold.

use mullab::data::LabelSet;
use mullab::ensemble::Prediction;
use mullab::metrics::{accuracy, average_precision, evaluate_predictions, hamming_loss, one_error, ranking_loss};

fn set(m: usize, labels: &[usize]) -> LabelSet {
    LabelSet::from_indices(m, labels.iter().copied()).expect("labels in range")
}

fn main() -> mullab::Result<()> {
    let truths = vec![set(4, &[0, 1]), set(4, &[2]), set(4, &[1, 3]), set(4, &[])];
    let scores = vec![
        vec![0.9, 0.6, 0.2, 0.1],
        vec![0.3, 0.1, 0.8, 0.4],
        vec![0.7, 0.5, 0.5, 0.2],
        vec![0.4, 0.1, 0.2, 0.3],
    ];

    let preds: Vec<Prediction> = scores
        .into_iter()
        .map(|s| Prediction::from_scores(s, 0.5))
        .collect::<mullab::Result<_>>()?;
    for (i, p) in preds.iter().enumerate() {
        println!(
            "row {i}: predicted {:?}, ranks {:?}, truth {:?}",
            p.bipartition, p.ranks, truths[i]
        );
    }

    let bips: Vec<LabelSet> = preds.iter().map(|p| p.bipartition.clone()).collect();
    let ranks: Vec<Vec<usize>> = preds.iter().map(|p| p.ranks.clone()).collect();
    println!("accuracy          {:.4}", accuracy(&truths, &bips)?);
    println!("hamming loss      {:.4}", hamming_loss(&truths, &bips)?);
    println!("one-error         {:.4}", one_error(&truths, &ranks)?);
    println!("ranking loss      {:.4}", ranking_loss(&truths, &ranks)?);
    println!("average precision {:.4}", average_precision(&truths, &ranks)?);

    // The same numbers in one report, with the rows each ranking measure skipped.
    let report = evaluate_predictions(&truths, &preds)?;
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    Ok(())
}
