//! RAKEL: label powerset models over random k-subsets of the labels, with
//! votes averaged per label.

use mullab::learners::Preset;
use mullab::metrics::evaluate;
use mullab::synthetic::{generate, SyntheticSpec};
use mullab::transforms::{lp_fit, rakel_fit, RakelSpec};

fn main() -> mullab::Result<()> {
    let (train, test) = generate(&SyntheticSpec::default().with_seed(11))?;
    let learner = Preset::Knn.spec(0);

    // Defaults: m = 2M members of size k = min(3, M).
    let model = rakel_fit(&train, &learner, &RakelSpec::default())?;
    println!("{} members:", model.members().len());
    for (labels, lp) in model.members() {
        println!("  labels {labels:?}, {} LP classes", lp.labelsets().len());
    }
    let r = evaluate(&model, &test, 0.5)?;
    println!(
        "RAKEL k-NN: accuracy {:.3}, hamming loss {:.3}",
        r.accuracy, r.hamming_loss
    );

    // With k-NN every member scores a label by the same neighbour vote, so k
    // barely matters; naive Bayes shows the effect of the subset size.
    let nb = Preset::NaiveBayes.spec(0);
    println!("RAKEL NB, 12 members:");
    for k in 1..=train.n_labels() {
        let r = evaluate(&rakel_fit(&train, &nb, &RakelSpec::new(12, k, 5))?, &test, 0.5)?;
        println!(
            "  k = {k}: accuracy {:.3}, ranking loss {:.3}",
            r.accuracy, r.ranking_loss
        );
    }

    // A single member spanning every label is plain label powerset.
    let full = rakel_fit(&train, &learner, &RakelSpec::new(1, train.n_labels(), 0))?;
    let lp = lp_fit(&train, &learner)?;
    let same = evaluate(&full, &test, 0.5)? == evaluate(&lp, &test, 0.5)?;
    println!("RAKEL(m = 1, k = M) matches LP: {same}");
    Ok(())
}
