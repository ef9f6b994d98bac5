//! EN-MLC: ten pruned-sets members cycling through the learner presets, each
//! trained on its own 67% row sample and merged by majority vote. Compared
//! with the five single label powerset models and with other merge rules.

use mullab::ensemble::{enmlc_fit, CombinationRule, EnsembleSpec};
use mullab::learners::Preset;
use mullab::metrics::{evaluate, EvaluationReport};
use mullab::synthetic::{generate, SyntheticSpec};
use mullab::transforms::TransformSpec;

fn show(name: &str, r: &EvaluationReport) {
    println!(
        "{name:<22} acc {:.3}  HL {:.3}  1-err {:.3}  RL {:.3}  AP {:.3}",
        r.accuracy, r.hamming_loss, r.one_error, r.ranking_loss, r.avg_precision
    );
}

fn main() -> mullab::Result<()> {
    let (train, test) = generate(&SyntheticSpec::default().with_seed(4))?;

    for p in Preset::ALL {
        let model = TransformSpec::Lp.fit(&train, &p.spec(4))?;
        show(&format!("LP {p}"), &evaluate(model.as_ref(), &test, 0.5)?);
    }

    let spec = EnsembleSpec::default().with_seed(4);
    let ens = enmlc_fit(&train, &spec)?;
    show("EN-MLC majority vote", &evaluate(&ens, &test, spec.threshold)?);
    println!("member 0 trained on {} of {} rows", ens.samples()[0].len(), train.len());

    for rule in [CombinationRule::Mean, CombinationRule::Max, CombinationRule::Min] {
        let spec = EnsembleSpec { rule, ..spec.clone() };
        show(
            &format!("EN-MLC {rule:?}"),
            &evaluate(&enmlc_fit(&train, &spec)?, &test, 0.5)?,
        );
    }

    // Weighted vote: trust the naive Bayes and k-NN members twice as much.
    let weights = (0..spec.q()).map(|i| if i % 5 < 2 { 2.0 } else { 1.0 }).collect();
    let weighted = EnsembleSpec {
        rule: CombinationRule::WeightedMajorityVote,
        weights: Some(weights),
        ..spec.clone()
    };
    show(
        "EN-MLC weighted vote",
        &evaluate(&enmlc_fit(&train, &weighted)?, &test, 0.5)?,
    );
    Ok(())
}
