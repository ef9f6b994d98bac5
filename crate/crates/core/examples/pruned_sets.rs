//! Pruned sets: rare labelsets are pruned and their rows reintroduced under
//! frequent subsets before label powerset training.

use mullab::data::{FeatureVector, LabelSet, MLDataset, Schema};
use mullab::learners::Preset;
use mullab::metrics::evaluate;
use mullab::synthetic::{generate, SyntheticSpec};
use mullab::transforms::{lp_fit, prune_and_reintroduce, ps_fit, PruneSpec};

fn main() -> mullab::Result<()> {
    // {A} x3, {B} x3, {A,B} x1: the lone {A,B} row becomes one {A} and one {B} row.
    let rows = [vec![0], vec![0], vec![0], vec![1], vec![1], vec![1], vec![0, 1]]
        .into_iter()
        .enumerate()
        .map(|(i, y)| Ok((FeatureVector::numeric(&[i as f64]), LabelSet::from_indices(2, y)?)))
        .collect::<mullab::Result<Vec<_>>>()?;
    let toy = MLDataset::new(Schema::numeric(1, 2), rows)?;
    let (rewritten, summary) = prune_and_reintroduce(&toy, &PruneSpec::default())?;
    println!("{summary:?}");
    for (x, y) in rewritten.rows() {
        println!("  {:?} -> {:?}", x.values, y);
    }

    let (train, test) = generate(&SyntheticSpec::default().with_seed(2))?;
    let learner = Preset::J48.spec(0);
    let lp = evaluate(&lp_fit(&train, &learner)?, &test, 0.5)?;
    println!("LP J48 accuracy {:.3}", lp.accuracy);
    for (p, b) in [(2, 1), (2, 2), (3, 2), (5, 3)] {
        let model = ps_fit(&train, &learner, &PruneSpec { p, b })?;
        let r = evaluate(&model, &test, 0.5)?;
        println!(
            "PS p={p} b={b}: {} classes, {:?}, accuracy {:.3}",
            model.lp().labelsets().len(),
            model.summary(),
            r.accuracy
        );
    }
    Ok(())
}
