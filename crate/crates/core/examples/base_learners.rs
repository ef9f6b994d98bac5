//! The single-label learners behind every transformation: k-NN, Gaussian
//! naive Bayes and decision trees, including reduced-error pruning.

use mullab::data::{Attribute, FeatureVector};
use mullab::learners::{fit, Distance, LearnerSpec, Preset};
use mullab::rng::SeededRng;

fn main() -> mullab::Result<()> {
    // Two noisy Gaussian blobs in 2-D.
    let mut rng = SeededRng::new(7);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for i in 0..120 {
        let class = i % 2;
        let centre = if class == 0 { -1.0 } else { 1.0 };
        xs.push(FeatureVector::numeric(&[centre + rng.normal(), centre + rng.normal()]));
        ys.push(class);
    }
    let attrs = vec![Attribute::numeric("a"), Attribute::numeric("b")];
    let (train_x, test_x) = xs.split_at(80);
    let (train_y, test_y) = ys.split_at(80);
    let train_refs: Vec<&FeatureVector> = train_x.iter().collect();

    let mut specs: Vec<(String, LearnerSpec)> = Preset::ALL.iter().map(|p| (p.to_string(), p.spec(1))).collect();
    specs.push((
        "1-NN manhattan".into(),
        LearnerSpec::Knn {
            k: 1,
            distance: Distance::Manhattan,
        },
    ));

    for (name, spec) in &specs {
        let model = fit(spec, &attrs, &train_refs, train_y)?;
        let mut correct = 0;
        for (x, &y) in test_x.iter().zip(test_y) {
            if model.predict_dist(x)?.argmax() == y {
                correct += 1;
            }
        }
        print!("{name:<16} test accuracy {:.3}", correct as f64 / test_x.len() as f64);
        if let Some(tree) = model.as_tree() {
            print!("  nodes {}", tree.n_nodes());
            if let Some(r) = tree.prune_report() {
                print!(
                    "  pruning fold errors {} -> {} on {} rows",
                    r.errors_before,
                    r.errors_after,
                    r.prune_rows.len()
                );
            }
        }
        println!();
    }

    let nb = fit(&Preset::NaiveBayes.spec(0), &attrs, &train_refs, train_y)?;
    let p = nb.predict_dist(&FeatureVector::numeric(&[0.2, -0.1]))?;
    println!("naive Bayes posterior at (0.2, -0.1): {:?}", p.probs());
    Ok(())
}
