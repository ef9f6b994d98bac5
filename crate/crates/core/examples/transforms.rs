//! Binary relevance against label powerset on correlated synthetic labels,
//! across the five learner presets.

use mullab::learners::Preset;
use mullab::metrics::evaluate;
use mullab::synthetic::{generate, label_correlations, SyntheticSpec};
use mullab::transforms::{br_fit, lp_fit, MultiLabelModel};

fn main() -> mullab::Result<()> {
    let (train, test) = generate(&SyntheticSpec::default().with_seed(3))?;
    let corr = label_correlations(&train);
    println!("label 0/1 correlation in train: {:.2}", corr[0][1]);

    println!(
        "{:<10} {:>8} {:>8} {:>8} {:>8}",
        "learner", "BR acc", "BR HL", "LP acc", "LP HL"
    );
    for preset in Preset::ALL {
        let spec = preset.spec(0);
        let br = br_fit(&train, &spec)?;
        let lp = lp_fit(&train, &spec)?;
        let (rb, rl) = (evaluate(&br, &test, 0.5)?, evaluate(&lp, &test, 0.5)?);
        println!(
            "{:<10} {:>8.3} {:>8.3} {:>8.3} {:>8.3}",
            preset.to_string(),
            rb.accuracy,
            rb.hamming_loss,
            rl.accuracy,
            rl.hamming_loss
        );
    }

    // LP only ever predicts labelsets it has seen; BR can invent new ones.
    let lp = lp_fit(&train, &Preset::NaiveBayes.spec(0))?;
    println!("LP classes: {} distinct training labelsets", lp.labelsets().len());
    let x = &test.rows()[0].0;
    println!(
        "scores for the first test row: BR {:?}",
        round(&br_fit(&train, &Preset::NaiveBayes.spec(0))?.predict_scores(x)?)
    );
    println!("                               LP {:?}", round(&lp.predict_scores(x)?));
    Ok(())
}

fn round(v: &[f64]) -> Vec<f64> {
    v.iter().map(|s| (s * 1000.0).round() / 1000.0).collect()
}
