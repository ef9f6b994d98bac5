//! The benchmark harness as a library: a JSON run config with a transform x
//! learner grid plus an ensemble, reported as markdown and CSV.
//!
//! The same config, with a `dataset` and a label spec added, runs from the
//! command line: `mullab benchmark --config run.json --format csv`.

use mullab::bench::{run_benchmark, RunConfig};
use mullab::synthetic::{generate, SyntheticSpec};

const CONFIG: &str = r#"{
    "grid": {
        "transforms": [{"kind": "br"}, {"kind": "rakel"}, {"kind": "ps", "p": 2, "b": 2}],
        "learners": ["NB", "k-NN", "J48"]
    },
    "experiments": [
        {"name": "EN-MLC", "ensemble": {}},
        {"name": "EN-MLC mean", "ensemble": {"rule": "mean", "sample_ratio": 0.8}}
    ],
    "seed": 17,
    "workers": 4
}"#;

fn main() -> mullab::Result<()> {
    let cfg = RunConfig::from_json(CONFIG)?;
    let (train, test) = generate(&SyntheticSpec::default().with_seed(17))?;
    let report = run_benchmark(&cfg, &train, &test)?;
    println!("{}", report.to_markdown());
    println!("{}", report.to_csv());
    Ok(())
}
