//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria that need the public benchmark datasets report
//! `FAIL (blocked: ...)` when the files are absent from `MULLAB_DATA_DIR`.
//! Those lines do not fail the target unless `MULLAB_ACCEPTANCE_STRICT=1`;
//! a criterion that ran and missed its target always does.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use mullab::bench::ExperimentConfig;
use mullab::data::{dataset_stats, Attribute, FeatureVector, LabelSet, MLDataset};
use mullab::ensemble::{combine, enmlc_fit, CombinationRule, EnsembleSpec};
use mullab::io::{dataset_to_table, split_dataset, write_arff, SplitSpec};
use mullab::learners::{fit, Preset};
use mullab::metrics::{accuracy, average_precision, evaluate, hamming_loss, one_error, ranking_loss};
use mullab::rng::SeededRng;
use mullab::synthetic::{generate, SyntheticSpec};
use mullab::transforms::{PruneSpec, RakelSpec, TransformSpec};

enum Outcome {
    Pass(String),
    Fail(String),
    Blocked(String),
}

struct Criterion {
    id: u8,
    title: &'static str,
    budget: Option<Duration>,
    run: fn() -> Outcome,
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn within(x: f64, lo: f64, hi: f64) -> bool {
    (lo..=hi).contains(&x)
}

fn dataset_statistics() -> Outcome {
    // (name, trailing label count, instances, instance tolerance, lcard, lden, lcard tolerance, lden tolerance)
    let targets = [
        ("scene", 6, 2407, 0, 1.08, 0.18, 0.02, 0.02),
        ("yeast", 14, 2417, 0, 4.23, 0.302, 0.02, 0.02),
        ("emotions", 6, 592, 2, 1.827, 1.827 / 6.0, 0.05, 1.0),
    ];
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, q, n, n_tol, lcard, lden, lcard_tol, lden_tol) in targets {
        let d = match load_benchmark(name, q) {
            Ok(d) => d,
            Err(e) => return Outcome::Blocked(format!("data not found: {e}")),
        };
        let s = match dataset_stats(&d) {
            Ok(s) => s,
            Err(e) => return Outcome::Fail(format!("{name}: {e}")),
        };
        let good = s.n_labels == q
            && s.n_instances.abs_diff(n) <= n_tol
            && close(s.lcard, lcard, lcard_tol)
            && close(s.lden, lden, lden_tol);
        ok &= good;
        notes.push(format!(
            "{name} {}x{} lcard {:.3} lden {:.3}",
            s.n_instances, s.n_labels, s.lcard, s.lden
        ));
    }
    let msg = notes.join("; ");
    if ok {
        Outcome::Pass(msg)
    } else {
        Outcome::Fail(msg)
    }
}

fn metric_oracles() -> Outcome {
    let mut rng = SeededRng::new(2024);
    let mut worst: f64 = 0.0;
    for case_no in 0..1000 {
        let c = random_case(&mut rng);
        let y: Vec<LabelSet> = c.truth.iter().map(|r| LabelSet::from_bools(r)).collect();
        let z: Vec<LabelSet> = c.pred.iter().map(|r| LabelSet::from_bools(r)).collect();
        let pairs = [
            (accuracy(&y, &z).ok(), Some(oracle_accuracy(&c.truth, &c.pred))),
            (hamming_loss(&y, &z).ok(), Some(oracle_hamming(&c.truth, &c.pred))),
            (one_error(&y, &c.ranks).ok(), Some(oracle_one_error(&c.truth, &c.ranks))),
            (ranking_loss(&y, &c.ranks).ok(), oracle_ranking_loss(&c.truth, &c.ranks)),
            (
                average_precision(&y, &c.ranks).ok(),
                oracle_avg_precision(&c.truth, &c.ranks),
            ),
        ];
        for (got, want) in pairs {
            match (got, want) {
                (Some(a), Some(b)) => worst = worst.max((a - b).abs()),
                (None, None) => {}
                _ => return Outcome::Fail(format!("case {case_no}: defined on one side only")),
            }
        }
    }
    let msg = format!("1000 cases, max |diff| {worst:.1e}");
    if worst <= 1e-12 {
        Outcome::Pass(msg)
    } else {
        Outcome::Fail(msg)
    }
}

fn max_score_gap(
    a: &dyn mullab::transforms::MultiLabelModel,
    b: &dyn mullab::transforms::MultiLabelModel,
    test: &MLDataset,
) -> f64 {
    test.features()
        .flat_map(|x| {
            let (sa, sb) = (a.predict_scores(x).unwrap(), b.predict_scores(x).unwrap());
            sa.into_iter().zip(sb).map(|(p, q)| (p - q).abs()).collect::<Vec<_>>()
        })
        .fold(0.0, f64::max)
}

fn degeneracies() -> Outcome {
    let (train, test) = generate(&SyntheticSpec::default().with_seed(11)).unwrap();
    let m = train.n_labels();
    let mut gaps = Vec::new();
    for preset in [Preset::NaiveBayes, Preset::Knn, Preset::J48] {
        let learner = preset.spec(5);
        let lp = TransformSpec::Lp.fit(&train, &learner).unwrap();
        let rakel = TransformSpec::Rakel(RakelSpec::new(1, m, 3))
            .fit(&train, &learner)
            .unwrap();
        let ps = TransformSpec::Ps(PruneSpec { p: 0, b: 2 })
            .fit(&train, &learner)
            .unwrap();
        gaps.push(("RAKEL(1,M)=LP", max_score_gap(rakel.as_ref(), lp.as_ref(), &test)));
        gaps.push(("PS(p=0)=LP", max_score_gap(ps.as_ref(), lp.as_ref(), &test)));

        let mut one = EnsembleSpec::homogeneous(1, TransformSpec::Lp, preset.into(), 8);
        one.sample_ratio = 1.0;
        one.rule = CombinationRule::Mean;
        let ens = enmlc_fit(&train, &one).unwrap();
        let member = TransformSpec::Lp.fit(&train, &one.member_learner(0)).unwrap();
        gaps.push(("EN-MLC(q=1)=member", max_score_gap(&ens, member.as_ref(), &test)));
    }

    let mut mean = EnsembleSpec::default().with_seed(21);
    mean.rule = CombinationRule::Mean;
    let mut weighted = mean.clone();
    weighted.rule = CombinationRule::WeightedMean;
    weighted.weights = Some(vec![2.5; weighted.q()]);
    let (a, b) = (enmlc_fit(&train, &mean).unwrap(), enmlc_fit(&train, &weighted).unwrap());
    gaps.push(("mean=uniform weighted_mean", max_score_gap(&a, &b, &test)));
    let mut rng = SeededRng::new(4);
    let members: Vec<Vec<f64>> = (0..7).map(|_| (0..m).map(|_| rng.unit()).collect()).collect();
    let plain = combine(&members, CombinationRule::Mean, None, 0.5).unwrap();
    let uniform = combine(&members, CombinationRule::WeightedMean, Some(&[0.3; 7]), 0.5).unwrap();
    let gap = plain
        .iter()
        .zip(&uniform)
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max);
    gaps.push(("mean=uniform weighted_mean", gap));

    let worst = gaps.iter().map(|g| g.1).fold(0.0, f64::max);
    let msg = format!("{} identities, max |diff| {worst:.1e}", gaps.len());
    match gaps.iter().find(|g| g.1 > 1e-12) {
        None => Outcome::Pass(msg),
        Some((name, gap)) => Outcome::Fail(format!("{name} off by {gap:.1e}; {msg}")),
    }
}

fn scene_anchor() -> Outcome {
    let d = match load_benchmark("scene", 6) {
        Ok(d) => d,
        Err(e) => return Outcome::Blocked(format!("data not found: {e}")),
    };
    let seed = 1;
    let (train, test) = match split_dataset(&d, &SplitSpec::counts(1588, 819, seed)) {
        Ok(parts) => parts,
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    let exp = ExperimentConfig::single(TransformSpec::Rakel(RakelSpec::default()), Preset::Knn);
    let report = match exp.fit(&train, seed).and_then(|m| evaluate(m.as_ref(), &test, 0.5)) {
        Ok(r) => r,
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    let msg = format!(
        "hamming_loss {:.3} in [0.08, 0.20], accuracy {:.3} in [0.45, 0.75]",
        report.hamming_loss, report.accuracy
    );
    if within(report.hamming_loss, 0.08, 0.20) && within(report.accuracy, 0.45, 0.75) {
        Outcome::Pass(msg)
    } else {
        Outcome::Fail(msg)
    }
}

fn ensemble_improvement() -> Outcome {
    let mut wins_per_run = Vec::new();
    for seed in 0..10 {
        let (train, test) = generate(&SyntheticSpec::default().with_seed(seed)).unwrap();
        let vals = |r: &mullab::metrics::EvaluationReport| [r.accuracy, r.hamming_loss, r.one_error, r.ranking_loss];
        let ens = enmlc_fit(&train, &EnsembleSpec::default().with_seed(seed)).unwrap();
        let e = vals(&evaluate(&ens, &test, 0.5).unwrap());
        let mut base = [0.0; 4];
        for preset in Preset::ALL {
            let lp = TransformSpec::Lp.fit(&train, &preset.spec(seed)).unwrap();
            let v = vals(&evaluate(lp.as_ref(), &test, 0.5).unwrap());
            for (b, x) in base.iter_mut().zip(v) {
                *b += x / 5.0;
            }
        }
        let wins = (e[0] > base[0]) as usize + (1..4).filter(|&i| e[i] < base[i]).count();
        wins_per_run.push(wins);
    }
    let good_runs = wins_per_run.iter().filter(|&&w| w >= 3).count();
    let msg = format!("{good_runs}/10 runs win >= 3 of 4 metrics (wins per run {wins_per_run:?})");
    if good_runs >= 7 {
        Outcome::Pass(msg)
    } else {
        Outcome::Fail(msg)
    }
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let (train, test) = generate(&SyntheticSpec::default().with_seed(6)).unwrap();
    let data = dir.path().join("synth.arff");
    std::fs::write(
        &data,
        write_arff(&dataset_to_table(&train.concat(&test).unwrap(), "synth")),
    )
    .unwrap();
    let cfg = dir.path().join("run.json");
    let text = format!(
        r#"{{"dataset": {data:?}, "trailing_labels": 6, "split": "200:100", "seed": 31,
            "grid": {{"transforms": [{{"kind": "br"}}, {{"kind": "lp"}}, {{"kind": "rakel"}}, {{"kind": "ps"}}]}},
            "experiments": [{{"name": "EN-MLC", "ensemble": {{}}}}]}}"#
    );
    std::fs::write(&cfg, text).unwrap();
    let run = |workers: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_mullab"))
            .args([
                "benchmark",
                "--config",
                cfg.to_str().unwrap(),
                "--format",
                "csv",
                "--workers",
                workers,
            ])
            .env_remove("MULLAB_SEED")
            .output()
            .unwrap();
        o.status.success().then_some(o.stdout)
    };
    let outputs: Vec<Option<Vec<u8>>> = ["1", "8", "1", "8"].into_iter().map(run).collect();
    let Some(first) = outputs[0].clone() else {
        return Outcome::Fail("benchmark run failed".into());
    };
    let rows = first.iter().filter(|&&b| b == b'\n').count() - 2;
    let msg = format!("{rows} experiments, 4 runs (workers 1, 8, 1, 8)");
    if outputs.iter().all(|o| o.as_ref() == Some(&first)) {
        Outcome::Pass(format!("{msg} byte-identical"))
    } else {
        Outcome::Fail(format!("{msg} differ"))
    }
}

fn reduced_error_pruning() -> Outcome {
    let mut pruned_something = 0;
    for seed in 0..50u64 {
        let mut rng = SeededRng::new(seed);
        let n = 40 + rng.below(120);
        let d = 1 + rng.below(5);
        let n_classes = 2 + rng.below(3);
        let noise = 0.1 + 0.3 * rng.unit();
        let attributes: Vec<Attribute> = (0..d).map(|j| Attribute::numeric(format!("x{j}"))).collect();
        let mut x = Vec::with_capacity(n);
        let mut y = Vec::with_capacity(n);
        for _ in 0..n {
            let v: Vec<f64> = (0..d).map(|_| rng.normal()).collect();
            let c = if rng.unit() < noise {
                rng.below(n_classes)
            } else {
                ((v[0] * 1.5).floor().rem_euclid(n_classes as f64)) as usize
            };
            x.push(FeatureVector::numeric(&v));
            y.push(c);
        }
        let refs: Vec<&FeatureVector> = x.iter().collect();
        let model = match fit(&Preset::RepTree.spec(seed), &attributes, &refs, &y) {
            Ok(m) => m,
            Err(e) => return Outcome::Fail(format!("fixture {seed}: {e}")),
        };
        let tree = model.as_tree().expect("tree preset");
        let Some(report) = tree.prune_report() else {
            return Outcome::Fail(format!("fixture {seed}: no pruning report"));
        };
        let recount = report
            .prune_rows
            .iter()
            .filter(|&&i| tree.predict_class(&x[i]).unwrap() != y[i])
            .count();
        if report.errors_after > report.errors_before || recount != report.errors_after {
            return Outcome::Fail(format!(
                "fixture {seed}: before {} after {} recount {recount}",
                report.errors_before, report.errors_after
            ));
        }
        pruned_something += (report.errors_after < report.errors_before) as usize;
    }
    Outcome::Pass(format!("50 fixtures, strict improvement in {pruned_something}"))
}

fn parser_golden() -> Outcome {
    let cases = golden_cases();
    let bad: Vec<&str> = cases.iter().filter(|c| c.1.is_some()).map(|c| c.0.as_str()).collect();
    if cases.len() == 12 && bad.is_empty() {
        Outcome::Pass("12 fixtures match".into())
    } else {
        Outcome::Fail(format!("{} fixtures, mismatched: {bad:?}", cases.len()))
    }
}

fn main() {
    let criteria = [
        Criterion {
            id: 1,
            title: "dataset statistics",
            budget: Some(Duration::from_secs(10)),
            run: dataset_statistics,
        },
        Criterion {
            id: 2,
            title: "metric oracle equivalence",
            budget: Some(Duration::from_secs(30)),
            run: metric_oracles,
        },
        Criterion {
            id: 3,
            title: "degeneracy identities",
            budget: None,
            run: degeneracies,
        },
        Criterion {
            id: 4,
            title: "scene RAKEL k-NN anchor",
            budget: Some(Duration::from_secs(300)),
            run: scene_anchor,
        },
        Criterion {
            id: 5,
            title: "ensemble improvement",
            budget: Some(Duration::from_secs(180)),
            run: ensemble_improvement,
        },
        Criterion {
            id: 6,
            title: "determinism across workers",
            budget: None,
            run: determinism,
        },
        Criterion {
            id: 7,
            title: "reduced-error pruning",
            budget: None,
            run: reduced_error_pruning,
        },
        Criterion {
            id: 8,
            title: "parser golden suite",
            budget: None,
            run: parser_golden,
        },
    ];
    let strict = std::env::var("MULLAB_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let mut failed = 0;
    let mut blocked = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let over = c.budget.is_some_and(|b| elapsed > b);
        let timing = match c.budget {
            Some(b) => format!("{:.2}s of {}s", elapsed.as_secs_f64(), b.as_secs()),
            None => format!("{:.2}s", elapsed.as_secs_f64()),
        };
        let line = match outcome {
            Outcome::Pass(msg) if !over => format!("PASS {}. {}: {msg} [{timing}]", c.id, c.title),
            Outcome::Pass(msg) => {
                failed += 1;
                format!("FAIL {}. {}: {msg} [over budget {timing}]", c.id, c.title)
            }
            Outcome::Fail(msg) => {
                failed += 1;
                format!("FAIL {}. {}: {msg} [{timing}]", c.id, c.title)
            }
            Outcome::Blocked(msg) => {
                blocked += 1;
                format!("FAIL {}. {}: (blocked: {msg}) [{timing}]", c.id, c.title)
            }
        };
        println!("{line}");
    }
    println!(
        "acceptance: {} passed, {failed} failed, {blocked} blocked",
        criteria.len() - failed - blocked
    );
    if failed > 0 || (strict && blocked > 0) {
        std::process::exit(1);
    }
}
