//! Helpers shared by the integration test targets: ARFF golden rendering,
//! brute-force metric oracles and benchmark dataset lookup.
#![allow(dead_code)]

use std::path::{Path, PathBuf};

use mullab::data::{AttributeKind, AttributeValue, MLDataset};
use mullab::io::{load_arff, parse_arff, read_label_file, LabelSpec, RawTable};
use mullab::rng::SeededRng;

pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

/// Text form of a parsed table, one line per attribute and row. Numbers use
/// Rust's shortest round-trip formatting, so equal text means equal bits.
pub fn render_table(t: &RawTable) -> String {
    let mut out = format!("relation {}\n", t.relation_name);
    for a in &t.attributes {
        match &a.kind {
            AttributeKind::Numeric => out.push_str(&format!("attribute {} numeric\n", a.name)),
            AttributeKind::Nominal(v) => out.push_str(&format!("attribute {} {{{}}}\n", a.name, v.join(","))),
        }
    }
    for row in &t.rows {
        let cells: Vec<String> = row
            .iter()
            .zip(&t.attributes)
            .map(|(v, a)| match (v, &a.kind) {
                (AttributeValue::Missing, _) => "?".to_string(),
                (AttributeValue::Numeric(x), _) => format!("{x:?}"),
                (AttributeValue::Nominal(i), AttributeKind::Nominal(names)) => names[*i as usize].clone(),
                (AttributeValue::Nominal(i), _) => format!("#{i}"),
            })
            .collect();
        out.push_str(&format!("row {}\n", cells.join(" | ")));
    }
    out
}

/// Parses every `*.arff` golden fixture and compares against its
/// `.expected` file. Returns `(fixture, mismatch description)` per case.
pub fn golden_cases() -> Vec<(String, Option<String>)> {
    let dir = fixtures_dir().join("arff");
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir)
        .expect("fixture dir")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "arff"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            let expected = std::fs::read_to_string(p.with_extension("expected")).unwrap();
            let got = match parse_arff(&text) {
                Ok(t) => render_table(&t),
                Err(e) => format!("error {e}\n"),
            };
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            let diff = (got != expected).then(|| format!("expected:\n{expected}got:\n{got}"));
            (name, diff)
        })
        .collect()
}

// Brute-force metrics over plain boolean matrices. `ranks[j]` is the rank of
// label j, 1 being best.

pub fn oracle_accuracy(truth: &[Vec<bool>], pred: &[Vec<bool>]) -> f64 {
    let mut total = 0.0;
    for (y, z) in truth.iter().zip(pred) {
        let both = y.iter().zip(z).filter(|(a, b)| **a && **b).count();
        let either = y.iter().zip(z).filter(|(a, b)| **a || **b).count();
        total += if either == 0 { 1.0 } else { both as f64 / either as f64 };
    }
    total / truth.len() as f64
}

pub fn oracle_hamming(truth: &[Vec<bool>], pred: &[Vec<bool>]) -> f64 {
    let m = truth[0].len() as f64;
    let wrong: usize = truth
        .iter()
        .zip(pred)
        .map(|(y, z)| y.iter().zip(z).filter(|(a, b)| a != b).count())
        .sum();
    wrong as f64 / (m * truth.len() as f64)
}

pub fn oracle_one_error(truth: &[Vec<bool>], ranks: &[Vec<usize>]) -> f64 {
    let mut misses = 0;
    for (y, r) in truth.iter().zip(ranks) {
        for j in 0..y.len() {
            if r[j] == 1 && !y[j] {
                misses += 1;
            }
        }
    }
    misses as f64 / truth.len() as f64
}

/// `None` when every instance is skipped.
pub fn oracle_ranking_loss(truth: &[Vec<bool>], ranks: &[Vec<usize>]) -> Option<f64> {
    let mut total = 0.0;
    let mut used = 0;
    for (y, r) in truth.iter().zip(ranks) {
        let mut pairs = 0;
        let mut bad = 0;
        for a in 0..y.len() {
            for b in 0..y.len() {
                if y[a] && !y[b] {
                    pairs += 1;
                    if r[a] > r[b] {
                        bad += 1;
                    }
                }
            }
        }
        if pairs > 0 {
            total += bad as f64 / pairs as f64;
            used += 1;
        }
    }
    (used > 0).then(|| total / used as f64)
}

pub fn oracle_avg_precision(truth: &[Vec<bool>], ranks: &[Vec<usize>]) -> Option<f64> {
    let mut total = 0.0;
    let mut used = 0;
    for (y, r) in truth.iter().zip(ranks) {
        let relevant: Vec<usize> = (0..y.len()).filter(|&j| y[j]).collect();
        if relevant.is_empty() {
            continue;
        }
        let mut sum = 0.0;
        for &a in &relevant {
            let above = relevant.iter().filter(|&&b| r[b] <= r[a]).count();
            sum += above as f64 / r[a] as f64;
        }
        total += sum / relevant.len() as f64;
        used += 1;
    }
    (used > 0).then(|| total / used as f64)
}

pub struct MetricCase {
    pub truth: Vec<Vec<bool>>,
    pub pred: Vec<Vec<bool>>,
    pub ranks: Vec<Vec<usize>>,
}

/// Random case with `N <= 20`, `M <= 8`; rankings are uniform permutations.
pub fn random_case(rng: &mut SeededRng) -> MetricCase {
    let n = 1 + rng.below(20);
    let m = 1 + rng.below(8);
    let bits = |rng: &mut SeededRng| (0..m).map(|_| rng.below(2) == 1).collect::<Vec<bool>>();
    let truth = (0..n).map(|_| bits(rng)).collect();
    let pred = (0..n).map(|_| bits(rng)).collect();
    let ranks = (0..n)
        .map(|_| rng.permutation(m).into_iter().map(|p| p + 1).collect())
        .collect();
    MetricCase { truth, pred, ranks }
}

/// Directory holding the public benchmark datasets: `MULLAB_DATA_DIR`, else
/// `data/` at the workspace root.
pub fn data_dir() -> PathBuf {
    std::env::var_os("MULLAB_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data"))
}

/// Loads `<name>.arff`, or `<name>-train.arff` + `<name>-test.arff`
/// concatenated. Labels come from `<name>.xml` when present, else the last
/// `trailing` attributes.
pub fn load_benchmark(name: &str, trailing: usize) -> Result<MLDataset, String> {
    let dir = data_dir();
    let xml = dir.join(format!("{name}.xml"));
    let spec = if xml.exists() {
        LabelSpec::Names(read_label_file(&xml).map_err(|e| e.to_string())?)
    } else {
        LabelSpec::TrailingCount(trailing)
    };
    let whole = dir.join(format!("{name}.arff"));
    if whole.exists() {
        return load_arff(&whole, &spec).map_err(|e| e.to_string());
    }
    let (train, test) = (
        dir.join(format!("{name}-train.arff")),
        dir.join(format!("{name}-test.arff")),
    );
    if train.exists() && test.exists() {
        let a = load_arff(&train, &spec).map_err(|e| e.to_string())?;
        let b = load_arff(&test, &spec).map_err(|e| e.to_string())?;
        return a.concat(&b).map_err(|e| e.to_string());
    }
    Err(format!(
        "{name}.arff (or {name}-train.arff + {name}-test.arff) not found in {}",
        dir.display()
    ))
}
