//! Benchmark harness: JSON run configuration, the experiment grid runner and
//! report emission in markdown, CSV or JSON.
//!
//! A run loads one dataset (or a train/test file pair), splits it with the
//! run seed, trains every experiment on the train part and evaluates it on
//! the test part. Experiments run on a bounded rayon pool; results are
//! collected in declaration order so reports do not depend on the pool size.

mod report;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use report::{BenchReport, ExperimentRow, MetricSummary};

use crate::data::MLDataset;
use crate::ensemble::{enmlc_fit, EnsembleSpec, LearnerChoice, Prediction};
use crate::error::{Error, Result};
use crate::io::{load_arff, read_label_file, split_dataset, LabelSpec, SplitSpec};
use crate::learners::Preset;
use crate::metrics::{evaluate, evaluate_predictions, EvaluationReport};
use crate::rng::derive_seed;
use crate::transforms::{MultiLabelModel, PruneSpec, RakelSpec, TransformSpec};

/// Stream of the run seed that feeds model randomness (the split uses the
/// run seed itself).
const MODEL_STREAM: u64 = 1;

/// Train/test split given as `ntrain:ntest` or a train ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SplitRepr", into = "SplitRepr")]
pub enum SplitArg {
    Counts { train: usize, test: usize },
    Ratio(f64),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum SplitRepr {
    Ratio(f64),
    Text(String),
}

impl TryFrom<SplitRepr> for SplitArg {
    type Error = Error;

    fn try_from(r: SplitRepr) -> Result<Self> {
        match r {
            SplitRepr::Ratio(v) => SplitArg::ratio(v),
            SplitRepr::Text(s) => s.parse(),
        }
    }
}

impl From<SplitArg> for SplitRepr {
    fn from(s: SplitArg) -> Self {
        match s {
            SplitArg::Ratio(r) => SplitRepr::Ratio(r),
            counts => SplitRepr::Text(counts.to_string()),
        }
    }
}

impl SplitArg {
    fn ratio(v: f64) -> Result<Self> {
        if v > 0.0 && v < 1.0 {
            Ok(SplitArg::Ratio(v))
        } else {
            Err(Error::Config(format!("split ratio {v} is outside (0, 1)")))
        }
    }

    pub fn to_spec(self, seed: u64) -> SplitSpec {
        match self {
            SplitArg::Counts { train, test } => SplitSpec::counts(train, test, seed),
            SplitArg::Ratio(r) => SplitSpec::ratio(r, seed),
        }
    }
}

impl FromStr for SplitArg {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("split {s:?} is neither ntrain:ntest nor a ratio"));
        match s.split_once(':') {
            Some((a, b)) => Ok(SplitArg::Counts {
                train: a.trim().parse().map_err(|_| bad())?,
                test: b.trim().parse().map_err(|_| bad())?,
            }),
            None => SplitArg::ratio(s.trim().parse().map_err(|_| bad())?),
        }
    }
}

impl fmt::Display for SplitArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplitArg::Counts { train, test } => write!(f, "{train}:{test}"),
            SplitArg::Ratio(r) => write!(f, "{r}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    #[serde(alias = "md")]
    Markdown,
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "md" | "markdown" => Ok(ReportFormat::Markdown),
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            _ => Err(Error::Config(format!(
                "unknown format {s:?} (expected md, csv or json)"
            ))),
        }
    }
}

/// One experiment: a transform with a base learner, or an EN-MLC ensemble.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transform: Option<TransformSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub learner: Option<LearnerChoice>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<EnsembleSpec>,
}

impl ExperimentConfig {
    pub fn single(transform: TransformSpec, learner: impl Into<LearnerChoice>) -> Self {
        ExperimentConfig {
            transform: Some(transform),
            learner: Some(learner.into()),
            ..Default::default()
        }
    }

    pub fn ensemble(spec: EnsembleSpec) -> Self {
        ExperimentConfig {
            ensemble: Some(spec),
            ..Default::default()
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn validate(&self) -> Result<()> {
        match (&self.transform, &self.learner, &self.ensemble) {
            (Some(_), Some(_), None) | (None, None, Some(_)) => Ok(()),
            _ => Err(Error::Config(format!(
                "experiment {:?} needs either transform + learner or ensemble",
                self.display_name()
            ))),
        }
    }

    /// Explicit name, else e.g. `RAKEL k-NN` or `EN-MLC`.
    pub fn display_name(&self) -> String {
        if let Some(n) = &self.name {
            return n.clone();
        }
        match (&self.transform, &self.learner) {
            (Some(t), Some(LearnerChoice::Preset(p))) => format!("{t} {p}"),
            (Some(t), Some(LearnerChoice::Spec(_))) => format!("{t} custom"),
            _ if self.ensemble.is_some() => "EN-MLC".into(),
            _ => "unnamed".into(),
        }
    }

    /// Trains the experiment. Presets get `derive_seed(seed, 1)` as their
    /// tree seed; RAKEL and ensemble seeds are mixed with it, so the run seed
    /// drives all model randomness.
    pub fn fit(&self, train: &MLDataset, seed: u64) -> Result<Box<dyn MultiLabelModel>> {
        self.validate()?;
        let model_seed = derive_seed(seed, MODEL_STREAM);
        if let Some(spec) = &self.ensemble {
            let spec = spec.clone().with_seed(derive_seed(model_seed, spec.seed));
            return Ok(Box::new(enmlc_fit(train, &spec)?));
        }
        let transform = match self.transform.clone().expect("validated") {
            TransformSpec::Rakel(r) => TransformSpec::Rakel(RakelSpec {
                seed: derive_seed(model_seed, r.seed),
                ..r
            }),
            other => other,
        };
        let learner = self.learner.as_ref().expect("validated").resolve(model_seed);
        transform.fit(train, &learner)
    }
}

/// Every transform crossed with every learner, transform-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub transforms: Vec<TransformSpec>,
    #[serde(default = "all_presets")]
    pub learners: Vec<LearnerChoice>,
}

fn all_presets() -> Vec<LearnerChoice> {
    Preset::ALL.iter().map(|&p| p.into()).collect()
}

fn default_threshold() -> f64 {
    crate::ensemble::DEFAULT_THRESHOLD
}

/// A benchmark run. Relative paths in a config file are resolved against
/// the file's directory.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub dataset: Option<PathBuf>,
    /// Pre-split test file; replaces `split`.
    #[serde(default)]
    pub test_dataset: Option<PathBuf>,
    /// Mulan XML or one-name-per-line label file.
    #[serde(default)]
    pub labels: Option<PathBuf>,
    /// The last `q` attributes are the labels.
    #[serde(default)]
    pub trailing_labels: Option<usize>,
    #[serde(default)]
    pub split: Option<SplitArg>,
    #[serde(default)]
    pub experiments: Vec<ExperimentConfig>,
    #[serde(default)]
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub threshold: Option<f64>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub format: Option<ReportFormat>,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

/// The fields that change results, hashed for the report metadata.
#[derive(Serialize)]
struct HashView<'a> {
    dataset: &'a Option<PathBuf>,
    test_dataset: &'a Option<PathBuf>,
    labels: &'a Option<PathBuf>,
    trailing_labels: Option<usize>,
    split: Option<SplitArg>,
    experiments: Vec<ExperimentConfig>,
    threshold: f64,
    seed: u64,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))
    }

    /// Reads a config file, resolving relative paths against its directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_json(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut cfg.dataset, &mut cfg.test_dataset, &mut cfg.labels, &mut cfg.out]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn threshold(&self) -> f64 {
        self.threshold.unwrap_or_else(default_threshold)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn format(&self) -> ReportFormat {
        self.format.unwrap_or_default()
    }

    pub fn workers(&self) -> usize {
        self.workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }

    /// Explicit experiments followed by the expanded grid.
    pub fn all_experiments(&self) -> Vec<ExperimentConfig> {
        let mut out = self.experiments.clone();
        if let Some(grid) = &self.grid {
            for t in &grid.transforms {
                for l in &grid.learners {
                    out.push(ExperimentConfig::single(t.clone(), l.clone()));
                }
            }
        }
        out
    }

    fn label_spec_kind(&self) -> Result<()> {
        self.label_spec_with(|_| Ok(Vec::new())).map(|_| ())
    }

    /// Reads the label file if one is given.
    pub fn label_spec(&self) -> Result<LabelSpec> {
        self.label_spec_with(|p| read_label_file(p))
    }

    fn label_spec_with(&self, read: impl FnOnce(&Path) -> Result<Vec<String>>) -> Result<LabelSpec> {
        match (&self.labels, self.trailing_labels) {
            (Some(path), None) => Ok(LabelSpec::Names(read(path)?)),
            (None, Some(q)) => Ok(LabelSpec::TrailingCount(q)),
            (None, None) => Err(Error::Config("give a label file or a trailing label count".into())),
            (Some(_), Some(_)) => Err(Error::Config(
                "give a label file or a trailing label count, not both".into(),
            )),
        }
    }

    /// Checks experiments, workers and threshold (not the data source).
    pub fn validate_experiments(&self) -> Result<()> {
        let experiments = self.all_experiments();
        if experiments.is_empty() {
            return Err(Error::Config("at least one experiment is required".into()));
        }
        for e in &experiments {
            e.validate()?;
        }
        if let Some(w) = self.workers {
            if w == 0 {
                return Err(Error::Config("workers must be at least 1".into()));
            }
        }
        let t = self.threshold();
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Config(format!("threshold {t} is outside [0, 1]")));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_experiments()?;
        if self.dataset.is_none() {
            return Err(Error::Config("no dataset given".into()));
        }
        self.label_spec_kind()?;
        match (&self.split, &self.test_dataset) {
            (Some(_), Some(_)) => Err(Error::Config("give a split or a test dataset, not both".into())),
            (None, None) => Err(Error::Config("give a split or a test dataset".into())),
            _ => Ok(()),
        }
    }

    /// SHA-256 (hex) over the fields that affect results. Output format,
    /// worker count and output path are left out.
    pub fn hash(&self) -> String {
        let view = HashView {
            dataset: &self.dataset,
            test_dataset: &self.test_dataset,
            labels: &self.labels,
            trailing_labels: self.trailing_labels,
            split: self.split,
            experiments: self.all_experiments(),
            threshold: self.threshold(),
            seed: self.seed(),
        };
        let bytes = serde_json::to_vec(&view).expect("config serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Loads the dataset and returns `(train, test)`.
    pub fn load_data(&self) -> Result<(MLDataset, MLDataset)> {
        let path = self
            .dataset
            .as_ref()
            .ok_or_else(|| Error::Config("no dataset given".into()))?;
        let labels = self.label_spec()?;
        let data = load_arff(path, &labels)?;
        match (&self.test_dataset, self.split) {
            (Some(test_path), None) => {
                let test = load_arff(test_path, &labels)?;
                if test.schema() != data.schema() {
                    return Err(Error::Schema("train and test files have different schemas".into()));
                }
                Ok((data, test))
            }
            (None, Some(split)) => split_dataset(&data, &split.to_spec(self.seed())),
            _ => Err(Error::Config("give a split or a test dataset".into())),
        }
    }
}

/// Trains and evaluates every experiment. Failed experiments become failed
/// rows; the rest still run.
pub fn run_benchmark(cfg: &RunConfig, train: &MLDataset, test: &MLDataset) -> Result<BenchReport> {
    cfg.validate_experiments()?;
    let start = Instant::now();
    let experiments = cfg.all_experiments();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers())
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let outcomes: Vec<std::result::Result<EvaluationReport, String>> = pool.install(|| {
        experiments
            .par_iter()
            .map(|e| {
                e.fit(train, cfg.seed())
                    .and_then(|m| evaluate(m.as_ref(), test, cfg.threshold()))
                    .map_err(|err| err.to_string())
            })
            .collect()
    });
    let rows = experiments
        .iter()
        .zip(outcomes)
        .map(|(e, outcome)| ExperimentRow {
            name: e.display_name(),
            outcome,
        })
        .collect();
    Ok(BenchReport::new(
        rows,
        cfg.seed(),
        cfg.hash(),
        cfg.threshold(),
        (train.len(), test.len()),
        start.elapsed().as_secs_f64(),
    ))
}

/// Short transform names accepted on the command line: `br`, `lp`, `rakel`,
/// `ps`.
pub fn parse_transform(name: &str) -> Result<TransformSpec> {
    match name.to_ascii_lowercase().as_str() {
        "br" => Ok(TransformSpec::Br),
        "lp" => Ok(TransformSpec::Lp),
        "rakel" => Ok(TransformSpec::Rakel(RakelSpec::default())),
        "ps" => Ok(TransformSpec::Ps(PruneSpec::default())),
        _ => Err(Error::Config(format!(
            "unknown transform {name:?} (expected br, lp, rakel or ps)"
        ))),
    }
}

/// Reads a predictions file: one line of comma-separated scores per test
/// instance. Blank lines and lines starting with `#` are skipped.
pub fn read_predictions(text: &str, n_labels: usize) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("predictions line {}: bad score {v:?}", i + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != n_labels {
            return Err(Error::Config(format!(
                "predictions line {}: {} scores for {n_labels} labels",
                i + 1,
                row.len()
            )));
        }
        out.push(row);
    }
    Ok(out)
}

/// Evaluates precomputed score rows against `test`.
pub fn evaluate_scores(test: &MLDataset, scores: Vec<Vec<f64>>, t: f64) -> Result<EvaluationReport> {
    let preds = scores
        .into_iter()
        .map(|s| Prediction::from_scores(s, t))
        .collect::<Result<Vec<_>>>()?;
    let truths: Vec<_> = test.labelsets().cloned().collect();
    evaluate_predictions(&truths, &preds)
}

/// Process exit code for an error: 1 usage or config, 2 data, 3 experiment.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) => 1,
        Error::Io { .. }
        | Error::Arff(_)
        | Error::Schema(_)
        | Error::LabelBinding(_)
        | Error::Split(_)
        | Error::EmptyDataset
        | Error::ArityMismatch { .. }
        | Error::LabelOutOfRange { .. } => 2,
        _ => 3,
    }
}
