use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mullab::bench::{
    evaluate_scores, exit_code, parse_transform, read_predictions, run_benchmark, ExperimentConfig, ReportFormat,
    RunConfig, SplitArg,
};
use mullab::data::dataset_stats;
use mullab::ensemble::EnsembleSpec;
use mullab::io::load_arff;
use mullab::learners::Preset;
use mullab::metrics::evaluate;
use mullab::{Error, Result};

#[derive(Parser)]
#[command(name = "mullab", version, about = "Multi-label classification benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print dataset statistics.
    Info(Common),
    /// Train and evaluate one experiment, or score a predictions file.
    Evaluate {
        #[command(flatten)]
        common: Common,
        /// br, lp, rakel, ps or enmlc.
        #[arg(long)]
        transform: Option<String>,
        /// Learner preset: NB, k-NN, RANDOM-T, REPTREE or J48.
        #[arg(long)]
        learner: Option<String>,
        /// CSV of per-instance scores to evaluate instead of training.
        #[arg(long)]
        predictions: Option<PathBuf>,
    },
    /// Run every experiment of a config and emit a report.
    Benchmark(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    dataset: Option<PathBuf>,
    /// Label file (Mulan XML or one name per line).
    #[arg(long, conflicts_with = "trailing_labels")]
    labels: Option<PathBuf>,
    /// The last Q attributes are labels.
    #[arg(long, value_name = "Q")]
    trailing_labels: Option<usize>,
    /// ntrain:ntest or a train ratio.
    #[arg(long)]
    split: Option<String>,
    /// Falls back to the config, then to MULLAB_SEED.
    #[arg(long)]
    seed: Option<u64>,
    /// md, csv or json.
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    /// Config file (if any) with command-line flags on top.
    fn config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(d) = &self.dataset {
            cfg.dataset = Some(d.clone());
        }
        if let Some(l) = &self.labels {
            cfg.labels = Some(l.clone());
            cfg.trailing_labels = None;
        }
        if let Some(q) = self.trailing_labels {
            cfg.trailing_labels = Some(q);
            cfg.labels = None;
        }
        if let Some(s) = &self.split {
            cfg.split = Some(s.parse::<SplitArg>()?);
            cfg.test_dataset = None;
        }
        cfg.seed = match (self.seed, cfg.seed) {
            (Some(s), _) | (None, Some(s)) => Some(s),
            (None, None) => match std::env::var("MULLAB_SEED") {
                Ok(v) => Some(
                    v.trim()
                        .parse()
                        .map_err(|_| Error::Config(format!("MULLAB_SEED={v:?} is not an integer")))?,
                ),
                Err(_) => None,
            },
        };
        if let Some(f) = &self.format {
            cfg.format = Some(f.parse::<ReportFormat>()?);
        }
        if self.threshold.is_some() {
            cfg.threshold = self.threshold;
        }
        if self.workers.is_some() {
            cfg.workers = self.workers;
        }
        if self.out.is_some() {
            cfg.out = self.out.clone();
        }
        Ok(cfg)
    }
}

fn emit(cfg: &RunConfig, text: &str) -> Result<()> {
    match &cfg.out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn info(common: &Common) -> Result<()> {
    let cfg = common.config()?;
    let path = cfg
        .dataset
        .as_ref()
        .ok_or_else(|| Error::Config("--dataset is required".into()))?;
    let stats = dataset_stats(&load_arff(path, &cfg.label_spec()?)?)?;
    let text = match cfg.format() {
        ReportFormat::Json => serde_json::to_string_pretty(&stats).expect("stats serialize") + "\n",
        _ => format!(
            "instances={} labels={} lcard={:.3} lden={:.3} distinct_labelsets={}\n",
            stats.n_instances, stats.n_labels, stats.lcard, stats.lden, stats.distinct_labelsets
        ),
    };
    emit(&cfg, &text)
}

fn single_experiment(cfg: &RunConfig, transform: Option<&str>, learner: Option<&str>) -> Result<ExperimentConfig> {
    match (transform, learner) {
        (Some(t), _) if t.eq_ignore_ascii_case("enmlc") => Ok(ExperimentConfig::ensemble(EnsembleSpec::default())),
        (Some(t), Some(l)) => Ok(ExperimentConfig::single(parse_transform(t)?, l.parse::<Preset>()?)),
        (Some(_), None) => Err(Error::Config("--learner is required with --transform".into())),
        (None, _) => {
            let all = cfg.all_experiments();
            match all.as_slice() {
                [one] => Ok(one.clone()),
                _ => Err(Error::Config(format!(
                    "evaluate needs exactly one experiment (--transform/--learner or a config), found {}",
                    all.len()
                ))),
            }
        }
    }
}

fn evaluate_cmd(
    common: &Common,
    transform: Option<&str>,
    learner: Option<&str>,
    predictions: Option<&PathBuf>,
) -> Result<()> {
    let mut cfg = common.config()?;
    let report = if let Some(pred_path) = predictions {
        let path = cfg
            .dataset
            .as_ref()
            .ok_or_else(|| Error::Config("--dataset is required".into()))?;
        let data = load_arff(path, &cfg.label_spec()?)?;
        // Without a split the predictions cover the whole dataset.
        let test = match cfg.split {
            Some(s) => mullab::io::split_dataset(&data, &s.to_spec(cfg.seed()))?.1,
            None => data,
        };
        let text = std::fs::read_to_string(pred_path).map_err(|e| Error::io(pred_path, e))?;
        evaluate_scores(&test, read_predictions(&text, test.n_labels())?, cfg.threshold())?
    } else {
        let exp = single_experiment(&cfg, transform, learner)?;
        cfg.experiments = vec![exp.clone()];
        cfg.grid = None;
        cfg.validate()?;
        let (train, test) = cfg.load_data()?;
        let model = exp.fit(&train, cfg.seed())?;
        evaluate(model.as_ref(), &test, cfg.threshold())?
    };
    let text = match cfg.format() {
        ReportFormat::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        ReportFormat::Csv => format!(
            "accuracy,hamming_loss,one_error,ranking_loss,avg_precision\n{:.6},{:.6},{:.6},{:.6},{:.6}\n",
            report.accuracy, report.hamming_loss, report.one_error, report.ranking_loss, report.avg_precision
        ),
        ReportFormat::Markdown => format!(
            "accuracy={:.6} hamming_loss={:.6} one_error={:.6} ranking_loss={:.6} avg_precision={:.6}\n\
             evaluated={} skipped_ranking={} skipped_avg_precision={}\n",
            report.accuracy,
            report.hamming_loss,
            report.one_error,
            report.ranking_loss,
            report.avg_precision,
            report.n_evaluated,
            report.n_skipped_ranking,
            report.n_skipped_avg_precision
        ),
    };
    emit(&cfg, &text)
}

/// Returns whether every experiment succeeded.
fn benchmark(common: &Common) -> Result<bool> {
    let cfg = common.config()?;
    cfg.validate()?;
    let (train, test) = cfg.load_data()?;
    let report = run_benchmark(&cfg, &train, &test)?;
    emit(&cfg, &report.render(cfg.format()))?;
    for row in &report.rows {
        if let Err(e) = &row.outcome {
            eprintln!("experiment {} failed: {e}", row.name);
        }
    }
    Ok(report.n_failed() == 0)
}

fn main() -> ExitCode {
    // Usage errors exit with 1; clap's own default is 2, which here means a data error.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Info(c) => info(c).map(|_| true),
        Command::Evaluate {
            common,
            transform,
            learner,
            predictions,
        } => evaluate_cmd(common, transform.as_deref(), learner.as_deref(), predictions.as_ref()).map(|_| true),
        Command::Benchmark(c) => benchmark(c),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
