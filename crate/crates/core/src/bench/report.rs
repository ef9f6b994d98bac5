use std::fmt::Write as _;

use serde::Serialize;

use super::ReportFormat;
use crate::metrics::EvaluationReport;

/// Result of one experiment: its report, or the error that stopped it.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub name: String,
    pub outcome: Result<EvaluationReport, String>,
}

/// The five measures, used for the AVERAGE row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricSummary {
    pub accuracy: f64,
    pub hamming_loss: f64,
    pub one_error: f64,
    pub ranking_loss: f64,
    pub avg_precision: f64,
}

impl MetricSummary {
    fn of(r: &EvaluationReport) -> Self {
        MetricSummary {
            accuracy: r.accuracy,
            hamming_loss: r.hamming_loss,
            one_error: r.one_error,
            ranking_loss: r.ranking_loss,
            avg_precision: r.avg_precision,
        }
    }

    fn values(&self) -> [f64; 5] {
        [
            self.accuracy,
            self.hamming_loss,
            self.one_error,
            self.ranking_loss,
            self.avg_precision,
        ]
    }
}

/// (csv column, markdown label)
const METRICS: [(&str, &str); 5] = [
    ("accuracy", "Accuracy ↑"),
    ("hamming_loss", "Hamming loss ↓"),
    ("one_error", "One-error ↓"),
    ("ranking_loss", "Ranking loss ↓"),
    ("avg_precision", "Average precision ↑"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<ExperimentRow>,
    /// Mean over the successful rows; `None` when every row failed.
    pub average: Option<MetricSummary>,
    pub seed: u64,
    pub config_hash: String,
    pub threshold: f64,
    pub n_train: usize,
    pub n_test: usize,
    pub wall_time_secs: f64,
}

#[derive(Serialize)]
struct JsonRow<'a> {
    name: &'a str,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    metrics: Option<&'a EvaluationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a str>,
}

#[derive(Serialize)]
struct JsonMeta<'a> {
    seed: u64,
    config_hash: &'a str,
    threshold: f64,
    n_train: usize,
    n_test: usize,
    wall_time_secs: f64,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    metadata: JsonMeta<'a>,
    experiments: Vec<JsonRow<'a>>,
    average: Option<MetricSummary>,
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl BenchReport {
    pub fn new(
        rows: Vec<ExperimentRow>,
        seed: u64,
        config_hash: String,
        threshold: f64,
        (n_train, n_test): (usize, usize),
        wall_time_secs: f64,
    ) -> Self {
        let ok: Vec<MetricSummary> = rows
            .iter()
            .filter_map(|r| r.outcome.as_ref().ok().map(MetricSummary::of))
            .collect();
        let average = (!ok.is_empty()).then(|| {
            let n = ok.len() as f64;
            let mean = |f: fn(&MetricSummary) -> f64| ok.iter().map(f).sum::<f64>() / n;
            MetricSummary {
                accuracy: mean(|m| m.accuracy),
                hamming_loss: mean(|m| m.hamming_loss),
                one_error: mean(|m| m.one_error),
                ranking_loss: mean(|m| m.ranking_loss),
                avg_precision: mean(|m| m.avg_precision),
            }
        });
        BenchReport {
            rows,
            average,
            seed,
            config_hash,
            threshold,
            n_train,
            n_test,
            wall_time_secs,
        }
    }

    pub fn n_failed(&self) -> usize {
        self.rows.iter().filter(|r| r.outcome.is_err()).count()
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Markdown => self.to_markdown(),
            ReportFormat::Csv => self.to_csv(),
            ReportFormat::Json => self.to_json(),
        }
    }

    /// One line per experiment plus AVERAGE, six decimals, `NA` for failed
    /// rows. Carries no timing, so equal runs give equal bytes.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("experiment");
        for (col, _) in METRICS {
            out.push(',');
            out.push_str(col);
        }
        out.push('\n');
        let mut line = |name: &str, values: Option<[f64; 5]>| {
            out.push_str(&csv_field(name));
            for i in 0..5 {
                match values {
                    Some(v) => write!(out, ",{:.6}", v[i]).unwrap(),
                    None => out.push_str(",NA"),
                }
            }
            out.push('\n');
        };
        for r in &self.rows {
            line(&r.name, r.outcome.as_ref().ok().map(|m| MetricSummary::of(m).values()));
        }
        line("AVERAGE", self.average.map(|a| a.values()));
        out
    }

    /// Metrics as rows, experiments as columns, AVERAGE last.
    pub fn to_markdown(&self) -> String {
        let mut out = String::from("| Metric |");
        for r in &self.rows {
            write!(out, " {} |", r.name.replace('|', "\\|")).unwrap();
        }
        out.push_str(" AVERAGE |\n|---|");
        for _ in 0..=self.rows.len() {
            out.push_str("---:|");
        }
        out.push('\n');
        for (i, (_, label)) in METRICS.iter().enumerate() {
            write!(out, "| {label} |").unwrap();
            for r in &self.rows {
                match &r.outcome {
                    Ok(m) => write!(out, " {:.3} |", MetricSummary::of(m).values()[i]).unwrap(),
                    Err(_) => out.push_str(" failed |"),
                }
            }
            match self.average {
                Some(a) => writeln!(out, " {:.3} |", a.values()[i]).unwrap(),
                None => out.push_str(" NA |\n"),
            }
        }
        writeln!(
            out,
            "\nseed {}, threshold {}, {} train / {} test rows, config {}, {:.2} s",
            self.seed,
            self.threshold,
            self.n_train,
            self.n_test,
            &self.config_hash[..self.config_hash.len().min(12)],
            self.wall_time_secs
        )
        .unwrap();
        for r in &self.rows {
            if let Err(e) = &r.outcome {
                writeln!(out, "\n{} failed: {e}", r.name).unwrap();
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let report = JsonReport {
            metadata: JsonMeta {
                seed: self.seed,
                config_hash: &self.config_hash,
                threshold: self.threshold,
                n_train: self.n_train,
                n_test: self.n_test,
                wall_time_secs: self.wall_time_secs,
            },
            experiments: self
                .rows
                .iter()
                .map(|r| JsonRow {
                    name: &r.name,
                    status: if r.outcome.is_ok() { "ok" } else { "failed" },
                    metrics: r.outcome.as_ref().ok(),
                    error: r.outcome.as_ref().err().map(String::as_str),
                })
                .collect(),
            average: self.average,
        };
        let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
        s.push('\n');
        s
    }
}
