//! Results files: replication grids and single-fit summaries.

use std::path::Path;

use serde::{Deserialize, Serialize};

use outsel_core::metrics::{DetectionCounts, Diagnostic, FitSummary, RepMetrics};
use outsel_core::report::FitColumn;
use outsel_core::sim::Study;
use outsel_core::{Regime, RepResult, StandardizationRecord};

use crate::error::{IoError, Result};

pub const RESULTS_FILE: &str = "results.csv";
pub const FIT_SUMMARY_JSON: &str = "fit_summary.json";
pub const FIT_SUMMARY_CSV: &str = "fit_summary.csv";
pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";

/// Flat row of `results.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct ResultRow {
    study: u8,
    effect: f64,
    k1: usize,
    rep: usize,
    regime: String,
    dataset_seed: u64,
    n_identified: usize,
    n_correct: usize,
    n_false_positive: usize,
    mse: f64,
    mu_hat: Option<f64>,
    mu_true: f64,
    max_rhat: Option<f64>,
    error: Option<String>,
}

impl From<&RepResult> for ResultRow {
    fn from(r: &RepResult) -> Self {
        ResultRow {
            study: r.study.number(),
            effect: r.effect,
            k1: r.k1,
            rep: r.rep,
            regime: r.regime.name().into(),
            dataset_seed: r.dataset_seed,
            n_identified: r.metrics.counts.n_identified,
            n_correct: r.metrics.counts.n_correct,
            n_false_positive: r.metrics.counts.n_false_positive,
            mse: r.metrics.mse,
            mu_hat: r.metrics.mu_hat,
            mu_true: r.mu_true,
            max_rhat: r.max_rhat,
            error: r.error.clone(),
        }
    }
}

impl ResultRow {
    fn into_result(self, line: usize) -> Result<RepResult> {
        let bad = |what: &str, v: String| IoError::Schema(format!("line {line}: unknown {what} `{v}`"));
        Ok(RepResult {
            study: Study::from_number(self.study).ok_or_else(|| bad("study", self.study.to_string()))?,
            effect: self.effect,
            k1: self.k1,
            rep: self.rep,
            regime: Regime::parse(&self.regime).ok_or_else(|| bad("regime", self.regime.clone()))?,
            dataset_seed: self.dataset_seed,
            metrics: RepMetrics {
                counts: DetectionCounts {
                    n_identified: self.n_identified,
                    n_correct: self.n_correct,
                    n_false_positive: self.n_false_positive,
                },
                mse: self.mse,
                mu_hat: self.mu_hat,
            },
            mu_true: self.mu_true,
            max_rhat: self.max_rhat,
            error: self.error.filter(|e| !e.is_empty()),
        })
    }
}

pub fn format_results(results: &[RepResult]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in results {
        w.serialize(ResultRow::from(r))
            .map_err(|e| IoError::Parse(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| IoError::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn parse_results(text: &str) -> Result<Vec<RepResult>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    rdr.deserialize::<ResultRow>()
        .enumerate()
        .map(|(i, row)| {
            row.map_err(|e| IoError::Schema(format!("results row {}: {e}", i + 2)))?
                .into_result(i + 2)
        })
        .collect()
}

pub fn write_results(results: &[RepResult], path: &Path) -> Result<()> {
    crate::write_atomic(path, format_results(results)?.as_bytes())
}

pub fn read_results(path: &Path) -> Result<Vec<RepResult>> {
    let text = std::fs::read_to_string(path).map_err(IoError::io(path))?;
    parse_results(&text)
}

/// Everything `fit` records about one fitted dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    pub label: String,
    pub outcome_names: Vec<String>,
    pub standardization: StandardizationRecord,
    pub summary: FitSummary,
}

impl FitRecord {
    pub fn column(&self) -> FitColumn {
        FitColumn {
            label: self.label.clone(),
            outcome_names: self.outcome_names.clone(),
            summary: self.summary.clone(),
        }
    }
}

pub fn write_fit_record(rec: &FitRecord, dir: &Path) -> Result<()> {
    let json = serde_json::to_string_pretty(rec).map_err(|e| IoError::Parse(e.to_string()))?;
    crate::write_atomic(&dir.join(FIT_SUMMARY_JSON), json.as_bytes())?;
    crate::write_atomic(&dir.join(FIT_SUMMARY_CSV), format_fit_table(rec).as_bytes())?;
    crate::write_atomic(
        &dir.join(DIAGNOSTICS_FILE),
        format_diagnostics(&rec.summary.diagnostics).as_bytes(),
    )
}

pub fn read_fit_record(dir: &Path) -> Result<FitRecord> {
    let path = dir.join(FIT_SUMMARY_JSON);
    let text = std::fs::read_to_string(&path).map_err(IoError::io(&path))?;
    serde_json::from_str(&text).map_err(|e| IoError::Schema(format!("{}: {e}", path.display())))
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Per-outcome table; `beta_hat_original` undoes outcome standardization.
pub fn format_fit_table(rec: &FitRecord) -> String {
    let s = &rec.summary;
    let mut out = String::from("outcome,inclusion,relevant,beta_hat,beta_hat_original\n");
    for (k, name) in rec.outcome_names.iter().enumerate() {
        let (incl, est) = if s.active[k] {
            (s.inclusion[k].to_string(), Some(s.beta_hat[k]))
        } else {
            (String::new(), None)
        };
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            csv_field(name),
            incl,
            s.relevant[k] as u8,
            opt(est),
            opt(est.map(|b| rec.standardization.effect_to_original(k, b)))
        ));
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn format_diagnostics(diags: &[Diagnostic]) -> String {
    let mut out = String::from("parameter,rhat,ess,flagged\n");
    for d in diags {
        out.push_str(&format!("{},{},{},{}\n", d.name, opt(d.rhat), d.ess, d.flagged() as u8));
    }
    out
}
