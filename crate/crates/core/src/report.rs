//! Aggregation of grid results and fit summaries into the standard tables.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::metrics::{mu_summary, FitSummary, MuSummary};
use crate::prior::Regime;
use crate::sim::{RepResult, Study};

/// Table layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// Detection counts per spike-and-slab variant.
    Table1,
    /// Mean squared error of the effect estimates.
    Table2,
    /// Estimates of `mu`, Study 1.
    Table3,
    /// Estimates of `mu` against the implied truth, Study 2.
    Table4,
    /// Posterior inclusion probabilities of fitted datasets.
    Table5,
    /// Effect estimates of fitted datasets.
    Table6,
}

impl Layout {
    pub fn parse(s: &str) -> Option<Layout> {
        Some(match s {
            "table1" => Layout::Table1,
            "table2" => Layout::Table2,
            "table3" => Layout::Table3,
            "table4" => Layout::Table4,
            "table5" => Layout::Table5,
            "table6" => Layout::Table6,
            _ => return None,
        })
    }

    pub fn uses_grid(self) -> bool {
        !matches!(self, Layout::Table5 | Layout::Table6)
    }
}

/// A rendered table: header plus string cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub title: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    /// Column-aligned plain text.
    pub fn to_text(&self) -> String {
        let ncol = self.header.len();
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = String::new();
        out.push_str(&self.title);
        out.push('\n');
        let line = |cells: &[String], out: &mut String| {
            for (i, c) in cells.iter().enumerate() {
                let pad = widths[i] - c.chars().count();
                if i == 0 {
                    out.push_str(c);
                    out.extend(core::iter::repeat_n(' ', pad));
                } else {
                    out.push_str("  ");
                    out.extend(core::iter::repeat_n(' ', pad));
                    out.push_str(c);
                }
            }
            out.push('\n');
        };
        line(&self.header, &mut out);
        let total: usize = widths.iter().sum::<usize>() + 2 * ncol.saturating_sub(1);
        out.extend(core::iter::repeat_n('-', total));
        out.push('\n');
        for r in &self.rows {
            line(r, &mut out);
        }
        out
    }

    /// Comma-separated rendering; cells containing commas or quotes are quoted.
    pub fn to_csv(&self) -> String {
        let esc = |c: &str| {
            if c.contains([',', '"', '\n']) {
                format!("\"{}\"", c.replace('"', "\"\""))
            } else {
                c.to_string()
            }
        };
        let mut out = String::new();
        for r in core::iter::once(&self.header).chain(&self.rows) {
            let cells: Vec<String> = r.iter().map(|c| esc(c)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Averages of one (study, effect, K1, regime) cell over its successful replications.
#[derive(Debug, Clone, PartialEq)]
pub struct CellAggregate {
    pub study: Study,
    pub effect: f64,
    pub k1: usize,
    pub regime: Regime,
    pub reps: usize,
    pub failed: usize,
    pub not_converged: usize,
    pub mean_identified: f64,
    pub mean_correct: f64,
    pub mean_false_positive: f64,
    pub mean_mse: f64,
    pub mu: Option<MuSummary>,
    pub mean_mu_true: f64,
}

type CellKey = (Study, u64, usize, Regime);

fn cell_key(r: &RepResult) -> CellKey {
    (r.study, r.effect.to_bits(), r.k1, r.regime)
}

/// Groups results by cell and averages the successful replications.
pub fn aggregate(results: &[RepResult]) -> Vec<CellAggregate> {
    let mut groups: BTreeMap<CellKey, Vec<&RepResult>> = BTreeMap::new();
    for r in results {
        groups.entry(cell_key(r)).or_default().push(r);
    }
    let mut out: Vec<CellAggregate> = groups
        .into_values()
        .filter_map(|g| {
            let first = g[0];
            let ok: Vec<&RepResult> = g.iter().copied().filter(|r| r.ok()).collect();
            if ok.is_empty() {
                return None;
            }
            let n = ok.len() as f64;
            let avg = |f: &dyn Fn(&RepResult) -> f64| ok.iter().map(|r| f(r)).sum::<f64>() / n;
            let mus: Vec<f64> = ok.iter().filter_map(|r| r.metrics.mu_hat).collect();
            Some(CellAggregate {
                study: first.study,
                effect: first.effect,
                k1: first.k1,
                regime: first.regime,
                reps: ok.len(),
                failed: g.len() - ok.len(),
                not_converged: ok.iter().filter(|r| !r.converged()).count(),
                mean_identified: avg(&|r| r.metrics.counts.n_identified as f64),
                mean_correct: avg(&|r| r.metrics.counts.n_correct as f64),
                mean_false_positive: avg(&|r| r.metrics.counts.n_false_positive as f64),
                mean_mse: avg(&|r| r.metrics.mse),
                mu: mu_summary(&mus).ok(),
                mean_mu_true: avg(&|r| r.mu_true),
            })
        })
        .collect();
    out.sort_by(|a, b| {
        a.study
            .cmp(&b.study)
            .then(a.effect.abs().total_cmp(&b.effect.abs()))
            .then(a.k1.cmp(&b.k1))
            .then(a.regime.cmp(&b.regime))
    });
    out
}

fn regime_label(r: Regime) -> &'static str {
    match r {
        Regime::SsvsMu => "mu unknown",
        Regime::SsvsZero => "mu = 0",
        Regime::Hierarchical => "No selection",
        Regime::Laplace => "Laplace",
        Regime::Subset => "Subset model",
    }
}

fn f1(x: f64) -> String {
    format!("{x:.1}")
}

fn f3(x: f64) -> String {
    format!("{x:.3}")
}

/// Ordered (study, effect, K1) rows present in the aggregates.
fn row_keys(cells: &[CellAggregate]) -> Vec<(Study, f64, usize)> {
    let mut keys: Vec<(Study, f64, usize)> = Vec::new();
    for c in cells {
        if !keys
            .iter()
            .any(|k| k.0 == c.study && k.1.to_bits() == c.effect.to_bits() && k.2 == c.k1)
        {
            keys.push((c.study, c.effect, c.k1));
        }
    }
    keys.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.abs().total_cmp(&b.1.abs())).then(a.2.cmp(&b.2)));
    keys
}

fn find(cells: &[CellAggregate], key: (Study, f64, usize), regime: Regime) -> Result<&CellAggregate> {
    cells
        .iter()
        .find(|c| c.study == key.0 && c.effect.to_bits() == key.1.to_bits() && c.k1 == key.2 && c.regime == regime)
        .ok_or_else(|| {
            Error::MissingCell(format!(
                "study {}, effect {}, K1 {}, regime {regime}",
                key.0.number(),
                key.1,
                key.2
            ))
        })
}

fn present(cells: &[CellAggregate], wanted: &[Regime]) -> Vec<Regime> {
    wanted
        .iter()
        .copied()
        .filter(|r| cells.iter().any(|c| c.regime == *r))
        .collect()
}

/// Renders grid results in one of the grid layouts (tables 1 to 4).
pub fn render_grid(results: &[RepResult], layout: Layout) -> Result<Table> {
    let cells = aggregate(results);
    if cells.is_empty() {
        return Err(Error::MissingCell("no successful results".into()));
    }
    match layout {
        Layout::Table1 => table1(&cells),
        Layout::Table2 => table2(&cells),
        Layout::Table3 => table_mu(&cells, Study::One),
        Layout::Table4 => table_mu(&cells, Study::Two),
        Layout::Table5 | Layout::Table6 => Err(Error::InvalidConfig(format!(
            "layout {layout:?} renders fit summaries, not grid results"
        ))),
    }
}

fn table1(cells: &[CellAggregate]) -> Result<Table> {
    let regimes = present(cells, &[Regime::SsvsMu, Regime::SsvsZero]);
    if regimes.is_empty() {
        return Err(Error::MissingCell("no spike-and-slab results".into()));
    }
    let mut header = vec!["Study".to_string(), "Effect".into(), "K1".into()];
    for metric in ["No. identified", "No. correct", "No. incorrect"] {
        for r in &regimes {
            header.push(format!("{metric} ({})", regime_label(*r)));
        }
    }
    let mut rows = Vec::new();
    for key in row_keys(cells) {
        let found: Vec<&CellAggregate> = regimes.iter().map(|&r| find(cells, key, r)).collect::<Result<_>>()?;
        let mut row = vec![key.0.number().to_string(), format!("{}", key.1), key.2.to_string()];
        row.extend(found.iter().map(|c| f1(c.mean_identified)));
        row.extend(found.iter().map(|c| f1(c.mean_correct)));
        row.extend(found.iter().map(|c| f1(c.mean_false_positive)));
        rows.push(row);
    }
    Ok(Table {
        title: "Average number of outcomes identified as relevant, correctly identified, and incorrectly identified"
            .into(),
        header,
        rows,
    })
}

fn table2(cells: &[CellAggregate]) -> Result<Table> {
    let regimes = present(cells, &[Regime::SsvsMu, Regime::SsvsZero, Regime::Hierarchical]);
    if regimes.is_empty() {
        return Err(Error::MissingCell("no results for MSE columns".into()));
    }
    let mut effects: Vec<f64> = Vec::new();
    for c in cells {
        if !effects.iter().any(|e| e.to_bits() == c.effect.to_bits()) {
            effects.push(c.effect);
        }
    }
    effects.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    let mut header = vec!["Study".to_string(), "K1".into()];
    for r in &regimes {
        for e in &effects {
            let label = match r {
                Regime::Hierarchical => "No variable selection".to_string(),
                _ => format!("SSVS - {}", regime_label(*r)),
            };
            header.push(format!("{label} (effect {e})"));
        }
    }
    let mut row_ids: Vec<(Study, usize)> = Vec::new();
    for k in row_keys(cells) {
        if !row_ids.contains(&(k.0, k.2)) {
            row_ids.push((k.0, k.2));
        }
    }
    row_ids.sort();
    let mut rows = Vec::new();
    for (study, k1) in row_ids {
        let mut row = vec![study.number().to_string(), k1.to_string()];
        for &r in &regimes {
            for &e in &effects {
                row.push(f3(find(cells, (study, e, k1), r)?.mean_mse));
            }
        }
        rows.push(row);
    }
    Ok(Table {
        title: "Mean squared error of the effect estimates".into(),
        header,
        rows,
    })
}

fn table_mu(cells: &[CellAggregate], study: Study) -> Result<Table> {
    let cells: Vec<CellAggregate> = cells.iter().filter(|c| c.study == study).cloned().collect();
    if cells.is_empty() {
        return Err(Error::MissingCell(format!("no results for study {}", study.number())));
    }
    let regimes = present(&cells, &[Regime::SsvsMu, Regime::Hierarchical, Regime::Subset]);
    if regimes.is_empty() {
        return Err(Error::MissingCell("no regime estimating mu".into()));
    }
    let mut header = vec![
        if study == Study::One { "mu" } else { "omega" }.to_string(),
        "K1".into(),
    ];
    if study == Study::Two {
        header.push("Mean(Lambda[1:K1,1] x omega)".into());
    }
    for r in &regimes {
        header.push(match r {
            Regime::SsvsMu => "SSVS".into(),
            other => regime_label(*other).to_string(),
        });
    }
    let mut rows = Vec::new();
    for key in row_keys(&cells) {
        let found: Vec<&CellAggregate> = regimes.iter().map(|&r| find(&cells, key, r)).collect::<Result<_>>()?;
        let mut est = vec![format!("{}", key.1), key.2.to_string()];
        let mut spread = vec![String::new(), String::new()];
        if study == Study::Two {
            est.push(f3(found[0].mean_mu_true));
            spread.push(String::new());
        }
        for c in &found {
            let mu =
                c.mu.ok_or_else(|| Error::MissingCell(format!("mu estimate for {}", c.regime)))?;
            est.push(f3(mu.mean));
            spread.push(match mu.sd {
                Some(sd) => format!("({})", f3(sd)),
                None => "(undefined)".into(),
            });
        }
        rows.push(est);
        rows.push(spread);
    }
    Ok(Table {
        title: format!(
            "Average posterior mean of mu, study {} (sd across replications in brackets)",
            study.number()
        ),
        header,
        rows,
    })
}

/// One fitted dataset shown as a column of tables 5 and 6.
#[derive(Debug, Clone, PartialEq)]
pub struct FitColumn {
    pub label: String,
    pub outcome_names: Vec<String>,
    pub summary: FitSummary,
}

/// Renders fit summaries (tables 5 and 6). Outcomes follow the order of the
/// first column; every column must cover the same outcome names.
pub fn render_fits(columns: &[FitColumn], layout: Layout) -> Result<Table> {
    let first = columns
        .first()
        .ok_or_else(|| Error::MissingCell("no fit summaries".into()))?;
    let names = &first.outcome_names;
    let mut index: Vec<Vec<usize>> = Vec::with_capacity(columns.len());
    for c in columns {
        let idx = names
            .iter()
            .map(|n| {
                c.outcome_names
                    .iter()
                    .position(|m| m == n)
                    .ok_or_else(|| Error::MissingCell(format!("outcome `{n}` in column `{}`", c.label)))
            })
            .collect::<Result<Vec<_>>>()?;
        index.push(idx);
    }
    let mut header = vec!["Outcome".to_string()];
    header.extend(columns.iter().map(|c| c.label.clone()));
    let mut rows = Vec::new();
    match layout {
        Layout::Table5 => {
            for (o, name) in names.iter().enumerate() {
                let mut row = vec![name.clone()];
                for (c, idx) in columns.iter().zip(&index) {
                    let s = &c.summary;
                    let k = idx[o];
                    row.push(if s.regime == Regime::Laplace {
                        (s.relevant[k] as u8).to_string()
                    } else {
                        f3(s.inclusion[k])
                    });
                }
                rows.push(row);
            }
        }
        Layout::Table6 => {
            for (o, name) in names.iter().enumerate() {
                let mut row = vec![name.clone()];
                for (c, idx) in columns.iter().zip(&index) {
                    let k = idx[o];
                    row.push(if c.summary.active[k] {
                        f3(c.summary.beta_hat[k])
                    } else {
                        String::new()
                    });
                }
                rows.push(row);
            }
            let opt = |v: Option<f64>| v.map(f3).unwrap_or_default();
            let mut mu = vec!["mu".to_string()];
            mu.extend(columns.iter().map(|c| opt(c.summary.mu_mean)));
            let mut tau = vec!["tau".to_string()];
            tau.extend(columns.iter().map(|c| opt(c.summary.tau_mean)));
            rows.push(mu);
            rows.push(tau);
        }
        _ => {
            return Err(Error::InvalidConfig(format!(
                "layout {layout:?} renders grid results, not fit summaries"
            )))
        }
    }
    let title = match layout {
        Layout::Table5 => "Posterior mean of I_k (Laplace: 1 if 0 is outside the 95% interval)",
        _ => "Effect estimates: mean of beta_k given I_k = 1 when selected, 0 otherwise",
    };
    Ok(Table {
        title: title.into(),
        header,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{DetectionCounts, RepMetrics};

    fn rep(effect: f64, k1: usize, rep: usize, regime: Regime, ident: usize, correct: usize) -> RepResult {
        RepResult {
            study: Study::One,
            effect,
            k1,
            rep,
            regime,
            dataset_seed: rep as u64,
            metrics: RepMetrics {
                counts: DetectionCounts {
                    n_identified: ident,
                    n_correct: correct,
                    n_false_positive: ident - correct,
                },
                mse: 0.01 * (rep + 1) as f64,
                mu_hat: regime.estimates_mu().then_some(effect + 0.1 * rep as f64),
            },
            mu_true: effect,
            max_rhat: Some(1.01),
            error: None,
        }
    }

    #[test]
    fn empty_grid_is_missing_cell() {
        assert!(matches!(render_grid(&[], Layout::Table1), Err(Error::MissingCell(_))));
    }

    #[test]
    fn table1_columns_and_averages() {
        let results = vec![
            rep(-3.0, 10, 0, Regime::SsvsMu, 10, 10),
            rep(-3.0, 10, 1, Regime::SsvsMu, 11, 10),
            rep(-3.0, 10, 0, Regime::SsvsZero, 10, 10),
            rep(-3.0, 10, 1, Regime::SsvsZero, 10, 10),
        ];
        let t = render_grid(&results, Layout::Table1).unwrap();
        assert_eq!(
            &t.header[3..],
            &[
                "No. identified (mu unknown)",
                "No. identified (mu = 0)",
                "No. correct (mu unknown)",
                "No. correct (mu = 0)",
                "No. incorrect (mu unknown)",
                "No. incorrect (mu = 0)"
            ]
        );
        assert_eq!(
            t.rows,
            vec![vec!["1", "-3", "10", "10.5", "10.0", "10.0", "10.0", "0.5", "0.0"]]
        );
        assert!(t.to_text().contains("No. incorrect"));
        assert!(t.to_csv().starts_with("Study,Effect,K1,"));
    }

    #[test]
    fn missing_regime_cell_is_reported() {
        let results = vec![
            rep(-3.0, 10, 0, Regime::SsvsMu, 10, 10),
            rep(-0.1, 5, 0, Regime::SsvsZero, 1, 1),
        ];
        assert!(matches!(
            render_grid(&results, Layout::Table1),
            Err(Error::MissingCell(_))
        ));
    }

    #[test]
    fn table3_reports_spread() {
        let results = vec![
            rep(-3.0, 10, 0, Regime::SsvsMu, 10, 10),
            rep(-3.0, 10, 1, Regime::SsvsMu, 10, 10),
        ];
        let t = render_grid(&results, Layout::Table3).unwrap();
        assert_eq!(t.rows[0], vec!["-3", "10", "-2.950"]);
        assert_eq!(t.rows[1], vec!["", "", "(0.071)"]);
    }

    #[test]
    fn failed_reps_are_excluded() {
        let mut bad = rep(-3.0, 10, 1, Regime::SsvsMu, 0, 0);
        bad.error = Some("boom".into());
        let cells = aggregate(&[rep(-3.0, 10, 0, Regime::SsvsMu, 10, 10), bad]);
        assert_eq!((cells[0].reps, cells[0].failed), (1, 1));
    }

    fn summary(regime: Regime, inclusion: Vec<f64>, beta: Vec<f64>) -> FitSummary {
        FitSummary {
            regime,
            relevant: inclusion.iter().map(|&p| p > 0.5).collect(),
            active: vec![true; inclusion.len()],
            inclusion,
            beta_hat: beta,
            mu_mean: regime.estimates_mu().then_some(-0.4),
            mu_sd: None,
            tau_mean: regime.uses_tau().then_some(0.2),
            diagnostics: vec![],
        }
    }

    #[test]
    fn table6_has_mu_and_tau_rows() {
        let names: Vec<String> = vec!["a".into(), "b".into()];
        let cols = vec![
            FitColumn {
                label: "Laplace".into(),
                outcome_names: names.clone(),
                summary: summary(Regime::Laplace, vec![1.0, 0.0], vec![-0.5, 0.01]),
            },
            FitColumn {
                label: "SSVS".into(),
                outcome_names: vec!["b".into(), "a".into()],
                summary: summary(Regime::SsvsMu, vec![0.2, 0.9], vec![0.0, -0.45]),
            },
        ];
        let t = render_fits(&cols, Layout::Table6).unwrap();
        let labels: Vec<&str> = t.rows.iter().map(|r| r[0].as_str()).collect();
        assert_eq!(labels, vec!["a", "b", "mu", "tau"]);
        assert_eq!(t.rows[0], vec!["a", "-0.500", "-0.450"]);
        assert_eq!(t.rows[2], vec!["mu", "", "-0.400"]);
        let t5 = render_fits(&cols, Layout::Table5).unwrap();
        assert_eq!(t5.rows[0], vec!["a", "1", "0.900"]);
    }
}
