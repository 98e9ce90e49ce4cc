//! Wide-format dataset CSV.
//!
//! The header must contain `id`, `exposure` and `z`; every other column is an
//! outcome, in file order. Empty cells and `NA` in outcome columns are
//! missing values.

use std::collections::HashSet;
use std::path::Path;

use outsel_core::Dataset;

use crate::error::{IoError, Result};

const REQUIRED: [&str; 3] = ["id", "exposure", "z"];

fn is_missing(cell: &str) -> bool {
    cell.is_empty() || cell.eq_ignore_ascii_case("na")
}

/// Parses a dataset from CSV text.
pub fn parse_dataset(text: &str) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| IoError::Parse(format!("header: {e}")))?
        .iter()
        .map(str::to_string)
        .collect();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| IoError::MissingColumn(name.to_string()))
    };
    let (id_col, x_col, z_col) = (col("id")?, col("exposure")?, col("z")?);
    let outcome_cols: Vec<usize> = (0..header.len())
        .filter(|i| !REQUIRED.contains(&header[*i].as_str()))
        .collect();
    let names: Vec<String> = outcome_cols.iter().map(|&i| header[i].clone()).collect();

    let mut seen = HashSet::new();
    let mut exposure = Vec::new();
    let mut z = Vec::new();
    let mut outcomes = Vec::new();
    for (idx, rec) in rdr.records().enumerate() {
        let line = idx + 2;
        let rec = rec.map_err(|e| IoError::Parse(format!("line {line}: {e}")))?;
        let cell = |c: usize| rec.get(c).unwrap_or("");
        let number = |c: usize| -> Result<f64> {
            let v = cell(c);
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| IoError::NonNumeric {
                    line,
                    column: header[c].clone(),
                    value: v.to_string(),
                })
        };
        let required = |c: usize| -> Result<f64> {
            if is_missing(cell(c)) {
                Err(IoError::MissingValue {
                    line,
                    column: header[c].clone(),
                })
            } else {
                number(c)
            }
        };
        let id = cell(id_col).to_string();
        if !seen.insert(id.clone()) {
            return Err(IoError::DuplicateId { id, line });
        }
        exposure.push(required(x_col)?);
        z.push(required(z_col)?);
        let row = outcome_cols
            .iter()
            .map(|&c| {
                if is_missing(cell(c)) {
                    Ok(None)
                } else {
                    number(c).map(Some)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        outcomes.push(row);
    }
    Ok(Dataset::new(exposure, z, outcomes, names)?)
}

pub fn read_dataset(path: &Path) -> Result<Dataset> {
    let text = std::fs::read_to_string(path).map_err(IoError::io(path))?;
    parse_dataset(&text)
}

/// Renders a dataset with ids `1..=n`; missing cells are left empty.
pub fn format_dataset(data: &Dataset) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["id".to_string(), "exposure".into(), "z".into()];
    header.extend(data.outcome_names().iter().cloned());
    w.write_record(&header).expect("in-memory write");
    for j in 0..data.n() {
        let mut rec = vec![
            (j + 1).to_string(),
            data.exposure()[j].to_string(),
            data.covariate_z()[j].to_string(),
        ];
        rec.extend((0..data.k()).map(|k| data.outcome(j, k).map(|v| v.to_string()).unwrap_or_default()));
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("csv output is utf-8")
}

pub fn write_dataset(data: &Dataset, path: &Path) -> Result<()> {
    crate::write_atomic(path, format_dataset(data).as_bytes())
}

/// Reads per-outcome inclusion probabilities, one per line. Blank lines and
/// lines starting with `#` are skipped.
pub fn read_inclusion_prior(path: &Path, k: usize) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path).map_err(IoError::io(path))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let p: f64 = t.parse().map_err(|_| {
            IoError::Parse(format!(
                "{}: line {}: `{t}` is not a probability",
                path.display(),
                i + 1
            ))
        })?;
        if !(p > 0.0 && p <= 1.0) {
            return Err(IoError::Parse(format!(
                "{}: line {}: probability {p} outside (0, 1]",
                path.display(),
                i + 1
            )));
        }
        out.push(p);
    }
    if out.len() != k {
        return Err(IoError::Schema(format!(
            "{} lists {} probabilities but the dataset has {k} outcomes",
            path.display(),
            out.len()
        )));
    }
    Ok(out)
}

/// Reads a subset mask given as outcome names, one per line.
pub fn read_subset_mask(path: &Path, names: &[String]) -> Result<Vec<bool>> {
    let text = std::fs::read_to_string(path).map_err(IoError::io(path))?;
    let mut mask = vec![false; names.len()];
    for line in text.lines() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let k = names
            .iter()
            .position(|n| n == t)
            .ok_or_else(|| IoError::Schema(format!("{}: unknown outcome `{t}`", path.display())))?;
        mask[k] = true;
    }
    Ok(mask)
}
