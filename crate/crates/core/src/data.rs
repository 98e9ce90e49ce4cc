//! Wide-format datasets and the stacked long-format design.
//!
//! Each individual contributes one record per observed outcome. In the long
//! design the exposure enters through outcome-specific interaction columns
//! `x_ik = exposure_j * 1(p = k)`, so the `K` outcome effects become `K`
//! ordinary regression coefficients.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `n` individuals, each with an exposure, a covariate `z`, and `K` possibly
/// missing outcome values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    exposure: Vec<f64>,
    covariate_z: Vec<f64>,
    /// Row-major `n x K`; `None` marks a missing cell.
    outcomes: Vec<Option<f64>>,
    outcome_names: Vec<String>,
}

impl Dataset {
    /// Builds a dataset from per-individual rows of outcome values.
    pub fn new(
        exposure: Vec<f64>,
        covariate_z: Vec<f64>,
        outcomes: Vec<Vec<Option<f64>>>,
        outcome_names: Vec<String>,
    ) -> Result<Self> {
        let n = exposure.len();
        let k = outcome_names.len();
        if n == 0 {
            return Err(Error::InvalidDataset("no individuals".into()));
        }
        if k == 0 {
            return Err(Error::InvalidDataset("no outcomes".into()));
        }
        if covariate_z.len() != n || outcomes.len() != n {
            return Err(Error::InvalidDataset(format!(
                "exposure has {n} entries but z has {} and outcomes has {} rows",
                covariate_z.len(),
                outcomes.len()
            )));
        }
        if let Some(j) = exposure.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "exposure of individual {} is not finite",
                j + 1
            )));
        }
        if let Some(j) = covariate_z.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "z of individual {} is not finite",
                j + 1
            )));
        }
        let mut flat = Vec::with_capacity(n * k);
        for (j, row) in outcomes.into_iter().enumerate() {
            if row.len() != k {
                return Err(Error::InvalidDataset(format!(
                    "individual {} has {} outcome values, expected {k}",
                    j + 1,
                    row.len()
                )));
            }
            if let Some(v) = row.iter().flatten().find(|v| !v.is_finite()) {
                return Err(Error::InvalidDataset(format!(
                    "individual {} has non-finite outcome value {v}",
                    j + 1
                )));
            }
            flat.extend(row);
        }
        let data = Dataset {
            exposure,
            covariate_z,
            outcomes: flat,
            outcome_names,
        };
        for kk in 0..k {
            let col: Vec<f64> = data.observed_column(kk).collect();
            if col.len() < 2 || col.iter().all(|&v| v == col[0]) {
                return Err(Error::InvalidDataset(format!(
                    "outcome `{}` needs at least two distinct observed values",
                    data.outcome_names[kk]
                )));
            }
        }
        Ok(data)
    }

    pub fn n(&self) -> usize {
        self.exposure.len()
    }

    pub fn k(&self) -> usize {
        self.outcome_names.len()
    }

    pub fn exposure(&self) -> &[f64] {
        &self.exposure
    }

    pub fn covariate_z(&self) -> &[f64] {
        &self.covariate_z
    }

    pub fn outcome_names(&self) -> &[String] {
        &self.outcome_names
    }

    /// Outcome `k` of individual `j`, `None` when missing.
    pub fn outcome(&self, j: usize, k: usize) -> Option<f64> {
        self.outcomes[j * self.k() + k]
    }

    /// Outcome matrix as per-individual rows.
    pub fn outcome_rows(&self) -> Vec<Vec<Option<f64>>> {
        self.outcomes.chunks(self.k()).map(|r| r.to_vec()).collect()
    }

    pub fn observed_column(&self, k: usize) -> impl Iterator<Item = f64> + '_ {
        (0..self.n()).filter_map(move |j| self.outcome(j, k))
    }

    pub fn observed_count(&self) -> usize {
        self.outcomes.iter().filter(|c| c.is_some()).count()
    }

    /// Replaces exposures by `ln(exposure + 1)`.
    pub fn with_log1p_exposure(mut self) -> Result<Self> {
        if let Some(j) = self.exposure.iter().position(|&x| x <= -1.0) {
            return Err(Error::InvalidDataset(format!(
                "exposure of individual {} is <= -1; log(x + 1) undefined",
                j + 1
            )));
        }
        for x in &mut self.exposure {
            *x = x.ln_1p();
        }
        Ok(self)
    }

    /// Rescales the exposure to sample mean 0 and sample variance 1.
    pub fn with_standardized_exposure(mut self) -> Result<Self> {
        let (m, sd) = mean_sd(&self.exposure);
        if sd.is_nan() || sd <= 0.0 {
            return Err(Error::ConstantColumn {
                outcome: "exposure".into(),
            });
        }
        for x in &mut self.exposure {
            *x = (*x - m) / sd;
        }
        Ok(self)
    }

    /// Keeps only the outcomes flagged `true`, in their original order.
    pub fn select_outcomes(&self, keep: &[bool]) -> Result<Self> {
        if keep.len() != self.k() {
            return Err(Error::DimensionMismatch(format!(
                "outcome mask has {} entries, dataset has {} outcomes",
                keep.len(),
                self.k()
            )));
        }
        let rows = self
            .outcome_rows()
            .into_iter()
            .map(|r| r.into_iter().zip(keep).filter(|(_, &k)| k).map(|(v, _)| v).collect())
            .collect();
        let names = self
            .outcome_names
            .iter()
            .zip(keep)
            .filter(|(_, &k)| k)
            .map(|(n, _)| n.clone())
            .collect();
        Dataset::new(self.exposure.clone(), self.covariate_z.clone(), rows, names)
    }
}

/// One stacked record: the observed value of outcome `outcome` for
/// individual `individual` (both zero-based).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LongRow {
    pub y: f64,
    pub individual: usize,
    pub outcome: usize,
    /// Exposure of the row's individual.
    pub exposure: f64,
    pub z: f64,
}

impl LongRow {
    /// The interaction covariate `x_ik`.
    #[inline]
    pub fn x_interaction(&self, k: usize) -> f64 {
        if k == self.outcome {
            self.exposure
        } else {
            0.0
        }
    }

    /// All `K` interaction covariates of this row.
    pub fn x_interactions(&self, k: usize) -> Vec<f64> {
        (0..k).map(|kk| self.x_interaction(kk)).collect()
    }
}

/// Long-format design: one row per observed (individual, outcome) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LongDesign {
    n: usize,
    k: usize,
    rows: Vec<LongRow>,
}

impl LongDesign {
    /// Builds a design from explicit rows, checking index ranges.
    pub fn from_rows(n: usize, k: usize, rows: Vec<LongRow>) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::InvalidDataset("design needs n >= 1 and K >= 1".into()));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.individual >= n || r.outcome >= k {
                return Err(Error::InvalidDataset(format!(
                    "row {i} references individual {} / outcome {} outside n={n}, K={k}",
                    r.individual, r.outcome
                )));
            }
            if !(r.y.is_finite() && r.exposure.is_finite() && r.z.is_finite()) {
                return Err(Error::InvalidDataset(format!("row {i} has a non-finite value")));
            }
        }
        Ok(LongDesign { n, k, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rows(&self) -> &[LongRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Overwrites the responses, keeping covariates and indices.
    pub fn set_responses(&mut self, y: &[f64]) -> Result<()> {
        if y.len() != self.rows.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} responses for {} rows",
                y.len(),
                self.rows.len()
            )));
        }
        for (r, &v) in self.rows.iter_mut().zip(y) {
            r.y = v;
        }
        Ok(())
    }

    /// Regroups rows into an `n x K` outcome matrix; cells without a row are `None`.
    pub fn unstack(&self) -> Vec<Vec<Option<f64>>> {
        let mut out = alloc::vec![alloc::vec![None; self.k]; self.n];
        for r in &self.rows {
            out[r.individual][r.outcome] = Some(r.y);
        }
        out
    }
}

/// Stacks a wide dataset individual-major, then by outcome index. Missing
/// cells produce no row.
pub fn stack_long(data: &Dataset) -> LongDesign {
    let (n, k) = (data.n(), data.k());
    let mut rows = Vec::with_capacity(data.observed_count());
    for j in 0..n {
        for p in 0..k {
            if let Some(y) = data.outcome(j, p) {
                rows.push(LongRow {
                    y,
                    individual: j,
                    outcome: p,
                    exposure: data.exposure[j],
                    z: data.covariate_z[j],
                });
            }
        }
    }
    LongDesign { n, k, rows }
}

/// Per-outcome location and scale used to rescale outcomes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardizationRecord {
    pub applied: bool,
    pub means: Vec<f64>,
    pub sds: Vec<f64>,
}

impl StandardizationRecord {
    /// The record for data left on its original scale.
    pub fn identity(k: usize) -> Self {
        StandardizationRecord {
            applied: false,
            means: alloc::vec![0.0; k],
            sds: alloc::vec![1.0; k],
        }
    }

    /// Converts an exposure effect on the standardized scale of outcome `k`
    /// back to that outcome's original units.
    pub fn effect_to_original(&self, k: usize, effect: f64) -> f64 {
        effect * self.sds[k]
    }
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, var.sqrt())
}

/// Rescales every outcome to sample mean 0 and sample variance 1 over its
/// observed cells (divisor `n_obs - 1`). Missing cells stay missing.
pub fn standardize(data: &Dataset) -> Result<(Dataset, StandardizationRecord)> {
    let k = data.k();
    let mut means = Vec::with_capacity(k);
    let mut sds = Vec::with_capacity(k);
    for kk in 0..k {
        let col: Vec<f64> = data.observed_column(kk).collect();
        let (m, sd) = if col.len() >= 2 { mean_sd(&col) } else { (0.0, 0.0) };
        if !sd.is_finite() || sd <= 0.0 {
            return Err(Error::ConstantColumn {
                outcome: data.outcome_names[kk].clone(),
            });
        }
        means.push(m);
        sds.push(sd);
    }
    let mut out = data.clone();
    for (idx, cell) in out.outcomes.iter_mut().enumerate() {
        let kk = idx % k;
        if let Some(v) = cell {
            *v = (*v - means[kk]) / sds[kk];
        }
    }
    Ok((
        out,
        StandardizationRecord {
            applied: true,
            means,
            sds,
        },
    ))
}
