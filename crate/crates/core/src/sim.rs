//! Synthetic data generators and the replication grid.
//!
//! Study 1 draws data from the mixed model itself. Study 2 draws correlated
//! outcomes from a two-factor model in which only the first factor responds to
//! the exposure, so the fitted mixed model is misspecified.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::data::{stack_long, Dataset};
use crate::error::{Error, Result};
use crate::gibbs::{chain_seed, run_chain, SamplerConfig};
use crate::metrics::{
    convergence, default_monitored, detection_counts, max_rhat, mse, point_estimates, relevance, DetectionCounts,
    RepMetrics, RHAT_THRESHOLD,
};
use crate::prior::{PriorConfig, Regime};

#[inline]
fn normal<R: Rng + ?Sized>(rng: &mut R, mean: f64, sd: f64) -> f64 {
    let z: f64 = StandardNormal.sample(rng);
    mean + sd * z
}

/// Exposure model shared by both studies: `z ~ N(0, 1)`, and
/// `x | z ~ N(0, 0.5^2)` when `z < 0`, `N(1, 1)` otherwise.
/// Returns `(x, z)`.
pub fn gen_exposure<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (Vec<f64>, Vec<f64>) {
    let mut x = Vec::with_capacity(n);
    let mut z = Vec::with_capacity(n);
    for _ in 0..n {
        let zi = normal(rng, 0.0, 1.0);
        x.push(exposure_given_z(zi, rng));
        z.push(zi);
    }
    (x, z)
}

/// Draws `x | z` from the exposure model.
pub fn exposure_given_z<R: Rng + ?Sized>(z: f64, rng: &mut R) -> f64 {
    if z < 0.0 {
        normal(rng, 0.0, 0.5)
    } else {
        normal(rng, 1.0, 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Study {
    /// Data generated from the mixed model.
    One,
    /// Data generated from a two-factor model.
    Two,
}

impl Study {
    pub fn number(self) -> u8 {
        match self {
            Study::One => 1,
            Study::Two => 2,
        }
    }

    pub fn from_number(n: u8) -> Option<Study> {
        match n {
            1 => Some(Study::One),
            2 => Some(Study::Two),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Study1Params {
    pub n: usize,
    pub k: usize,
    pub k1: usize,
    pub mu_true: f64,
    pub seed: u64,
}

impl Study1Params {
    /// `n = 100`, `K = 20`.
    pub fn new(k1: usize, mu_true: f64, seed: u64) -> Self {
        Study1Params {
            n: 100,
            k: 20,
            k1,
            mu_true,
            seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Study2Params {
    pub n: usize,
    pub k: usize,
    pub k1: usize,
    pub omega: f64,
    pub seed: u64,
}

impl Study2Params {
    /// `n = 100`, `K = 20`.
    pub fn new(k1: usize, omega: f64, seed: u64) -> Self {
        Study2Params {
            n: 100,
            k: 20,
            k1,
            omega,
            seed,
        }
    }
}

/// Ground truth of a generated dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthRecord {
    pub study: Study,
    pub beta: Vec<f64>,
    pub relevant: Vec<bool>,
    /// The common effect: `mu` for Study 1, `omega` times the mean nonzero
    /// first-factor loading for Study 2.
    pub mu_true: f64,
    /// The generator's effect-size parameter (`mu` or `omega`).
    pub effect: f64,
    pub n: usize,
    pub k: usize,
    pub k1: usize,
    pub seed: u64,
    /// Factor loadings `(Lambda[k,1], Lambda[k,2])`, Study 2 only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loadings: Option<Vec<(f64, f64)>>,
}

fn check_sizes(n: usize, k: usize, k1: usize) -> Result<()> {
    if n < 2 || k == 0 || k1 == 0 || k1 > k {
        return Err(Error::InvalidConfig(format!(
            "need n >= 2 and 1 <= K1 <= K, got n={n}, K={k}, K1={k1}"
        )));
    }
    Ok(())
}

fn outcome_names(k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("y{i}")).collect()
}

/// Study 1: `y_ik = nu_k + beta_k x_i + alpha_i + gamma_k z_i + eps_ik` with
/// `nu_k ~ N(0, 1)`, `sigma_k^2 ~ N(1.5, 0.3)` truncated below at 0.05,
/// `beta_k ~ N(mu, 0.01 mu^2)` for the first `K1` outcomes and 0 otherwise,
/// `gamma_k ~ N(0, 1)`, `alpha_i ~ N(0, 1)`.
pub fn generate_study1(p: &Study1Params) -> Result<(Dataset, TruthRecord)> {
    check_sizes(p.n, p.k, p.k1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let (x, z) = gen_exposure(p.n, &mut rng);
    let sigma_r = 1.0;
    let mut nu = Vec::with_capacity(p.k);
    let mut sigma = Vec::with_capacity(p.k);
    let mut beta = Vec::with_capacity(p.k);
    let mut gamma = Vec::with_capacity(p.k);
    for k in 0..p.k {
        nu.push(normal(&mut rng, 0.0, 1.0));
        let var = loop {
            let v = normal(&mut rng, 1.5, 0.3.sqrt());
            if v > 0.05 {
                break v;
            }
        };
        sigma.push(var.sqrt());
        beta.push(if k < p.k1 {
            normal(&mut rng, p.mu_true, 0.1 * p.mu_true.abs())
        } else {
            0.0
        });
        gamma.push(normal(&mut rng, 0.0, 1.0));
    }
    let alpha: Vec<f64> = (0..p.n).map(|_| normal(&mut rng, 0.0, sigma_r)).collect();
    let rows = (0..p.n)
        .map(|i| {
            (0..p.k)
                .map(|k| {
                    let mean = nu[k] + beta[k] * x[i] + alpha[i] + gamma[k] * z[i];
                    Some(normal(&mut rng, mean, sigma[k]))
                })
                .collect()
        })
        .collect();
    let data = Dataset::new(x, z, rows, outcome_names(p.k))?;
    let truth = TruthRecord {
        study: Study::One,
        relevant: (0..p.k).map(|k| k < p.k1).collect(),
        beta,
        mu_true: p.mu_true,
        effect: p.mu_true,
        n: p.n,
        k: p.k,
        k1: p.k1,
        seed: p.seed,
        loadings: None,
    };
    Ok((data, truth))
}

/// Study 2: `y_i = nu + Lambda (eta_1i, eta_2i) + e_i` with
/// `eta_1 = omega x + 0.1 z + u`, `u, eta_2 ~ N(0, 1)`, `e ~ N(0, I)`,
/// `Lambda[k,1] ~ N(1, 0.1)` for the first `K1` outcomes and 0 otherwise,
/// `Lambda[k,2] ~ N(1, 0.2)`, `nu_k ~ N(0, 100)`.
pub fn generate_study2(p: &Study2Params) -> Result<(Dataset, TruthRecord)> {
    check_sizes(p.n, p.k, p.k1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let (x, z) = gen_exposure(p.n, &mut rng);
    let mut loadings = Vec::with_capacity(p.k);
    let mut nu = Vec::with_capacity(p.k);
    for k in 0..p.k {
        let l1 = if k < p.k1 {
            normal(&mut rng, 1.0, 0.1.sqrt())
        } else {
            0.0
        };
        let l2 = normal(&mut rng, 1.0, 0.2.sqrt());
        loadings.push((l1, l2));
        nu.push(normal(&mut rng, 0.0, 10.0));
    }
    let rows = (0..p.n)
        .map(|i| {
            let eta1 = p.omega * x[i] + 0.1 * z[i] + normal(&mut rng, 0.0, 1.0);
            let eta2 = normal(&mut rng, 0.0, 1.0);
            loadings
                .iter()
                .zip(&nu)
                .map(|(&(l1, l2), &nk)| Some(nk + l1 * eta1 + l2 * eta2 + normal(&mut rng, 0.0, 1.0)))
                .collect()
        })
        .collect();
    let data = Dataset::new(x, z, rows, outcome_names(p.k))?;
    let beta: Vec<f64> = loadings.iter().map(|l| l.0 * p.omega).collect();
    let mean_loading = loadings[..p.k1].iter().map(|l| l.0).sum::<f64>() / p.k1 as f64;
    let truth = TruthRecord {
        study: Study::Two,
        relevant: (0..p.k).map(|k| k < p.k1).collect(),
        beta,
        mu_true: p.omega * mean_loading,
        effect: p.omega,
        n: p.n,
        k: p.k,
        k1: p.k1,
        seed: p.seed,
        loadings: Some(loadings),
    };
    Ok((data, truth))
}

/// Generates a dataset for `study` with the given effect size.
pub fn generate(study: Study, n: usize, k: usize, k1: usize, effect: f64, seed: u64) -> Result<(Dataset, TruthRecord)> {
    match study {
        Study::One => generate_study1(&Study1Params {
            n,
            k,
            k1,
            mu_true: effect,
            seed,
        }),
        Study::Two => generate_study2(&Study2Params {
            n,
            k,
            k1,
            omega: effect,
            seed,
        }),
    }
}

/// Full description of a replication grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub study: Study,
    pub n: usize,
    pub k: usize,
    pub effects: Vec<f64>,
    pub k1s: Vec<usize>,
    pub regimes: Vec<Regime>,
    pub reps: usize,
    pub master_seed: u64,
    pub sampler: SamplerConfig,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::InvalidConfig("reps must be >= 1".into()));
        }
        if self.effects.is_empty() || self.k1s.is_empty() || self.regimes.is_empty() {
            return Err(Error::InvalidConfig(
                "grid needs at least one effect, K1 and regime".into(),
            ));
        }
        for &k1 in &self.k1s {
            check_sizes(self.n, self.k, k1)?;
        }
        self.sampler.validate()
    }

    /// Every (effect, K1, replication, regime) fit of the grid in a fixed order.
    pub fn tasks(&self) -> Vec<GridTask> {
        let mut out = Vec::new();
        for &effect in &self.effects {
            for &k1 in &self.k1s {
                for rep in 0..self.reps {
                    for &regime in &self.regimes {
                        out.push(GridTask {
                            effect,
                            k1,
                            rep,
                            regime,
                        });
                    }
                }
            }
        }
        out
    }

    /// Seed of the dataset for one replication. Depends only on the master
    /// seed, study, effect, `K1` and replication index, so a cell reproduces
    /// whatever else the grid contains.
    pub fn dataset_seed(&self, effect: f64, k1: usize, rep: usize) -> u64 {
        let s = chain_seed(self.master_seed, self.study.number() as usize);
        let s = chain_seed(s ^ effect.to_bits(), k1);
        chain_seed(s, rep)
    }

    /// Sampler seed for fitting `regime` to a dataset.
    pub fn fit_seed(dataset_seed: u64, regime: Regime) -> u64 {
        let idx = Regime::ALL.iter().position(|&r| r == regime).unwrap_or(0);
        chain_seed(dataset_seed, 1000 + idx)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridTask {
    pub effect: f64,
    pub k1: usize,
    pub rep: usize,
    pub regime: Regime,
}

/// Outcome of one fit in the grid. Failed fits carry the error message and
/// NaN metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepResult {
    pub study: Study,
    pub effect: f64,
    pub k1: usize,
    pub rep: usize,
    pub regime: Regime,
    pub dataset_seed: u64,
    pub metrics: RepMetrics,
    pub mu_true: f64,
    pub max_rhat: Option<f64>,
    pub error: Option<String>,
}

impl RepResult {
    pub fn ok(&self) -> bool {
        self.error.is_none()
    }

    /// Fitted without error and every monitored scalar has split R-hat at or
    /// below the threshold.
    pub fn converged(&self) -> bool {
        self.ok() && self.max_rhat.is_some_and(|r| r <= RHAT_THRESHOLD)
    }
}

/// The prior used for `regime` in the simulation studies.
pub fn simulation_prior(regime: Regime, truth: &TruthRecord) -> PriorConfig {
    let prior = PriorConfig::simulation(regime, truth.k);
    if regime == Regime::Subset {
        prior.with_subset_mask(truth.relevant.clone())
    } else {
        prior
    }
}

/// Fits one grid task.
pub fn run_task(spec: &GridSpec, task: &GridTask) -> RepResult {
    let dataset_seed = spec.dataset_seed(task.effect, task.k1, task.rep);
    let mut result = RepResult {
        study: spec.study,
        effect: task.effect,
        k1: task.k1,
        rep: task.rep,
        regime: task.regime,
        dataset_seed,
        metrics: RepMetrics {
            counts: DetectionCounts::default(),
            mse: f64::NAN,
            mu_hat: None,
        },
        mu_true: f64::NAN,
        max_rhat: None,
        error: None,
    };
    if let Err(e) = fit_task(spec, task, dataset_seed, &mut result) {
        result.error = Some(e.to_string());
    }
    result
}

fn fit_task(spec: &GridSpec, task: &GridTask, dataset_seed: u64, out: &mut RepResult) -> Result<()> {
    let (data, truth) = generate(spec.study, spec.n, spec.k, task.k1, task.effect, dataset_seed)?;
    out.mu_true = truth.mu_true;
    let design = stack_long(&data);
    let prior = simulation_prior(task.regime, &truth);
    let sampler = SamplerConfig {
        seed: GridSpec::fit_seed(dataset_seed, task.regime),
        ..spec.sampler.clone()
    };
    let chain = run_chain(&design, &prior, &sampler)?;
    let relevant = relevance(&chain)?;
    out.metrics.counts = detection_counts(&relevant, &truth.relevant)?;
    out.metrics.mse = mse(&point_estimates(&chain)?, &truth.beta)?;
    if task.regime.estimates_mu() {
        out.metrics.mu_hat = Some(chain.all_draws().map(|s| s.mu).sum::<f64>() / chain.total_draws() as f64);
    }
    if sampler.n_chains >= 2 {
        let diags = convergence(&chain, &default_monitored(&prior, chain.k))?;
        out.max_rhat = max_rhat(&diags);
    }
    Ok(())
}

/// Runs every task of the grid sequentially.
pub fn run_replication_grid(spec: &GridSpec) -> Result<Vec<RepResult>> {
    spec.validate()?;
    Ok(spec.tasks().iter().map(|t| run_task(spec, t)).collect())
}
