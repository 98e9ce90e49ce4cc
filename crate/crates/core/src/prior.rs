//! The probabilistic model: likelihood, prior regimes and the log joint density.
//!
//! Record `i` (individual `j`, outcome `p`) has mean
//! `nu[p] + alpha[j] + beta[p] * exposure[j] + gamma[p] * z[j]` and residual
//! standard deviation `sigma[p]`. The exposure effects `beta` get one of the
//! regimes in [`Regime`]; the spike-and-slab regimes put
//! `beta_k | I_k = 1 ~ N(mu, tau^2)` and `beta_k | I_k = 0 ~ N(0, tau^2 / c)`
//! (or `N(0, g1)` with a fixed spike).

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::data::{LongDesign, LongRow};
use crate::error::{Error, Result};
use crate::math::{laplace_logpdf, lognormal_logpdf, normal_logpdf, normal_logpdf_var};

/// Prior placed on the exposure effects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Spike-and-slab with a slab centred at the common effect `mu`.
    SsvsMu,
    /// Classical spike-and-slab, slab centred at zero; `mu` is not part of the model.
    SsvsZero,
    /// `beta_k ~ N(mu, tau^2)` for every outcome, no selection.
    Hierarchical,
    /// Independent `Laplace(0, b)` shrinkage on each `beta_k`.
    Laplace,
    /// Hierarchical prior on the unmasked outcomes only; masked effects are fixed at zero.
    Subset,
}

impl Regime {
    pub const ALL: [Regime; 5] = [
        Regime::SsvsMu,
        Regime::SsvsZero,
        Regime::Hierarchical,
        Regime::Laplace,
        Regime::Subset,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Regime::SsvsMu => "ssvs_mu",
            Regime::SsvsZero => "ssvs_zero",
            Regime::Hierarchical => "hierarchical",
            Regime::Laplace => "laplace",
            Regime::Subset => "subset",
        }
    }

    pub fn parse(s: &str) -> Option<Regime> {
        Regime::ALL.into_iter().find(|r| r.name() == s)
    }

    /// Whether the regime samples inclusion indicators.
    pub fn has_indicators(self) -> bool {
        matches!(self, Regime::SsvsMu | Regime::SsvsZero)
    }

    /// Whether the common effect `mu` is a model parameter.
    pub fn estimates_mu(self) -> bool {
        matches!(self, Regime::SsvsMu | Regime::Hierarchical | Regime::Subset)
    }

    /// Whether `tau` is a model parameter.
    pub fn uses_tau(self) -> bool {
        self != Regime::Laplace
    }
}

impl core::fmt::Display for Regime {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// Variance of the spike component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SpikeMode {
    /// Spike variance `tau^2 / c`.
    Ratio { c: f64 },
    /// Spike variance fixed at `g1`.
    Fixed { g1: f64 },
}

/// `ln s ~ N(location, scale^2)`; `scale` is the standard deviation of the log.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogNormalPrior {
    pub location: f64,
    pub scale: f64,
}

impl LogNormalPrior {
    pub fn new(location: f64, scale: f64) -> Self {
        LogNormalPrior { location, scale }
    }

    pub fn log_density(&self, x: f64) -> f64 {
        lognormal_logpdf(x, self.location, self.scale)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriorConfig {
    pub regime: Regime,
    pub spike: SpikeMode,
    /// `p(I_k = 1)` per outcome, each in `(0, 1]`.
    pub inclusion_prior: Vec<f64>,
    pub mu_prior_sd: f64,
    pub tau_logprior: LogNormalPrior,
    /// Shared by the residual scales and the random-intercept scale.
    pub sigma_logprior: LogNormalPrior,
    pub nu_prior_sd: f64,
    pub gamma_prior_sd: f64,
    pub laplace_scale: f64,
    /// Outcomes kept by the subset regime.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subset_mask: Option<Vec<bool>>,
}

impl PriorConfig {
    /// Flat defaults used for the simulation studies: `mu ~ N(0, 100)`,
    /// `nu ~ N(0, 1000)`, `gamma ~ N(0, 100)`, `tau ~ LN(0, 1)`,
    /// `sigma ~ LN(0, 10)`, spike ratio `c = 100`, `p(I_k = 1) = 0.5`.
    pub fn simulation(regime: Regime, k: usize) -> Self {
        PriorConfig {
            regime,
            spike: SpikeMode::Ratio { c: 100.0 },
            inclusion_prior: vec![0.5; k],
            mu_prior_sd: 10.0,
            tau_logprior: LogNormalPrior::new(0.0, 1.0),
            sigma_logprior: LogNormalPrior::new(0.0, 10.0),
            nu_prior_sd: 1000.0.sqrt(),
            gamma_prior_sd: 10.0,
            laplace_scale: 1.0,
            subset_mask: None,
        }
    }

    /// Defaults for analysing standardized real data: as [`Self::simulation`]
    /// but with `mu ~ N(0, 1)`.
    pub fn application(regime: Regime, k: usize) -> Self {
        PriorConfig {
            mu_prior_sd: 1.0,
            ..PriorConfig::simulation(regime, k)
        }
    }

    pub fn with_subset_mask(mut self, mask: Vec<bool>) -> Self {
        self.subset_mask = Some(mask);
        self
    }

    pub fn validate(&self, k: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.inclusion_prior.len() != k {
            return Err(Error::DimensionMismatch(format!(
                "{} inclusion probabilities for {k} outcomes",
                self.inclusion_prior.len()
            )));
        }
        if let Some(p) = self.inclusion_prior.iter().find(|&&p| !(p > 0.0 && p <= 1.0)) {
            return bad(format!("inclusion probability {p} outside (0, 1]"));
        }
        match self.spike {
            SpikeMode::Ratio { c } if !(c > 0.0 && c.is_finite()) => {
                return bad(format!("spike ratio c = {c} must be positive"))
            }
            SpikeMode::Fixed { g1 } if !(g1 > 0.0 && g1.is_finite()) => {
                return bad(format!("spike variance g1 = {g1} must be positive"))
            }
            _ => {}
        }
        for (name, v) in [
            ("mu_prior_sd", self.mu_prior_sd),
            ("tau_logprior.scale", self.tau_logprior.scale),
            ("sigma_logprior.scale", self.sigma_logprior.scale),
            ("nu_prior_sd", self.nu_prior_sd),
            ("gamma_prior_sd", self.gamma_prior_sd),
            ("laplace_scale", self.laplace_scale),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} = {v} must be positive and finite"));
            }
        }
        match (&self.subset_mask, self.regime) {
            (None, Regime::Subset) => bad("subset regime requires an outcome mask".into()),
            (Some(_), r) if r != Regime::Subset => bad(format!("outcome mask given for regime {r}")),
            (Some(m), _) if m.len() != k => Err(Error::DimensionMismatch(format!(
                "subset mask has {} entries for {k} outcomes",
                m.len()
            ))),
            (Some(m), _) if !m.iter().any(|&b| b) => bad("subset mask keeps no outcome".into()),
            _ => Ok(()),
        }
    }

    /// Whether `beta_k` is a free parameter (false only for outcomes masked out
    /// by the subset regime).
    #[inline]
    pub fn beta_active(&self, k: usize) -> bool {
        match &self.subset_mask {
            Some(m) if self.regime == Regime::Subset => m[k],
            _ => true,
        }
    }

    /// Spike variance for the current `tau`.
    #[inline]
    pub fn spike_variance(&self, tau: f64) -> f64 {
        match self.spike {
            SpikeMode::Ratio { c } => tau * tau / c,
            SpikeMode::Fixed { g1 } => g1,
        }
    }

    /// Slab mean: `mu`, or zero for the classical spike-and-slab.
    #[inline]
    pub fn slab_mean(&self, mu: f64) -> f64 {
        if self.regime == Regime::SsvsZero {
            0.0
        } else {
            mu
        }
    }

    /// Normal prior `(mean, variance)` on `beta_k` given its indicator.
    /// Not meaningful for the Laplace regime.
    #[inline]
    pub fn beta_component(&self, included: bool, mu: f64, tau: f64) -> (f64, f64) {
        let slab = match self.regime {
            Regime::SsvsMu | Regime::SsvsZero => included,
            _ => true,
        };
        if slab {
            (self.slab_mean(mu), tau * tau)
        } else {
            (0.0, self.spike_variance(tau))
        }
    }
}

/// Conditional log prior of one exposure effect.
pub fn log_beta_prior(beta_k: f64, included: bool, mu: f64, tau: f64, prior: &PriorConfig) -> f64 {
    if prior.regime == Regime::Laplace {
        return laplace_logpdf(beta_k, prior.laplace_scale);
    }
    let (m, v) = prior.beta_component(included, mu, tau);
    normal_logpdf_var(beta_k, m, v)
}

/// One point in parameter space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterState {
    pub nu: Vec<f64>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
    pub mu: f64,
    pub tau: f64,
    pub sigma: Vec<f64>,
    pub sigma_r: f64,
    pub indicators: Vec<bool>,
}

impl ParameterState {
    /// A neutral state: zeros, unit scales, all indicators on.
    pub fn zeros(n: usize, k: usize) -> Self {
        ParameterState {
            nu: vec![0.0; k],
            alpha: vec![0.0; n],
            beta: vec![0.0; k],
            gamma: vec![0.0; k],
            mu: 0.0,
            tau: 1.0,
            sigma: vec![1.0; k],
            sigma_r: 1.0,
            indicators: vec![true; k],
        }
    }

    pub fn k(&self) -> usize {
        self.beta.len()
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn check_dims(&self, n: usize, k: usize) -> Result<()> {
        let ok = self.nu.len() == k
            && self.beta.len() == k
            && self.gamma.len() == k
            && self.sigma.len() == k
            && self.indicators.len() == k
            && self.alpha.len() == n;
        if ok {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "state has K={} (nu {}, gamma {}, sigma {}, I {}) and n={}, design has K={k}, n={n}",
                self.beta.len(),
                self.nu.len(),
                self.gamma.len(),
                self.sigma.len(),
                self.indicators.len(),
                self.alpha.len()
            )))
        }
    }

    /// Positive scales and subset-mask consistency.
    pub fn satisfies_invariants(&self, prior: &PriorConfig) -> bool {
        let scales = self.tau > 0.0 && self.sigma_r > 0.0 && self.sigma.iter().all(|&s| s > 0.0);
        let masked = (0..self.k()).all(|k| prior.beta_active(k) || (self.beta[k] == 0.0 && !self.indicators[k]));
        scales && masked
    }

    /// Mean of the response for a design row.
    #[inline]
    pub fn linear_predictor(&self, row: &LongRow) -> f64 {
        let p = row.outcome;
        self.nu[p] + self.alpha[row.individual] + self.beta[p] * row.exposure + self.gamma[p] * row.z
    }

    pub(crate) fn is_finite(&self) -> bool {
        let all = |v: &[f64]| v.iter().all(|x| x.is_finite());
        all(&self.nu)
            && all(&self.alpha)
            && all(&self.beta)
            && all(&self.gamma)
            && all(&self.sigma)
            && self.mu.is_finite()
            && self.tau.is_finite()
            && self.sigma_r.is_finite()
    }

    /// Compact text rendering of the scalar and per-outcome parameters.
    pub fn dump(&self) -> String {
        format!(
            "mu={} tau={} sigma_r={} beta={:?} I={:?} nu={:?} gamma={:?} sigma={:?}",
            self.mu, self.tau, self.sigma_r, self.beta, self.indicators, self.nu, self.gamma, self.sigma
        )
    }
}

/// Log prior density of every parameter in `state`.
pub fn log_prior(state: &ParameterState, prior: &PriorConfig) -> f64 {
    let regime = prior.regime;
    let mut lp = 0.0;
    for k in 0..state.k() {
        lp += normal_logpdf(state.nu[k], 0.0, prior.nu_prior_sd);
        lp += normal_logpdf(state.gamma[k], 0.0, prior.gamma_prior_sd);
        lp += prior.sigma_logprior.log_density(state.sigma[k]);
        if !prior.beta_active(k) {
            continue;
        }
        let inc = state.indicators[k];
        lp += log_beta_prior(state.beta[k], inc, state.mu, state.tau, prior);
        if regime.has_indicators() {
            let p = prior.inclusion_prior[k];
            lp += if inc { p.ln() } else { (1.0 - p).ln() };
        }
    }
    for &a in &state.alpha {
        lp += normal_logpdf(a, 0.0, state.sigma_r);
    }
    lp += prior.sigma_logprior.log_density(state.sigma_r);
    if regime.estimates_mu() {
        lp += normal_logpdf(state.mu, 0.0, prior.mu_prior_sd);
    }
    if regime.uses_tau() {
        lp += prior.tau_logprior.log_density(state.tau);
    }
    lp
}

/// Log likelihood of the design's responses.
pub fn log_likelihood(state: &ParameterState, design: &LongDesign) -> f64 {
    design
        .rows()
        .iter()
        .map(|r| normal_logpdf(r.y, state.linear_predictor(r), state.sigma[r.outcome]))
        .sum()
}

/// `log p(y, state)` under the chosen prior.
pub fn log_joint(state: &ParameterState, design: &LongDesign, prior: &PriorConfig) -> Result<f64> {
    state.check_dims(design.n(), design.k())?;
    prior.validate(design.k())?;
    Ok(log_likelihood(state, design) + log_prior(state, prior))
}

fn normal<R: Rng + ?Sized>(rng: &mut R, mean: f64, sd: f64) -> f64 {
    let z: f64 = StandardNormal.sample(rng);
    mean + sd * z
}

/// Draws a parameter state from the prior. Parameters outside the regime
/// (`mu` for the classical and Laplace regimes, `tau` for Laplace) are left at
/// their neutral values.
pub fn sample_prior<R: Rng + ?Sized>(n: usize, k: usize, prior: &PriorConfig, rng: &mut R) -> ParameterState {
    let regime = prior.regime;
    let mut s = ParameterState::zeros(n, k);
    let lognormal = |rng: &mut R, p: LogNormalPrior| normal(rng, p.location, p.scale).exp();
    if regime.estimates_mu() {
        s.mu = normal(rng, 0.0, prior.mu_prior_sd);
    }
    if regime.uses_tau() {
        s.tau = lognormal(rng, prior.tau_logprior);
    }
    s.sigma_r = lognormal(rng, prior.sigma_logprior);
    for kk in 0..k {
        s.nu[kk] = normal(rng, 0.0, prior.nu_prior_sd);
        s.gamma[kk] = normal(rng, 0.0, prior.gamma_prior_sd);
        s.sigma[kk] = lognormal(rng, prior.sigma_logprior);
        if !prior.beta_active(kk) {
            s.beta[kk] = 0.0;
            s.indicators[kk] = false;
            continue;
        }
        if regime == Regime::Laplace {
            // inverse CDF
            let u: f64 = rng.random::<f64>() - 0.5;
            s.beta[kk] = -prior.laplace_scale * u.signum() * (1.0 - 2.0 * u.abs()).ln();
            continue;
        }
        if regime.has_indicators() {
            s.indicators[kk] = rng.random::<f64>() < prior.inclusion_prior[kk];
        }
        let (m, v) = prior.beta_component(s.indicators[kk], s.mu, s.tau);
        s.beta[kk] = normal(rng, m, v.sqrt());
    }
    for j in 0..n {
        s.alpha[j] = normal(rng, 0.0, s.sigma_r);
    }
    s
}

/// Draws fresh responses for every design row given `state`.
pub fn simulate_responses<R: Rng + ?Sized>(state: &ParameterState, design: &LongDesign, rng: &mut R) -> Vec<f64> {
    design
        .rows()
        .iter()
        .map(|r| normal(rng, state.linear_predictor(r), state.sigma[r.outcome]))
        .collect()
}
