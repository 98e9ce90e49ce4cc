//! Systematic-scan Gibbs sampler.
//!
//! One sweep updates, in order: each `(I_k, beta_k)` pair (indicator drawn
//! with `beta_k` integrated out, then `beta_k` given the new indicator), the
//! common effect `mu`, the linear block `nu`, `gamma`, `alpha` one coordinate
//! at a time, and finally the scales `tau`, `sigma_k`, `sigma_r` by slice
//! sampling on the log scale. Residuals `y - mean` are cached and updated
//! incrementally.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::data::LongDesign;
use crate::error::{Error, Result};
use crate::math::{logistic, normal_logpdf};
use crate::prior::{LogNormalPrior, ParameterState, PriorConfig, Regime, SpikeMode};
use crate::slice::{slice_sample, SliceFailure, SliceTuning};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub n_chains: usize,
    pub n_burnin: usize,
    pub n_samples: usize,
    pub thinning: usize,
    pub seed: u64,
    /// Initial slice bracket width on the log scale of each scale parameter.
    pub slice_width: f64,
    pub max_slice_steps: usize,
    /// Hold `tau`, `sigma_k`, `sigma_r` at their initial values.
    #[serde(default)]
    pub freeze_scales: bool,
}

impl Default for SamplerConfig {
    /// 4 chains, 5,000 burn-in sweeps, 5,000 sampling sweeps kept every 5th.
    fn default() -> Self {
        SamplerConfig {
            n_chains: 4,
            n_burnin: 5_000,
            n_samples: 5_000,
            thinning: 5,
            seed: 1,
            slice_width: 1.0,
            max_slice_steps: 100,
            freeze_scales: false,
        }
    }
}

impl SamplerConfig {
    /// Long-run budget for real-data fits: 3 chains, 200,000 burn-in and
    /// 200,000 sampling sweeps, thinning 10.
    pub fn application() -> Self {
        SamplerConfig {
            n_chains: 3,
            n_burnin: 200_000,
            n_samples: 200_000,
            thinning: 10,
            ..SamplerConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.into()));
        if self.n_chains == 0 {
            return bad("n_chains must be >= 1");
        }
        if self.n_samples == 0 {
            return bad("n_samples must be >= 1");
        }
        if self.thinning == 0 {
            return bad("thinning must be >= 1");
        }
        if !(self.slice_width > 0.0 && self.slice_width.is_finite()) {
            return bad("slice_width must be positive");
        }
        if self.max_slice_steps == 0 {
            return bad("max_slice_steps must be >= 1");
        }
        Ok(())
    }

    pub fn draws_per_chain(&self) -> usize {
        self.n_samples / self.thinning
    }

    fn tuning(&self) -> SliceTuning {
        SliceTuning {
            width: self.slice_width,
            max_steps: self.max_slice_steps,
        }
    }
}

/// Seed of chain `chain` derived from the master seed: the chain index times
/// the 64-bit golden ratio is added to the master seed and the sum is passed
/// through the SplitMix64 finalizer.
pub fn chain_seed(master: u64, chain: usize) -> u64 {
    let mut z = master.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(chain as u64 + 1));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stored draws of a single chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainDraws {
    pub chain_index: usize,
    pub seed: u64,
    pub draws: Vec<ParameterState>,
}

/// Post burn-in, thinned draws of every chain plus the configuration that produced them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainOutput {
    pub n: usize,
    pub k: usize,
    pub prior: PriorConfig,
    pub config: SamplerConfig,
    pub chains: Vec<ChainDraws>,
}

impl ChainOutput {
    pub fn regime(&self) -> Regime {
        self.prior.regime
    }

    /// All draws of all chains.
    pub fn all_draws(&self) -> impl Iterator<Item = &ParameterState> {
        self.chains.iter().flat_map(|c| c.draws.iter())
    }

    pub fn total_draws(&self) -> usize {
        self.chains.iter().map(|c| c.draws.len()).sum()
    }

    /// Per-chain traces of a scalar extracted from each stored state.
    pub fn traces<F: Fn(&ParameterState) -> f64>(&self, f: F) -> Vec<Vec<f64>> {
        self.chains.iter().map(|c| c.draws.iter().map(&f).collect()).collect()
    }
}

/// Data-driven starting point: per-outcome least-squares fits of `y` on the
/// exposure, `mu` and `tau` from the spread of those slopes, `sigma_r = 0.5`.
pub fn initial_state(design: &LongDesign, prior: &PriorConfig) -> ParameterState {
    let (n, k) = (design.n(), design.k());
    let mut s = ParameterState::zeros(n, k);
    let mut groups: Vec<Vec<(f64, f64)>> = vec![Vec::new(); k];
    for r in design.rows() {
        groups[r.outcome].push((r.exposure, r.y));
    }
    for (kk, g) in groups.iter().enumerate() {
        if g.is_empty() {
            continue;
        }
        let m = g.len() as f64;
        let mx = g.iter().map(|p| p.0).sum::<f64>() / m;
        let my = g.iter().map(|p| p.1).sum::<f64>() / m;
        let sxx: f64 = g.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        let sxy: f64 = g.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
        s.beta[kk] = slope;
        s.nu[kk] = my - slope * mx;
        let ssr: f64 = g.iter().map(|p| (p.1 - s.nu[kk] - slope * p.0).powi(2)).sum();
        let dof = if g.len() > 2 { m - 2.0 } else { 1.0 };
        let sd = (ssr / dof).sqrt();
        s.sigma[kk] = if sd > 1e-3 && sd.is_finite() { sd } else { 1.0 };
    }
    for kk in 0..k {
        if !prior.beta_active(kk) {
            s.beta[kk] = 0.0;
            s.indicators[kk] = false;
        }
    }
    let active: Vec<f64> = (0..k)
        .filter(|&kk| prior.beta_active(kk))
        .map(|kk| s.beta[kk])
        .collect();
    let m = active.iter().sum::<f64>() / active.len().max(1) as f64;
    let sd = if active.len() >= 2 {
        (active.iter().map(|b| (b - m) * (b - m)).sum::<f64>() / (active.len() as f64 - 1.0)).sqrt()
    } else {
        0.0
    };
    s.mu = if prior.regime.estimates_mu() { m } else { 0.0 };
    s.tau = sd.max(0.1);
    s.sigma_r = 0.5;
    s
}

#[inline]
fn normal_draw<R: Rng + ?Sized>(rng: &mut R, mean: f64, var: f64) -> f64 {
    let z: f64 = StandardNormal.sample(rng);
    mean + var.sqrt() * z
}

/// Normal conditional `(mean, variance)` from a normal prior and a Gaussian
/// likelihood summarized by its precision and precision-weighted location.
#[inline]
fn conjugate(prior_mean: f64, prior_var: f64, data_prec: f64, data_weighted: f64) -> (f64, f64) {
    let prec = 1.0 / prior_var + data_prec;
    ((prior_mean / prior_var + data_weighted) / prec, 1.0 / prec)
}

/// Log full conditional of `theta = ln s` for a scale `s` that acts as the
/// standard deviation of `count` centred normal terms with sum of squares
/// `ss`, under a log-normal prior on `s`.
#[inline]
fn log_scale_conditional(theta: f64, count: f64, ss: f64, prior: LogNormalPrior) -> f64 {
    -count * theta - 0.5 * ss * (-2.0 * theta).exp() + normal_logpdf(theta, prior.location, prior.scale)
}

/// Gibbs sampler bound to one design and prior, with cached residuals.
#[derive(Debug, Clone)]
pub struct GibbsSampler {
    design: LongDesign,
    prior: PriorConfig,
    tuning: SliceTuning,
    freeze_scales: bool,
    by_outcome: Vec<Vec<usize>>,
    by_individual: Vec<Vec<usize>>,
    resid: Vec<f64>,
}

impl GibbsSampler {
    pub fn new(design: LongDesign, prior: PriorConfig, config: &SamplerConfig) -> Result<Self> {
        prior.validate(design.k())?;
        config.validate()?;
        let mut by_outcome = vec![Vec::new(); design.k()];
        let mut by_individual = vec![Vec::new(); design.n()];
        for (i, r) in design.rows().iter().enumerate() {
            by_outcome[r.outcome].push(i);
            by_individual[r.individual].push(i);
        }
        let resid = vec![0.0; design.len()];
        Ok(GibbsSampler {
            design,
            prior,
            tuning: config.tuning(),
            freeze_scales: config.freeze_scales,
            by_outcome,
            by_individual,
            resid,
        })
    }

    pub fn design(&self) -> &LongDesign {
        &self.design
    }

    pub fn prior(&self) -> &PriorConfig {
        &self.prior
    }

    /// Recomputes cached residuals for `state`. Must be called whenever the
    /// state or the responses change outside of the update methods.
    pub fn sync(&mut self, state: &ParameterState) -> Result<()> {
        state.check_dims(self.design.n(), self.design.k())?;
        for (res, r) in self.resid.iter_mut().zip(self.design.rows()) {
            *res = r.y - state.linear_predictor(r);
        }
        Ok(())
    }

    /// Replaces the responses and resynchronizes residuals.
    pub fn set_responses(&mut self, y: &[f64], state: &ParameterState) -> Result<()> {
        self.design.set_responses(y)?;
        self.sync(state)
    }

    /// `(S_xx, S_xe)`: exposure sum of squares and cross product with the
    /// partial residual that excludes `beta_k`, over rows of outcome `k`.
    fn beta_sufficient(&self, k: usize, state: &ParameterState) -> (f64, f64) {
        let rows = self.design.rows();
        let mut sxx = 0.0;
        let mut sxe = 0.0;
        for &i in &self.by_outcome[k] {
            let x = rows[i].exposure;
            let e = self.resid[i] + state.beta[k] * x;
            sxx += x * x;
            sxe += x * e;
        }
        (sxx, sxe)
    }

    /// Log odds of `I_k = 1` given everything except `beta_k`, which is
    /// integrated out of both mixture components.
    pub fn inclusion_log_odds(&self, k: usize, state: &ParameterState) -> f64 {
        let (sxx, sxe) = self.beta_sufficient(k, state);
        let s2 = state.sigma[k] * state.sigma[k];
        let (dp, dw) = (sxx / s2, sxe / s2);
        let log_marginal = |included: bool| {
            let (m0, v0) = self.prior.beta_component(included, state.mu, state.tau);
            let (m, v) = conjugate(m0, v0, dp, dw);
            // terms shared by both components are dropped
            0.5 * (v.ln() - v0.ln()) - 0.5 * m0 * m0 / v0 + 0.5 * m * m / v
        };
        let p = self.prior.inclusion_prior[k];
        let prior_odds = p.ln() - (1.0 - p).ln();
        prior_odds + log_marginal(true) - log_marginal(false)
    }

    /// Normal full conditional `(mean, variance)` of `beta_k` given `I_k`.
    /// Not defined for the Laplace regime.
    pub fn beta_conditional(&self, k: usize, state: &ParameterState) -> (f64, f64) {
        let (sxx, sxe) = self.beta_sufficient(k, state);
        let s2 = state.sigma[k] * state.sigma[k];
        let (m0, v0) = self.prior.beta_component(state.indicators[k], state.mu, state.tau);
        conjugate(m0, v0, sxx / s2, sxe / s2)
    }

    fn set_beta(&mut self, k: usize, state: &mut ParameterState, value: f64) {
        let delta = value - state.beta[k];
        let rows = self.design.rows();
        for &i in &self.by_outcome[k] {
            self.resid[i] -= delta * rows[i].exposure;
        }
        state.beta[k] = value;
    }

    /// Draws `I_k` with `beta_k` integrated out, then `beta_k` given the new
    /// indicator. Returns the new pair.
    pub fn update_indicator_collapsed<R: Rng + ?Sized>(
        &mut self,
        k: usize,
        state: &mut ParameterState,
        rng: &mut R,
    ) -> (bool, f64) {
        let p = self.prior.inclusion_prior[k];
        state.indicators[k] = if p >= 1.0 {
            true
        } else {
            rng.random::<f64>() < logistic(self.inclusion_log_odds(k, state))
        };
        let b = self.draw_beta_normal(k, state, rng);
        (state.indicators[k], b)
    }

    fn draw_beta_normal<R: Rng + ?Sized>(&mut self, k: usize, state: &mut ParameterState, rng: &mut R) -> f64 {
        let (m, v) = self.beta_conditional(k, state);
        let b = normal_draw(rng, m, v);
        self.set_beta(k, state, b);
        b
    }

    /// Draws `beta_k` from its full conditional with `I_k` held fixed.
    /// Masked-out outcomes of the subset regime stay at zero.
    pub fn update_beta<R: Rng + ?Sized>(&mut self, k: usize, state: &mut ParameterState, rng: &mut R) -> Result<f64> {
        if !self.prior.beta_active(k) {
            return Ok(0.0);
        }
        if self.prior.regime != Regime::Laplace {
            return Ok(self.draw_beta_normal(k, state, rng));
        }
        let (sxx, sxe) = self.beta_sufficient(k, state);
        let s2 = state.sigma[k] * state.sigma[k];
        let b = self.prior.laplace_scale;
        let log_f = |beta: f64| -0.5 * sxx * beta * beta / s2 + sxe * beta / s2 - beta.abs() / b;
        let width = if sxx > 0.0 { 2.0 * (s2 / sxx).sqrt() } else { 2.0 * b };
        let tuning = SliceTuning {
            width: width.min(4.0 * b),
            max_steps: self.tuning.max_steps,
        };
        let name = format!("beta[{}]", k + 1);
        let v = slice_sample(state.beta[k], log_f, tuning, rng).map_err(|e| slice_error(e, name))?;
        self.set_beta(k, state, v);
        Ok(v)
    }

    /// The set of outcomes whose effects are centred at `mu`.
    fn slab_members<'s>(&'s self, state: &'s ParameterState) -> impl Iterator<Item = usize> + 's {
        let regime = self.prior.regime;
        (0..state.k()).filter(move |&k| self.prior.beta_active(k) && (!regime.has_indicators() || state.indicators[k]))
    }

    /// Normal full conditional `(mean, variance)` of `mu`.
    pub fn mu_conditional(&self, state: &ParameterState) -> (f64, f64) {
        let (count, sum) = self
            .slab_members(state)
            .fold((0usize, 0.0), |(c, s), k| (c + 1, s + state.beta[k]));
        let t2 = state.tau * state.tau;
        conjugate(0.0, self.prior.mu_prior_sd.powi(2), count as f64 / t2, sum / t2)
    }

    /// Draws `mu`; a no-op for regimes without a common effect.
    pub fn update_mu<R: Rng + ?Sized>(&mut self, state: &mut ParameterState, rng: &mut R) -> f64 {
        if self.prior.regime.estimates_mu() {
            let (m, v) = self.mu_conditional(state);
            state.mu = normal_draw(rng, m, v);
        }
        state.mu
    }

    /// Normal full conditional of `nu_k`.
    pub fn nu_conditional(&self, k: usize, state: &ParameterState) -> (f64, f64) {
        let s2 = state.sigma[k] * state.sigma[k];
        let rows = &self.by_outcome[k];
        let sum: f64 = rows.iter().map(|&i| self.resid[i] + state.nu[k]).sum();
        conjugate(0.0, self.prior.nu_prior_sd.powi(2), rows.len() as f64 / s2, sum / s2)
    }

    /// Normal full conditional of `gamma_k`.
    pub fn gamma_conditional(&self, k: usize, state: &ParameterState) -> (f64, f64) {
        let s2 = state.sigma[k] * state.sigma[k];
        let rows = self.design.rows();
        let (mut szz, mut sze) = (0.0, 0.0);
        for &i in &self.by_outcome[k] {
            let z = rows[i].z;
            szz += z * z;
            sze += z * (self.resid[i] + state.gamma[k] * z);
        }
        conjugate(0.0, self.prior.gamma_prior_sd.powi(2), szz / s2, sze / s2)
    }

    /// Normal full conditional of `alpha_j`.
    pub fn alpha_conditional(&self, j: usize, state: &ParameterState) -> (f64, f64) {
        let rows = self.design.rows();
        let (mut prec, mut weighted) = (0.0, 0.0);
        for &i in &self.by_individual[j] {
            let w = 1.0 / state.sigma[rows[i].outcome].powi(2);
            prec += w;
            weighted += w * (self.resid[i] + state.alpha[j]);
        }
        conjugate(0.0, state.sigma_r * state.sigma_r, prec, weighted)
    }

    /// Draws every `nu_k`, then every `gamma_k`, then every `alpha_j`.
    pub fn update_linear_block<R: Rng + ?Sized>(&mut self, state: &mut ParameterState, rng: &mut R) {
        let k = state.k();
        for kk in 0..k {
            let (m, v) = self.nu_conditional(kk, state);
            let new = normal_draw(rng, m, v);
            let delta = new - state.nu[kk];
            for &i in &self.by_outcome[kk] {
                self.resid[i] -= delta;
            }
            state.nu[kk] = new;
        }
        for kk in 0..k {
            let (m, v) = self.gamma_conditional(kk, state);
            let new = normal_draw(rng, m, v);
            let delta = new - state.gamma[kk];
            let rows = self.design.rows();
            for &i in &self.by_outcome[kk] {
                self.resid[i] -= delta * rows[i].z;
            }
            state.gamma[kk] = new;
        }
        for j in 0..state.n() {
            let (m, v) = self.alpha_conditional(j, state);
            let new = normal_draw(rng, m, v);
            let delta = new - state.alpha[j];
            for &i in &self.by_individual[j] {
                self.resid[i] -= delta;
            }
            state.alpha[j] = new;
        }
    }

    /// Log full conditional of `ln tau` (up to a constant).
    pub fn tau_log_conditional(&self, log_tau: f64, state: &ParameterState) -> f64 {
        let (count, ss) = self.tau_sufficient(state);
        log_scale_conditional(log_tau, count, ss, self.prior.tau_logprior)
    }

    /// `(count, sum of squares)` of the effect terms whose scale is a multiple
    /// of `tau`, with spike terms rescaled by `c`.
    fn tau_sufficient(&self, state: &ParameterState) -> (f64, f64) {
        let regime = self.prior.regime;
        let mut count = 0.0;
        let mut ss = 0.0;
        for k in 0..state.k() {
            if !self.prior.beta_active(k) {
                continue;
            }
            if !regime.has_indicators() || state.indicators[k] {
                let d = state.beta[k] - self.prior.slab_mean(state.mu);
                count += 1.0;
                ss += d * d;
            } else if let SpikeMode::Ratio { c } = self.prior.spike {
                count += 1.0;
                ss += c * state.beta[k] * state.beta[k];
            }
        }
        (count, ss)
    }

    /// Log full conditional of `ln sigma_k` (up to a constant).
    pub fn sigma_log_conditional(&self, k: usize, log_sigma: f64) -> f64 {
        let rows = &self.by_outcome[k];
        let ss: f64 = rows.iter().map(|&i| self.resid[i] * self.resid[i]).sum();
        log_scale_conditional(log_sigma, rows.len() as f64, ss, self.prior.sigma_logprior)
    }

    /// Slice-samples `tau` (when part of the regime), each `sigma_k`, then `sigma_r`.
    pub fn update_scales<R: Rng + ?Sized>(&mut self, state: &mut ParameterState, rng: &mut R) -> Result<()> {
        let tuning = self.tuning;
        if self.prior.regime.uses_tau() {
            let (count, ss) = self.tau_sufficient(state);
            let p = self.prior.tau_logprior;
            let t = slice_sample(
                state.tau.ln(),
                |th| log_scale_conditional(th, count, ss, p),
                tuning,
                rng,
            )
            .map_err(|e| slice_error(e, "tau".into()))?;
            state.tau = t.exp();
        }
        let p = self.prior.sigma_logprior;
        for k in 0..state.k() {
            let rows = &self.by_outcome[k];
            let ss: f64 = rows.iter().map(|&i| self.resid[i] * self.resid[i]).sum();
            let count = rows.len() as f64;
            let t = slice_sample(
                state.sigma[k].ln(),
                |th| log_scale_conditional(th, count, ss, p),
                tuning,
                rng,
            )
            .map_err(|e| slice_error(e, format!("sigma[{}]", k + 1)))?;
            state.sigma[k] = t.exp();
        }
        let ss: f64 = state.alpha.iter().map(|a| a * a).sum();
        let count = state.n() as f64;
        let t = slice_sample(
            state.sigma_r.ln(),
            |th| log_scale_conditional(th, count, ss, p),
            tuning,
            rng,
        )
        .map_err(|e| slice_error(e, "sigma_r".into()))?;
        state.sigma_r = t.exp();
        Ok(())
    }

    /// One full systematic-scan sweep.
    pub fn sweep<R: Rng + ?Sized>(&mut self, state: &mut ParameterState, rng: &mut R) -> Result<()> {
        let regime = self.prior.regime;
        for k in 0..state.k() {
            if !self.prior.beta_active(k) {
                continue;
            }
            if regime.has_indicators() {
                self.update_indicator_collapsed(k, state, rng);
            } else {
                self.update_beta(k, state, rng)?;
            }
        }
        self.update_mu(state, rng);
        self.update_linear_block(state, rng);
        if !self.freeze_scales {
            self.update_scales(state, rng)?;
        }
        if !state.is_finite() {
            return Err(Error::NonFinite {
                parameter: "state".into(),
                chain: 0,
                sweep: 0,
                state: state.dump(),
            });
        }
        Ok(())
    }
}

fn slice_error(e: SliceFailure, parameter: String) -> Error {
    match e {
        SliceFailure::Exhausted => Error::SliceExhausted { parameter, steps: 0 },
        SliceFailure::NonFinite => Error::NonFinite {
            parameter,
            chain: 0,
            sweep: 0,
            state: String::new(),
        },
    }
}

/// Runs chain `chain_index` of `config` to completion.
pub fn run_single_chain(
    design: &LongDesign,
    prior: &PriorConfig,
    config: &SamplerConfig,
    chain_index: usize,
) -> Result<ChainDraws> {
    let mut sampler = GibbsSampler::new(design.clone(), prior.clone(), config)?;
    let seed = chain_seed(config.seed, chain_index);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = initial_state(design, prior);
    sampler.sync(&state)?;
    let mut draws = Vec::with_capacity(config.draws_per_chain());
    let total = config.n_burnin + config.n_samples;
    for sweep in 0..total {
        sampler.sweep(&mut state, &mut rng).map_err(|e| match e {
            Error::NonFinite {
                parameter, state: dump, ..
            } => Error::NonFinite {
                parameter,
                chain: chain_index,
                sweep,
                state: if dump.is_empty() { state.dump() } else { dump },
            },
            Error::SliceExhausted { parameter, .. } => Error::SliceExhausted {
                parameter: format!("{parameter} (chain {chain_index}, sweep {sweep})"),
                steps: config.max_slice_steps,
            },
            other => other,
        })?;
        if sweep >= config.n_burnin && (sweep - config.n_burnin + 1).is_multiple_of(config.thinning) {
            draws.push(state.clone());
        }
    }
    Ok(ChainDraws {
        chain_index,
        seed,
        draws,
    })
}

/// Assembles a [`ChainOutput`] from independently run chains.
pub fn assemble_output(
    design: &LongDesign,
    prior: &PriorConfig,
    config: &SamplerConfig,
    mut chains: Vec<ChainDraws>,
) -> ChainOutput {
    chains.sort_by_key(|c| c.chain_index);
    ChainOutput {
        n: design.n(),
        k: design.k(),
        prior: prior.clone(),
        config: config.clone(),
        chains,
    }
}

/// Runs `config.n_chains` chains one after another.
pub fn run_chain(design: &LongDesign, prior: &PriorConfig, config: &SamplerConfig) -> Result<ChainOutput> {
    prior.validate(design.k())?;
    config.validate()?;
    let chains = (0..config.n_chains)
        .map(|c| run_single_chain(design, prior, config, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble_output(design, prior, config, chains))
}

impl core::fmt::Display for SamplerConfig {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(
            f,
            "{} chains x ({} burn-in + {} samples, thin {}), seed {}",
            self.n_chains, self.n_burnin, self.n_samples, self.thinning, self.seed
        )
    }
}
