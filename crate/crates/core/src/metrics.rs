//! Posterior summaries, selection rules, evaluation metrics and convergence
//! diagnostics.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gibbs::ChainOutput;
use crate::math::{mean, quantile_sorted, sample_variance};
use crate::prior::{ParameterState, PriorConfig, Regime};

/// Posterior inclusion probabilities above this value mark an outcome relevant.
pub const INCLUSION_THRESHOLD: f64 = 0.5;

/// Split R-hat above this value flags a scalar as not converged.
pub const RHAT_THRESHOLD: f64 = 1.05;

/// Relevance from inclusion probabilities: strictly greater than one half.
pub fn classify_probabilities(inclusion: &[f64]) -> Vec<bool> {
    inclusion.iter().map(|&p| p > INCLUSION_THRESHOLD).collect()
}

/// Posterior mean of each indicator.
pub fn inclusion_probabilities(chain: &ChainOutput) -> Result<Vec<f64>> {
    if chain.regime() == Regime::Laplace {
        return Err(Error::NoIndicators("laplace"));
    }
    let total = chain.total_draws();
    if total == 0 {
        return Err(Error::Empty("chain has no stored draws"));
    }
    let mut counts = alloc::vec![0usize; chain.k];
    for s in chain.all_draws() {
        for (c, &i) in counts.iter_mut().zip(&s.indicators) {
            *c += i as usize;
        }
    }
    Ok(counts.into_iter().map(|c| c as f64 / total as f64).collect())
}

pub fn classify_outcomes(chain: &ChainOutput) -> Result<Vec<bool>> {
    Ok(classify_probabilities(&inclusion_probabilities(chain)?))
}

/// Per-outcome effect estimates.
///
/// With indicators: the mean of `beta_k` over draws with `I_k = 1` when the
/// outcome is classified relevant, and zero otherwise. Under the Laplace
/// regime: the plain posterior mean.
pub fn point_estimates(chain: &ChainOutput) -> Result<Vec<f64>> {
    if chain.total_draws() == 0 {
        return Err(Error::Empty("chain has no stored draws"));
    }
    if chain.regime() == Regime::Laplace {
        return Ok(posterior_means(chain, |s, k| s.beta[k]));
    }
    let relevant = classify_outcomes(chain)?;
    let mut out = Vec::with_capacity(chain.k);
    for (k, &rel) in relevant.iter().enumerate() {
        if !rel {
            out.push(0.0);
            continue;
        }
        let (sum, count) = chain
            .all_draws()
            .filter(|s| s.indicators[k])
            .fold((0.0, 0usize), |(a, c), s| (a + s.beta[k], c + 1));
        if count == 0 {
            return Err(Error::NoIncludedDraws { outcome: k + 1 });
        }
        out.push(sum / count as f64);
    }
    Ok(out)
}

fn posterior_means(chain: &ChainOutput, f: impl Fn(&ParameterState, usize) -> f64) -> Vec<f64> {
    let total = chain.total_draws() as f64;
    (0..chain.k)
        .map(|k| chain.all_draws().map(|s| f(s, k)).sum::<f64>() / total)
        .collect()
}

/// Equal-tailed central credible interval of `beta_k`.
pub fn beta_interval(chain: &ChainOutput, k: usize, level: f64) -> Result<(f64, f64)> {
    let mut xs: Vec<f64> = chain.all_draws().map(|s| s.beta[k]).collect();
    if xs.is_empty() {
        return Err(Error::Empty("chain has no stored draws"));
    }
    xs.sort_by(|a, b| a.total_cmp(b));
    let tail = 0.5 * (1.0 - level);
    Ok((quantile_sorted(&xs, tail), quantile_sorted(&xs, 1.0 - tail)))
}

/// Relevance for shrinkage priors: zero lies outside the central 95% interval.
pub fn interval_relevance(chain: &ChainOutput) -> Result<Vec<bool>> {
    (0..chain.k)
        .map(|k| beta_interval(chain, k, 0.95).map(|(lo, hi)| lo > 0.0 || hi < 0.0))
        .collect()
}

/// Relevance under any regime: inclusion probabilities where indicators
/// exist, the 95% interval rule under Laplace.
pub fn relevance(chain: &ChainOutput) -> Result<Vec<bool>> {
    if chain.regime() == Regime::Laplace {
        interval_relevance(chain)
    } else {
        classify_outcomes(chain)
    }
}

/// Mean squared error of effect estimates.
pub fn mse(estimates: &[f64], truth: &[f64]) -> Result<f64> {
    if estimates.len() != truth.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} estimates for {} true effects",
            estimates.len(),
            truth.len()
        )));
    }
    if estimates.is_empty() {
        return Err(Error::Empty("no effects"));
    }
    Ok(estimates.iter().zip(truth).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / truth.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DetectionCounts {
    pub n_identified: usize,
    pub n_correct: usize,
    pub n_false_positive: usize,
}

pub fn detection_counts(classified: &[bool], relevant: &[bool]) -> Result<DetectionCounts> {
    if classified.len() != relevant.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} classifications for {} outcomes",
            classified.len(),
            relevant.len()
        )));
    }
    let mut c = DetectionCounts::default();
    for (&got, &truth) in classified.iter().zip(relevant) {
        if got {
            c.n_identified += 1;
            if truth {
                c.n_correct += 1;
            } else {
                c.n_false_positive += 1;
            }
        }
    }
    Ok(c)
}

/// Metrics of one fitted replication.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepMetrics {
    pub counts: DetectionCounts,
    pub mse: f64,
    /// Posterior mean of `mu`; `None` when the regime has no common effect.
    pub mu_hat: Option<f64>,
}

/// Spread of per-replication estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuSummary {
    pub mean: f64,
    /// Sample standard deviation across replications; `None` for a single value.
    pub sd: Option<f64>,
    /// `sd / sqrt(reps)`.
    pub se: Option<f64>,
    pub reps: usize,
}

pub fn mu_summary(per_rep: &[f64]) -> Result<MuSummary> {
    if per_rep.is_empty() {
        return Err(Error::Empty("no replications"));
    }
    let m = mean(per_rep);
    let (sd, se) = if per_rep.len() >= 2 {
        let sd = sample_variance(per_rep).sqrt();
        (Some(sd), Some(sd / (per_rep.len() as f64).sqrt()))
    } else {
        (None, None)
    };
    Ok(MuSummary {
        mean: m,
        sd,
        se,
        reps: per_rep.len(),
    })
}

/// A scalar tracked by the convergence diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Monitored {
    Mu,
    Tau,
    SigmaR,
    Beta(usize),
    Sigma(usize),
    Nu(usize),
    Gamma(usize),
}

impl Monitored {
    pub fn extract(self, s: &ParameterState) -> f64 {
        match self {
            Monitored::Mu => s.mu,
            Monitored::Tau => s.tau,
            Monitored::SigmaR => s.sigma_r,
            Monitored::Beta(k) => s.beta[k],
            Monitored::Sigma(k) => s.sigma[k],
            Monitored::Nu(k) => s.nu[k],
            Monitored::Gamma(k) => s.gamma[k],
        }
    }

    /// One-based column-style name, e.g. `beta[3]`.
    pub fn name(self) -> String {
        match self {
            Monitored::Mu => "mu".into(),
            Monitored::Tau => "tau".into(),
            Monitored::SigmaR => "sigma_r".into(),
            Monitored::Beta(k) => format!("beta[{}]", k + 1),
            Monitored::Sigma(k) => format!("sigma[{}]", k + 1),
            Monitored::Nu(k) => format!("nu[{}]", k + 1),
            Monitored::Gamma(k) => format!("gamma[{}]", k + 1),
        }
    }

    pub fn parse(s: &str) -> Option<Monitored> {
        match s {
            "mu" => return Some(Monitored::Mu),
            "tau" => return Some(Monitored::Tau),
            "sigma_r" => return Some(Monitored::SigmaR),
            _ => {}
        }
        let (head, rest) = s.split_once('[')?;
        let idx: usize = rest.strip_suffix(']')?.parse().ok()?;
        let k = idx.checked_sub(1)?;
        match head {
            "beta" => Some(Monitored::Beta(k)),
            "sigma" => Some(Monitored::Sigma(k)),
            "nu" => Some(Monitored::Nu(k)),
            "gamma" => Some(Monitored::Gamma(k)),
            _ => None,
        }
    }
}

/// `mu` and `tau` when they are model parameters, plus every free `beta_k`.
pub fn default_monitored(prior: &PriorConfig, k: usize) -> Vec<Monitored> {
    let mut out = Vec::new();
    if prior.regime.estimates_mu() {
        out.push(Monitored::Mu);
    }
    if prior.regime.uses_tau() {
        out.push(Monitored::Tau);
    }
    out.extend((0..k).filter(|&kk| prior.beta_active(kk)).map(Monitored::Beta));
    out
}

fn check_chains(chains: &[Vec<f64>], min_len: usize) -> Result<usize> {
    if chains.is_empty() {
        return Err(Error::TooFewDraws("no chains".into()));
    }
    let n = chains.iter().map(Vec::len).min().unwrap_or(0);
    if n < min_len {
        return Err(Error::TooFewDraws(format!(
            "{n} draws per chain, need at least {min_len}"
        )));
    }
    Ok(n)
}

fn rhat_of(chains: &[&[f64]]) -> f64 {
    let m = chains.len() as f64;
    let n = chains[0].len() as f64;
    let means: Vec<f64> = chains.iter().map(|c| mean(c)).collect();
    let w = chains.iter().map(|c| sample_variance(c)).sum::<f64>() / m;
    let b = n * sample_variance(&means);
    if w == 0.0 {
        return if b == 0.0 { 1.0 } else { f64::INFINITY };
    }
    let var_plus = (n - 1.0) / n * w + b / n;
    (var_plus / w).sqrt()
}

/// Split potential scale reduction: each chain is cut into two halves
/// (the middle draw dropped for odd lengths) and the classic statistic is
/// computed over the halves. Needs at least 2 chains and 4 draws per half.
pub fn split_rhat(chains: &[Vec<f64>]) -> Result<f64> {
    if chains.len() < 2 {
        return Err(Error::TooFewDraws(format!(
            "R-hat needs at least 2 chains, got {}",
            chains.len()
        )));
    }
    let n = check_chains(chains, 8)?;
    let half = n / 2;
    let mut halves: Vec<&[f64]> = Vec::with_capacity(2 * chains.len());
    for c in chains {
        let c = &c[..n];
        halves.push(&c[..half]);
        halves.push(&c[n - half..]);
    }
    Ok(rhat_of(&halves))
}

/// Effective sample size over all chains, from the multi-chain
/// autocorrelation estimate truncated by Geyer's initial monotone sequence.
pub fn effective_sample_size(chains: &[Vec<f64>]) -> Result<f64> {
    let n = check_chains(chains, 4)?;
    let m = chains.len();
    let chains: Vec<&[f64]> = chains.iter().map(|c| &c[..n]).collect();
    let means: Vec<f64> = chains.iter().map(|c| mean(c)).collect();
    let acov = |c: &[f64], mu: f64, lag: usize| -> f64 {
        c[..n - lag]
            .iter()
            .zip(&c[lag..])
            .map(|(a, b)| (a - mu) * (b - mu))
            .sum::<f64>()
            / n as f64
    };
    let acov0: Vec<f64> = chains.iter().zip(&means).map(|(c, &mu)| acov(c, mu, 0)).collect();
    let w = acov0.iter().sum::<f64>() / m as f64 * n as f64 / (n as f64 - 1.0);
    let b_over_n = if m > 1 { sample_variance(&means) } else { 0.0 };
    let var_plus = w * (n as f64 - 1.0) / n as f64 + b_over_n;
    if var_plus == 0.0 {
        return Ok((m * n) as f64);
    }
    let rho = |lag: usize| -> f64 {
        let mean_acov = chains.iter().zip(&means).map(|(c, &mu)| acov(c, mu, lag)).sum::<f64>() / m as f64;
        1.0 - (w - mean_acov) / var_plus
    };
    let mut sum_pairs = 0.0;
    let mut prev_pair = f64::INFINITY;
    let mut t = 0;
    while t + 1 < n {
        let pair = if t == 0 { 1.0 + rho(1) } else { rho(t) + rho(t + 1) };
        if pair <= 0.0 {
            break;
        }
        let pair = pair.min(prev_pair);
        sum_pairs += pair;
        prev_pair = pair;
        t += 2;
    }
    let tau = (-1.0 + 2.0 * sum_pairs).max(1.0 / ((m * n) as f64).log10().max(1.0));
    Ok((m * n) as f64 / tau)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub name: String,
    /// `None` for single-chain output.
    pub rhat: Option<f64>,
    pub ess: f64,
}

impl Diagnostic {
    pub fn flagged(&self) -> bool {
        self.rhat.is_some_and(|r| r.is_nan() || r > RHAT_THRESHOLD)
    }
}

/// Split R-hat and ESS for each monitored scalar.
pub fn convergence(chain: &ChainOutput, monitored: &[Monitored]) -> Result<Vec<Diagnostic>> {
    monitored
        .iter()
        .map(|&mon| {
            let traces = chain.traces(|s| mon.extract(s));
            check_chains(&traces, 8)?;
            let rhat = if traces.len() >= 2 {
                Some(split_rhat(&traces)?)
            } else {
                None
            };
            Ok(Diagnostic {
                name: mon.name(),
                rhat,
                ess: effective_sample_size(&traces)?,
            })
        })
        .collect()
}

/// Largest split R-hat among diagnostics (`None` when unavailable).
pub fn max_rhat(diags: &[Diagnostic]) -> Option<f64> {
    diags.iter().filter_map(|d| d.rhat).fold(None, |acc, r| {
        Some(match acc {
            None => r,
            Some(a) if r.is_nan() || a.is_nan() => f64::NAN,
            Some(a) => a.max(r),
        })
    })
}

/// Posterior summary of one fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    pub regime: Regime,
    /// Posterior inclusion probabilities; under Laplace 1.0/0.0 from the interval rule.
    pub inclusion: Vec<f64>,
    pub relevant: Vec<bool>,
    pub beta_hat: Vec<f64>,
    /// Whether `beta_k` was a free parameter.
    pub active: Vec<bool>,
    pub mu_mean: Option<f64>,
    pub mu_sd: Option<f64>,
    pub tau_mean: Option<f64>,
    pub diagnostics: Vec<Diagnostic>,
}

impl FitSummary {
    pub fn flagged(&self) -> Vec<&Diagnostic> {
        self.diagnostics.iter().filter(|d| d.flagged()).collect()
    }
}

pub fn summarize(chain: &ChainOutput) -> Result<FitSummary> {
    let regime = chain.regime();
    let relevant = relevance(chain)?;
    let inclusion = if regime == Regime::Laplace {
        relevant.iter().map(|&r| if r { 1.0 } else { 0.0 }).collect()
    } else {
        inclusion_probabilities(chain)?
    };
    let beta_hat = point_estimates(chain)?;
    let draws = chain.total_draws() as f64;
    let (mu_mean, mu_sd) = if regime.estimates_mu() {
        let mus: Vec<f64> = chain.all_draws().map(|s| s.mu).collect();
        let sd = if mus.len() >= 2 {
            Some(sample_variance(&mus).sqrt())
        } else {
            None
        };
        (Some(mean(&mus)), sd)
    } else {
        (None, None)
    };
    let tau_mean = regime
        .uses_tau()
        .then(|| chain.all_draws().map(|s| s.tau).sum::<f64>() / draws);
    let monitored = default_monitored(&chain.prior, chain.k);
    let diagnostics = convergence(chain, &monitored)?;
    Ok(FitSummary {
        regime,
        inclusion,
        relevant,
        beta_hat,
        active: (0..chain.k).map(|k| chain.prior.beta_active(k)).collect(),
        mu_mean,
        mu_sd,
        tau_mean,
        diagnostics,
    })
}
