//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Runs the simulation grids at the default sampler budget (4 chains, 5000
//! burn-in, 5000 draws, thinning 5), so expect several minutes.

use std::process::ExitCode;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use outsel::chain_io::format_chain;
use outsel::runner::{fit_parallel, run_grid_parallel};
use outsel_core::gibbs::GibbsSampler;
use outsel_core::metrics::{
    classify_probabilities, convergence, default_monitored, detection_counts, effective_sample_size, max_rhat, mse,
    mu_summary, point_estimates, RHAT_THRESHOLD,
};
use outsel_core::prior::{sample_prior, simulate_responses};
use outsel_core::sim::{generate, Study};
use outsel_core::{
    run_chain, stack_long, ChainDraws, ChainOutput, GridSpec, LogNormalPrior, LongDesign, LongRow, ParameterState,
    PriorConfig, Regime, RepResult, SamplerConfig,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MASTER_SEED: u64 = 20240611;
const REPS: usize = 10;
const K1S: [usize; 3] = [5, 10, 15];

struct Verdict {
    id: &'static str,
    pass: bool,
    detail: String,
}

fn verdict(id: &'static str, pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        id,
        pass,
        detail: detail.into(),
    }
}

fn grid(study: Study, effect: f64, k1s: &[usize], regimes: &[Regime]) -> Vec<RepResult> {
    let spec = GridSpec {
        study,
        n: 100,
        k: 20,
        effects: vec![effect],
        k1s: k1s.to_vec(),
        regimes: regimes.to_vec(),
        reps: REPS,
        master_seed: MASTER_SEED,
        sampler: SamplerConfig::default(),
    };
    let started = Instant::now();
    let out = run_grid_parallel(&spec, |_, _| {}).expect("valid grid");
    eprintln!(
        "  grid study {} effect {effect}: {} fits in {:.1}s",
        study.number(),
        out.len(),
        started.elapsed().as_secs_f64()
    );
    out
}

fn cell(results: &[RepResult], k1: usize, regime: Regime) -> Vec<&RepResult> {
    results.iter().filter(|r| r.k1 == k1 && r.regime == regime).collect()
}

fn mean(xs: impl IntoIterator<Item = f64>) -> f64 {
    let (s, n) = xs.into_iter().fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    s / n as f64
}

fn failures(rs: &[&RepResult]) -> Vec<String> {
    rs.iter()
        .filter_map(|r| r.error.as_ref().map(|e| format!("rep {} {}: {e}", r.rep, r.regime)))
        .collect()
}

fn mu_hat_mean(rs: &[&RepResult]) -> f64 {
    mean(rs.iter().map(|r| r.metrics.mu_hat.unwrap_or(f64::NAN)))
}

/// Criterion 1: exact detection with no false positives in at least 9/10 reps.
fn criterion1(large: &[RepResult]) -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for k1 in K1S {
        for regime in [Regime::SsvsMu, Regime::SsvsZero] {
            let rs = cell(large, k1, regime);
            let exact = rs
                .iter()
                .filter(|r| r.ok() && r.metrics.counts.n_correct == k1 && r.metrics.counts.n_false_positive == 0)
                .count();
            pass &= exact >= 9 && rs.len() == REPS;
            parts.push(format!("K1={k1} {regime}: {exact}/{}", rs.len()));
            parts.extend(failures(&rs));
        }
    }
    verdict(
        "1",
        pass,
        format!("exact detection, study 1, mu=-3 [{}]", parts.join("; ")),
    )
}

/// Criterion 2: mu recovery and attenuation of the no-selection model.
fn criterion2(large: &[RepResult]) -> Verdict {
    let ssvs = cell(large, 10, Regime::SsvsMu);
    let hier = cell(large, 10, Regime::Hierarchical);
    let (m_s, m_h) = (mu_hat_mean(&ssvs), mu_hat_mean(&hier));
    let recovered = (m_s + 3.0).abs() <= 0.2;
    let attenuated = m_h.signum() == m_s.signum() && m_h.abs() <= 0.7 * m_s.abs();
    verdict(
        "2",
        recovered && attenuated,
        format!(
            "study 1, mu=-3, K1=10: mean mu_hat ssvs_mu {m_s:.3} (|err| {:.3} <= 0.2), hierarchical {m_h:.3} (ratio {:.2} <= 0.70)",
            (m_s + 3.0).abs(),
            m_h / m_s
        ),
    )
}

/// Criterion 3: MSE ordering and magnitude in every large-effect cell.
fn criterion3(large: &[RepResult]) -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for k1 in K1S {
        let m_s = mean(cell(large, k1, Regime::SsvsMu).iter().map(|r| r.metrics.mse));
        let m_h = mean(cell(large, k1, Regime::Hierarchical).iter().map(|r| r.metrics.mse));
        pass &= m_s < m_h && m_s <= 0.05;
        parts.push(format!("K1={k1}: {m_s:.4} vs {m_h:.4}"));
    }
    verdict(
        "3",
        pass,
        format!("mean MSE ssvs_mu < hierarchical and <= 0.05 [{}]", parts.join("; ")),
    )
}

/// Criterion 4: study 2 large effect.
fn criterion4(study2: &[RepResult]) -> Verdict {
    let rs = cell(study2, 10, Regime::SsvsMu);
    let m = mu_hat_mean(&rs);
    let truth = mean(rs.iter().map(|r| r.mu_true));
    let exact = rs
        .iter()
        .filter(|r| r.ok() && r.metrics.counts.n_correct == 10 && r.metrics.counts.n_false_positive == 0)
        .count();
    let pass = (m - truth).abs() <= 0.3 && exact >= 9 && rs.len() == REPS;
    let mut detail = format!(
        "study 2, omega=-3, K1=10: mean mu_hat {m:.3} vs implied truth {truth:.3} (|err| {:.3} <= 0.3); exact detection {exact}/{}",
        (m - truth).abs(),
        rs.len()
    );
    for f in failures(&rs) {
        detail.push_str("; ");
        detail.push_str(&f);
    }
    verdict("4", pass, detail)
}

/// Criterion 5: small effect, shrinkage of mu and poor detection.
fn criterion5(small: &[RepResult]) -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for k1 in K1S {
        let ssvs = cell(small, k1, Regime::SsvsMu);
        let subset = cell(small, k1, Regime::Subset);
        let (m_s, m_sub) = (mu_hat_mean(&ssvs), mu_hat_mean(&subset));
        let correct = mean(ssvs.iter().map(|r| r.metrics.counts.n_correct as f64));
        let ok = m_s.abs() < m_sub.abs() && correct < 0.5 * k1 as f64;
        pass &= ok;
        parts.push(format!(
            "K1={k1}: |mu_hat| ssvs_mu {:.3} vs subset {:.3}, mean n_correct {correct:.1} < {:.1}",
            m_s.abs(),
            m_sub.abs(),
            0.5 * k1 as f64
        ));
    }
    verdict("5", pass, format!("study 1, mu=-0.1 [{}]", parts.join("; ")))
}

/// Geweke test on a K = 3, n = 8 model: forward draws from the joint
/// against a chain alternating Gibbs sweeps and fresh responses.
fn criterion6a() -> Verdict {
    let (n, k) = (8, 3);
    let xs = [0.0, 0.4, 1.3, -0.2, 0.9, 0.0, 2.1, 0.6];
    let zs = [-0.5, 1.1, 0.3, -1.4, 0.0, 0.7, -0.2, 1.6];
    let rows = (0..n)
        .flat_map(|j| {
            (0..k).map(move |kk| LongRow {
                y: 0.0,
                individual: j,
                outcome: kk,
                exposure: xs[j],
                z: zs[j],
            })
        })
        .collect();
    let design = LongDesign::from_rows(n, k, rows).unwrap();
    let prior = PriorConfig {
        mu_prior_sd: 1.0,
        tau_logprior: LogNormalPrior::new(-0.5, 0.4),
        sigma_logprior: LogNormalPrior::new(0.0, 0.3),
        nu_prior_sd: 1.0,
        gamma_prior_sd: 1.0,
        ..PriorConfig::simulation(Regime::SsvsMu, k)
    };
    let cycles = 100_000;
    let stats = |s: &ParameterState| {
        [
            s.mu,
            s.mu * s.mu,
            s.tau,
            s.tau * s.tau,
            s.beta[0],
            s.beta[0] * s.beta[0],
            s.sigma_r,
            s.sigma_r * s.sigma_r,
        ]
    };
    const NAMES: [&str; 8] = ["mu", "mu^2", "tau", "tau^2", "beta1", "beta1^2", "sigma_r", "sigma_r^2"];

    let mut rng = ChaCha8Rng::seed_from_u64(MASTER_SEED ^ 0x6e);
    let forward: Vec<[f64; 8]> = (0..cycles)
        .map(|_| stats(&sample_prior(n, k, &prior, &mut rng)))
        .collect();

    let mut g = GibbsSampler::new(design.clone(), prior.clone(), &SamplerConfig::default()).unwrap();
    let mut state = sample_prior(n, k, &prior, &mut rng);
    let mut successive = Vec::with_capacity(cycles);
    for _ in 0..cycles {
        let y = simulate_responses(&state, g.design(), &mut rng);
        g.set_responses(&y, &state).unwrap();
        if let Err(e) = g.sweep(&mut state, &mut rng) {
            return verdict("6a", false, format!("Geweke sweep failed: {e}"));
        }
        successive.push(stats(&state));
    }

    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for i in 0..NAMES.len() {
        let a: Vec<f64> = forward.iter().map(|s| s[i]).collect();
        let b: Vec<f64> = successive.iter().map(|s| s[i]).collect();
        let var = |v: &[f64], m: f64| v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64;
        let (ma, mb) = (mean(a.iter().copied()), mean(b.iter().copied()));
        let ess = effective_sample_size(std::slice::from_ref(&b)).unwrap();
        let z = (ma - mb) / (var(&a, ma) / a.len() as f64 + var(&b, mb) / ess).sqrt();
        worst = worst.max(z.abs());
        parts.push(format!("{} {z:+.2}", NAMES[i]));
    }
    verdict(
        "6a",
        worst < 4.0,
        format!("Geweke, 1e5 cycles, max |z| {worst:.2} < 4 [{}]", parts.join(", ")),
    )
}

/// Collapsed inclusion probability against trapezoid quadrature of the joint
/// density over `beta_k`, on a fixed ten-record instance.
fn criterion6b() -> Verdict {
    let x = [0.0, 1.0, 0.0, 1.0, 1.0];
    let z = [0.3, -1.2, 0.8, 0.1, -0.4];
    let y = [[0.2, -0.5], [-0.9, -1.4], [0.7, 0.1], [-0.4, -0.2], [-1.1, -0.8]];
    let rows = (0..5)
        .flat_map(|j| {
            (0..2).map(move |k| LongRow {
                y: y[j][k],
                individual: j,
                outcome: k,
                exposure: x[j],
                z: z[j],
            })
        })
        .collect();
    let design = LongDesign::from_rows(5, 2, rows).unwrap();
    let prior = PriorConfig::simulation(Regime::SsvsMu, 2);
    let mut state = ParameterState::zeros(5, 2);
    state.nu = vec![0.1, -0.3];
    state.alpha = vec![0.05, -0.1, 0.2, 0.0, -0.15];
    state.beta = vec![-0.6, 0.02];
    state.gamma = vec![0.2, 0.4];
    state.mu = -0.5;
    state.tau = 0.4;
    state.sigma = vec![0.6, 0.5];
    state.sigma_r = 0.3;
    state.indicators = vec![true, false];
    let mut g = GibbsSampler::new(design.clone(), prior.clone(), &SamplerConfig::default()).unwrap();
    g.sync(&state).unwrap();

    let log_integral = |k: usize, inc: bool| {
        let (lo, hi, m) = (-20.0, 20.0, 400_000);
        let h = (hi - lo) / m as f64;
        let mut s = state.clone();
        s.indicators[k] = inc;
        let vals: Vec<f64> = (0..=m)
            .map(|i| {
                s.beta[k] = lo + i as f64 * h;
                outsel_core::log_joint(&s, &design, &prior).unwrap()
            })
            .collect();
        let top = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = vals
            .iter()
            .enumerate()
            .map(|(i, v)| if i == 0 || i == m { 0.5 } else { 1.0 } * (v - top).exp())
            .sum();
        top + (sum * h).ln()
    };
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for k in 0..2 {
        let quad = 1.0 / (1.0 + (log_integral(k, false) - log_integral(k, true)).exp());
        let closed = 1.0 / (1.0 + (-g.inclusion_log_odds(k, &state)).exp());
        worst = worst.max((quad - closed).abs());
        parts.push(format!("k={}: {closed:.10} vs {quad:.10}", k + 1));
    }
    verdict(
        "6b",
        worst <= 1e-8,
        format!(
            "collapsed inclusion probability vs quadrature, max diff {worst:.1e} <= 1e-8 [{}]",
            parts.join("; ")
        ),
    )
}

/// Closed-form posterior of `mu` with scales held fixed: every location
/// parameter is jointly Gaussian, so the marginal follows from one dense solve.
fn conjugate_mu(design: &LongDesign, prior: &PriorConfig, s: &ParameterState) -> (f64, f64) {
    let (n, k) = (design.n(), design.k());
    let p = 3 * k + n + 1;
    let (b0, a0, mu_i) = (2 * k, 3 * k, 3 * k + n);
    let mut xtx = DMatrix::<f64>::zeros(p, p);
    let mut xty = DVector::<f64>::zeros(p);
    for r in design.rows() {
        let w = 1.0 / s.sigma[r.outcome].powi(2);
        let cols = [
            (r.outcome, 1.0),
            (k + r.outcome, r.z),
            (b0 + r.outcome, r.exposure),
            (a0 + r.individual, 1.0),
        ];
        for &(i, xi) in &cols {
            xty[i] += w * xi * r.y;
            for &(j, xj) in &cols {
                xtx[(i, j)] += w * xi * xj;
            }
        }
    }
    let mut cov0 = DMatrix::<f64>::zeros(p, p);
    let s_mu2 = prior.mu_prior_sd.powi(2);
    for kk in 0..k {
        cov0[(kk, kk)] = prior.nu_prior_sd.powi(2);
        cov0[(k + kk, k + kk)] = prior.gamma_prior_sd.powi(2);
        for ll in 0..k {
            cov0[(b0 + kk, b0 + ll)] = s_mu2 + if kk == ll { s.tau * s.tau } else { 0.0 };
        }
        cov0[(b0 + kk, mu_i)] = s_mu2;
        cov0[(mu_i, b0 + kk)] = s_mu2;
    }
    for j in 0..n {
        cov0[(a0 + j, a0 + j)] = s.sigma_r * s.sigma_r;
    }
    cov0[(mu_i, mu_i)] = s_mu2;
    let prec = cov0.try_inverse().expect("prior covariance is positive definite") + xtx;
    let post = prec.try_inverse().expect("posterior precision is positive definite");
    let m = &post * xty;
    (m[mu_i], post[(mu_i, mu_i)].sqrt())
}

fn criterion6c() -> (Verdict, Option<f64>) {
    let (data, _) = generate(Study::One, 30, 4, 4, -1.0, MASTER_SEED).unwrap();
    let design = stack_long(&data);
    let prior = PriorConfig {
        inclusion_prior: vec![1.0; 4],
        ..PriorConfig::simulation(Regime::Hierarchical, 4)
    };
    let config = SamplerConfig {
        n_chains: 4,
        n_burnin: 1000,
        n_samples: 20_000,
        thinning: 1,
        seed: MASTER_SEED,
        freeze_scales: true,
        ..SamplerConfig::default()
    };
    let chain = match fit_parallel(&design, &prior, &config) {
        Ok(c) => c,
        Err(e) => return (verdict("6c", false, format!("conjugate chain failed: {e}")), None),
    };
    let scales = &chain.chains[0].draws[0];
    let (m, sd) = conjugate_mu(&design, &prior, scales);
    let traces = chain.traces(|s| s.mu);
    let ess = effective_sample_size(&traces).unwrap();
    let draws: Vec<f64> = chain.all_draws().map(|s| s.mu).collect();
    let mc = mean(draws.iter().copied());
    let mc_sd = (draws.iter().map(|x| (x - mc).powi(2)).sum::<f64>() / (draws.len() - 1) as f64).sqrt();
    let se = sd / ess.sqrt();
    let rhat = convergence(&chain, &default_monitored(&prior, 4))
        .ok()
        .and_then(|d| max_rhat(&d));
    (
        verdict(
            "6c",
            (mc - m).abs() < 3.0 * se,
            format!(
                "conjugate submodel: MC mean {mc:.5} vs closed form {m:.5} (|diff| {:.5} < 3 se = {:.5}); sd {mc_sd:.4} vs {sd:.4}",
                (mc - m).abs(),
                3.0 * se
            ),
        ),
        rhat,
    )
}

/// Identical seeds give byte-identical chain files, through the library and
/// through the command line.
fn criterion6d() -> (Verdict, Option<f64>, Option<f64>) {
    let (data, _) = generate(Study::One, 100, 20, 10, -3.0, MASTER_SEED).unwrap();
    let design = stack_long(&data);
    let prior = PriorConfig::simulation(Regime::SsvsMu, 20);
    let config = SamplerConfig {
        n_burnin: 1000,
        n_samples: 1000,
        thinning: 1,
        seed: 77,
        ..SamplerConfig::default()
    };
    let a = format_chain(&fit_parallel(&design, &prior, &config).unwrap()).unwrap();
    let seq = run_chain(&design, &prior, &config).unwrap();
    let b = format_chain(&seq).unwrap();
    let lib_ok = a == b;
    let rhat = convergence(&seq, &default_monitored(&prior, 20))
        .ok()
        .and_then(|d| max_rhat(&d));

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("data.csv");
    outsel::dataset_io::write_dataset(&data, &csv).unwrap();
    let run = |out: &str| {
        let out = dir.path().join(out);
        let argv = [
            "outsel",
            "fit",
            "--data",
            csv.to_str().unwrap(),
            "--seed",
            "5",
            "--quiet",
            "--out",
            out.to_str().unwrap(),
        ];
        outsel::cli::run(argv).ok()?;
        let record = outsel::results_io::read_fit_record(&out).ok()?;
        Some((
            std::fs::read(out.join("chains.txt")).ok()?,
            max_rhat(&record.summary.diagnostics),
        ))
    };
    let (cli_ok, cli_rhat) = match (run("a"), run("b")) {
        (Some((x, r)), Some((y, _))) => (x == y && !x.is_empty(), r),
        _ => (false, None),
    };
    (
        verdict(
            "6d",
            lib_ok && cli_ok,
            format!(
                "identical seeds give identical chain files: parallel vs sequential {lib_ok}, two CLI fits {cli_ok}"
            ),
        ),
        rhat,
        cli_rhat,
    )
}

fn chain_with(inclusion: &[(usize, f64)], draws: usize) -> ChainOutput {
    // outcome k has indicator on in the first round(p * draws) draws, with
    // beta = -0.4 when on and 0.9 when off
    let k = inclusion.len();
    let prior = PriorConfig::simulation(Regime::SsvsMu, k);
    let states = (0..draws)
        .map(|d| {
            let mut s = ParameterState::zeros(1, k);
            s.sigma = vec![1.0; k];
            s.sigma_r = 1.0;
            for &(kk, p) in inclusion {
                let on = (d as f64) < (p * draws as f64).round();
                s.indicators[kk] = on;
                s.beta[kk] = if on { -0.4 } else { 0.9 };
            }
            s
        })
        .collect();
    ChainOutput {
        n: 1,
        k,
        prior,
        config: SamplerConfig::default(),
        chains: vec![ChainDraws {
            chain_index: 0,
            seed: 0,
            draws: states,
        }],
    }
}

fn criterion7() -> Verdict {
    let mut checks: Vec<(&str, bool)> = Vec::new();
    checks.push((
        "0.509 in, 0.438 out, 0.5 out",
        classify_probabilities(&[0.509, 0.438, 0.5]) == [true, false, false],
    ));
    checks.push(("mse((0,1),(1,1)) = 0.5", mse(&[0.0, 1.0], &[1.0, 1.0]).unwrap() == 0.5));
    checks.push((
        "mse(b,b) = 0",
        mse(&[-0.3, 2.0, 7.5], &[-0.3, 2.0, 7.5]).unwrap() == 0.0,
    ));
    let c = detection_counts(&[false; 6], &[true, true, false, false, true, false]).unwrap();
    checks.push((
        "nothing selected gives (0,0,0)",
        (c.n_identified, c.n_correct, c.n_false_positive) == (0, 0, 0),
    ));
    let mut invariant = true;
    for mask in 0u32..256 {
        let cl: Vec<bool> = (0..8).map(|i| mask >> i & 1 == 1).collect();
        let rel: Vec<bool> = (0..8).map(|i| (mask.wrapping_mul(37) >> i) & 1 == 1).collect();
        let c = detection_counts(&cl, &rel).unwrap();
        invariant &= c.n_identified == c.n_correct + c.n_false_positive;
    }
    checks.push(("n_identified = n_correct + n_false_positive", invariant));
    let est = point_estimates(&chain_with(&[(0, 0.6), (1, 0.3)], 1000)).unwrap();
    checks.push((
        "beta_hat: (0.6, -0.4) -> -0.4, 0.3 -> 0",
        (est[0] + 0.4).abs() < 1e-12 && est[1] == 0.0,
    ));
    let one = mu_summary(&[-2.5]).unwrap();
    checks.push(("single-rep spread undefined", one.mean == -2.5 && one.sd.is_none()));
    let same = mu_summary(&[1.25; 4]).unwrap();
    checks.push(("equal reps spread 0", same.sd == Some(0.0)));
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    verdict(
        "7",
        failed.is_empty(),
        if failed.is_empty() {
            format!("metric unit truths: {} checks", checks.len())
        } else {
            format!("metric unit truths failed: {}", failed.join("; "))
        },
    )
}

fn criterion8(grids: &[&[RepResult]], extra: &[(&str, Option<f64>)]) -> Verdict {
    let mut worst = 1.0f64;
    let mut bad = Vec::new();
    let mut count = 0;
    for r in grids.iter().flat_map(|g| g.iter()) {
        count += 1;
        match r.max_rhat {
            Some(v) if v <= RHAT_THRESHOLD => worst = worst.max(v),
            other => {
                worst = worst.max(other.unwrap_or(f64::INFINITY));
                bad.push(format!(
                    "study {} effect {} K1={} rep {} {}: {}",
                    r.study.number(),
                    r.effect,
                    r.k1,
                    r.rep,
                    r.regime,
                    other.map_or("missing".into(), |v| format!("{v:.3}"))
                ));
            }
        }
    }
    for (name, rhat) in extra {
        count += 1;
        match rhat {
            Some(v) if *v <= RHAT_THRESHOLD => worst = worst.max(*v),
            other => {
                worst = worst.max(other.unwrap_or(f64::INFINITY));
                bad.push(format!("{name}: {other:?}"));
            }
        }
    }
    let mut detail = format!("split R-hat on mu, tau, beta over {count} fits, max {worst:.4} <= {RHAT_THRESHOLD}");
    if !bad.is_empty() {
        detail.push_str(&format!("; {} violations [{}]", bad.len(), bad.join("; ")));
    }
    verdict("8", bad.is_empty(), detail)
}

fn main() -> ExitCode {
    // ignore libtest-style arguments such as --nocapture or a name filter
    let started = Instant::now();
    let mut verdicts = Vec::new();

    eprintln!("running simulation grids at the default sampler budget");
    let large = grid(
        Study::One,
        -3.0,
        &K1S,
        &[Regime::SsvsMu, Regime::SsvsZero, Regime::Hierarchical],
    );
    let study2 = grid(Study::Two, -3.0, &[10], &[Regime::SsvsMu]);
    let small = grid(Study::One, -0.1, &K1S, &[Regime::SsvsMu, Regime::Subset]);

    verdicts.push(criterion1(&large));
    verdicts.push(criterion2(&large));
    verdicts.push(criterion3(&large));
    verdicts.push(criterion4(&study2));
    verdicts.push(criterion5(&small));
    eprintln!("running sampler correctness checks");
    verdicts.push(criterion6a());
    verdicts.push(criterion6b());
    let (v6c, rhat_c) = criterion6c();
    verdicts.push(v6c);
    let (v6d, rhat_d, rhat_cli) = criterion6d();
    verdicts.push(v6d);
    verdicts.push(criterion7());
    verdicts.push(criterion8(
        &[&large, &study2, &small],
        &[
            ("conjugate submodel", rhat_c),
            ("determinism fit", rhat_d),
            ("command-line fit", rhat_cli),
        ],
    ));

    println!();
    for v in &verdicts {
        println!(
            "{} criterion {:<3} {}",
            if v.pass { "PASS" } else { "FAIL" },
            v.id,
            v.detail
        );
    }
    let failed = verdicts.iter().filter(|v| !v.pass).count();
    println!(
        "\nacceptance: {} passed, {failed} failed in {:.0}s",
        verdicts.len() - failed,
        started.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
