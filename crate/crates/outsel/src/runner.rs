//! Parallel drivers. Chains and grid tasks are seeded independently, so the
//! output equals that of the sequential drivers in `outsel-core`.

use rayon::prelude::*;

use outsel_core::gibbs::{assemble_output, run_single_chain};
use outsel_core::sim::run_task;
use outsel_core::{ChainOutput, GridSpec, LongDesign, PriorConfig, RepResult, SamplerConfig};

/// Runs all chains of `config` on the rayon pool.
pub fn fit_parallel(
    design: &LongDesign,
    prior: &PriorConfig,
    config: &SamplerConfig,
) -> outsel_core::Result<ChainOutput> {
    prior.validate(design.k())?;
    config.validate()?;
    let chains = (0..config.n_chains)
        .into_par_iter()
        .map(|c| run_single_chain(design, prior, config, c))
        .collect::<outsel_core::Result<Vec<_>>>()?;
    Ok(assemble_output(design, prior, config, chains))
}

/// Runs every grid task on the rayon pool; results keep task order.
/// `progress` is called after each finished task with the number done.
pub fn run_grid_parallel(
    spec: &GridSpec,
    progress: impl Fn(usize, usize) + Sync,
) -> outsel_core::Result<Vec<RepResult>> {
    spec.validate()?;
    let tasks = spec.tasks();
    let total = tasks.len();
    let done = std::sync::atomic::AtomicUsize::new(0);
    Ok(tasks
        .par_iter()
        .map(|t| {
            let r = run_task(spec, t);
            progress(done.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1, total);
            r
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use outsel_core::sim::{generate, Study};
    use outsel_core::{run_chain, stack_long, Regime};

    #[test]
    fn parallel_chains_equal_sequential() {
        let (data, _) = generate(Study::One, 30, 4, 2, -2.0, 5).unwrap();
        let design = stack_long(&data);
        let prior = PriorConfig::simulation(Regime::SsvsMu, 4);
        let config = SamplerConfig {
            n_chains: 3,
            n_burnin: 40,
            n_samples: 60,
            thinning: 2,
            seed: 11,
            ..SamplerConfig::default()
        };
        let a = fit_parallel(&design, &prior, &config).unwrap();
        let b = run_chain(&design, &prior, &config).unwrap();
        assert_eq!(a, b);
    }
}
