//! The `outsel` command line.

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use outsel_core::metrics::summarize;
use outsel_core::report::{render_fits, render_grid, Layout, Table};
use outsel_core::sim::Study;
use outsel_core::{
    stack_long, standardize, GridSpec, PriorConfig, Regime, SamplerConfig, SpikeMode, StandardizationRecord,
};

use crate::error::IoError;
use crate::manifest::Manifest;
use crate::results_io::{self, FitRecord};
use crate::{chain_io, dataset_io, runner};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "OUTSEL_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "outsel-out";
pub const CHAIN_FILE: &str = "chains.txt";

#[derive(Debug, Parser)]
#[command(
    name = "outsel",
    version,
    about = "Bayesian selection of outcomes affected by an exposure"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a replication grid of simulated datasets and tabulate the results.
    Simulate(SimulateArgs),
    /// Fit one dataset and store chains and a summary.
    Fit(FitArgs),
    /// Render tables from stored results.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct SamplerArgs {
    /// Number of chains.
    #[arg(long)]
    pub chains: Option<usize>,
    /// Burn-in sweeps per chain.
    #[arg(long)]
    pub burnin: Option<usize>,
    /// Post burn-in sweeps per chain.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Keep every n-th post burn-in sweep.
    #[arg(long)]
    pub thin: Option<usize>,
    #[arg(long)]
    pub slice_width: Option<f64>,
    #[arg(long)]
    pub max_slice_steps: Option<usize>,
}

impl SamplerArgs {
    fn apply(&self, mut base: SamplerConfig) -> SamplerConfig {
        if let Some(v) = self.chains {
            base.n_chains = v;
        }
        if let Some(v) = self.burnin {
            base.n_burnin = v;
        }
        if let Some(v) = self.samples {
            base.n_samples = v;
        }
        if let Some(v) = self.thin {
            base.thinning = v;
        }
        if let Some(v) = self.slice_width {
            base.slice_width = v;
        }
        if let Some(v) = self.max_slice_steps {
            base.max_slice_steps = v;
        }
        base
    }
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SimulateArgs {
    /// Generating design: 1 (common effect) or 2 (latent factor).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub study: u8,
    /// Numbers of relevant outcomes, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub k1: Vec<usize>,
    /// Effect sizes (mu for study 1, omega for study 2), comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub effect: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    pub reps: usize,
    /// Prior regimes to fit, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "ssvs_mu,ssvs_zero,hierarchical,subset")]
    pub regimes: Vec<String>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Individuals per dataset.
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    /// Outcomes per dataset.
    #[arg(long, default_value_t = 20)]
    pub k: usize,
    #[command(flatten)]
    pub sampler: SamplerArgs,
    /// Output directory (default: $OUTSEL_OUT_DIR or ./outsel-out).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, short)]
    pub quiet: bool,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct FitArgs {
    /// Dataset CSV with columns id, exposure, z and one column per outcome.
    #[arg(long)]
    pub data: PathBuf,
    /// Prior regime: ssvs_mu, ssvs_zero, hierarchical, laplace or subset.
    #[arg(long)]
    pub prior: Option<String>,
    /// A single prior inclusion probability, or a file with one per outcome.
    #[arg(long)]
    pub inclusion_prior: Option<String>,
    /// Spike variance is tau^2 / c.
    #[arg(long, conflicts_with = "g1")]
    pub spike_ratio: Option<f64>,
    /// Fixed spike variance.
    #[arg(long)]
    pub g1: Option<f64>,
    #[arg(long)]
    pub mu_prior_sd: Option<f64>,
    #[arg(long)]
    pub laplace_scale: Option<f64>,
    /// File of outcome names (one per line) for the subset regime.
    #[arg(long)]
    pub subset_mask: Option<PathBuf>,
    /// Replace the exposure by log(1 + exposure).
    #[arg(long)]
    pub log1p_exposure: bool,
    #[arg(long)]
    pub standardize_exposure: bool,
    /// Keep outcomes on their original scale.
    #[arg(long)]
    pub no_standardize: bool,
    /// TOML file with `[prior]` and/or `[sampler]` tables; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Column label used by `report`.
    #[arg(long)]
    pub label: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub sampler: SamplerArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Do not print the summary table.
    #[arg(long, short)]
    pub quiet: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Directory written by `simulate` or `fit`; repeat for several.
    #[arg(long = "in", required = true)]
    pub inputs: Vec<PathBuf>,
    /// table1 to table4 for simulations, table5 or table6 for fits.
    #[arg(long)]
    pub layout: Option<String>,
    #[arg(long, default_value = "text", value_parser = ["text", "csv"])]
    pub format: String,
}

/// Contents of a `--config` file.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub prior: Option<PriorConfig>,
    pub sampler: Option<SamplerConfig>,
}

/// A failed command with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn user(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<outsel_core::Error> for CliError {
    fn from(e: outsel_core::Error) -> Self {
        use outsel_core::Error as E;
        match e {
            E::SliceExhausted { .. } | E::NonFinite { .. } | E::NoIncludedDraws { .. } | E::TooFewDraws(_) => {
                CliError::internal(e.to_string())
            }
            _ => CliError::user(e.to_string()),
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Core(inner) => inner.into(),
            other => CliError::user(other.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> CliResult<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = Cli::try_parse_from(&argv).map_err(|e| CliError::user(e.to_string()))?;
    let args: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match cli.command {
        Command::Simulate(a) => simulate(a, args),
        Command::Fit(a) => fit(a, args),
        Command::Report(a) => report(a),
    }
}

/// Entry point for the binary: runs and converts the outcome to an exit code.
pub fn main_exit_code() -> u8 {
    let argv: Vec<OsString> = std::env::args_os().collect();
    if let Err(e) = Cli::try_parse_from(&argv) {
        use clap::error::ErrorKind;
        let code = match e.kind() {
            ErrorKind::DisplayHelp
            | ErrorKind::DisplayVersion
            | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
            _ => 1,
        };
        let _ = e.print();
        return code;
    }
    match run(argv) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}

/// `--out`, else the environment variable, else `./outsel-out`.
pub fn resolve_out_dir(flag: Option<&Path>) -> PathBuf {
    match flag {
        Some(p) => p.to_path_buf(),
        None => std::env::var_os(OUT_DIR_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR)),
    }
}

fn prepare_out_dir(flag: Option<&Path>) -> CliResult<PathBuf> {
    let dir = resolve_out_dir(flag);
    std::fs::create_dir_all(&dir)
        .map_err(|e| CliError::user(format!("cannot create output directory {}: {e}", dir.display())))?;
    Ok(dir)
}

fn parse_regime(s: &str) -> CliResult<Regime> {
    Regime::parse(s).ok_or_else(|| {
        let names: Vec<&str> = Regime::ALL.iter().map(|r| r.name()).collect();
        CliError::user(format!(
            "unknown prior regime `{s}` (expected one of {})",
            names.join(", ")
        ))
    })
}

fn write_table(dir: &Path, name: &str, table: &Table, outputs: &mut Vec<String>) -> CliResult<()> {
    crate::write_atomic(&dir.join(format!("{name}.txt")), table.to_text().as_bytes())?;
    crate::write_atomic(&dir.join(format!("{name}.csv")), table.to_csv().as_bytes())?;
    outputs.push(format!("{name}.txt"));
    outputs.push(format!("{name}.csv"));
    Ok(())
}

fn simulate(a: SimulateArgs, argv: Vec<String>) -> CliResult<()> {
    let started = Instant::now();
    let study = Study::from_number(a.study).ok_or_else(|| CliError::user("study must be 1 or 2"))?;
    let regimes = a
        .regimes
        .iter()
        .map(|r| parse_regime(r.trim()))
        .collect::<CliResult<Vec<_>>>()?;
    if regimes.contains(&Regime::Laplace) {
        return Err(CliError::user(
            "the laplace regime has no inclusion indicators and is not part of the simulation grid",
        ));
    }
    let spec = GridSpec {
        study,
        n: a.n,
        k: a.k,
        effects: a.effect.clone(),
        k1s: a.k1.clone(),
        regimes,
        reps: a.reps,
        master_seed: a.seed,
        sampler: a.sampler.apply(SamplerConfig::default()),
    };
    spec.validate()?;
    let out = prepare_out_dir(a.out.as_deref())?;

    let quiet = a.quiet;
    let step = (spec.tasks().len() / 20).max(1);
    let results = runner::run_grid_parallel(&spec, |done, total| {
        if !quiet && (done % step == 0 || done == total) {
            eprintln!("fitted {done}/{total}");
        }
    })?;
    let failed: Vec<_> = results.iter().filter(|r| !r.ok()).collect();
    for r in &failed {
        eprintln!(
            "warning: effect {} k1 {} rep {} {}: {}",
            r.effect,
            r.k1,
            r.rep,
            r.regime,
            r.error.as_deref().unwrap_or("")
        );
    }
    let unconverged = results.iter().filter(|r| r.ok() && !r.converged()).count();
    if unconverged > 0 {
        eprintln!("warning: {unconverged} fits have split R-hat above the threshold");
    }

    let mut manifest = Manifest::new("simulate", argv, a.seed);
    results_io::write_results(&results, &out.join(results_io::RESULTS_FILE))?;
    manifest.outputs.push(results_io::RESULTS_FILE.into());
    let mut first = None;
    for (name, layout) in [
        ("table1", Layout::Table1),
        ("table2", Layout::Table2),
        ("table3", Layout::Table3),
        ("table4", Layout::Table4),
    ] {
        match render_grid(&results, layout) {
            Ok(t) => {
                write_table(&out, name, &t, &mut manifest.outputs)?;
                first.get_or_insert(t);
            }
            Err(outsel_core::Error::MissingCell(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    manifest.set_json("grid", &spec)?;
    manifest.set("failed_fits", failed.len());
    manifest.set("unconverged_fits", unconverged);
    manifest.wall_time_secs = started.elapsed().as_secs_f64();
    manifest.write(&out)?;
    if !quiet {
        if let Some(t) = first {
            print!("{}", t.to_text());
        }
        eprintln!("wrote {}", out.display());
    }
    if failed.len() == results.len() {
        return Err(CliError::internal("every fit in the grid failed"));
    }
    Ok(())
}

fn resolve_inclusion_prior(arg: Option<&str>, k: usize) -> CliResult<Option<Vec<f64>>> {
    let Some(arg) = arg else { return Ok(None) };
    if let Ok(p) = arg.parse::<f64>() {
        if !(p > 0.0 && p <= 1.0) {
            return Err(CliError::user(format!("inclusion probability {p} outside (0, 1]")));
        }
        return Ok(Some(vec![p; k]));
    }
    let path = Path::new(arg);
    if !path.exists() {
        return Err(CliError::user(format!(
            "--inclusion-prior `{arg}` is neither a probability nor an existing file"
        )));
    }
    Ok(Some(dataset_io::read_inclusion_prior(path, k)?))
}

fn read_config(path: &Path) -> CliResult<ConfigFile> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::user(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::user(format!("{}: {e}", path.display())))
}

fn fit(a: FitArgs, argv: Vec<String>) -> CliResult<()> {
    let started = Instant::now();
    let config_file = match &a.config {
        Some(p) => read_config(p)?,
        None => ConfigFile::default(),
    };

    let mut data = dataset_io::read_dataset(&a.data)?;
    if a.log1p_exposure {
        data = data.with_log1p_exposure()?;
    }
    if a.standardize_exposure {
        data = data.with_standardized_exposure()?;
    }
    let (data, standardization) = if a.no_standardize {
        let k = data.k();
        (data, StandardizationRecord::identity(k))
    } else {
        standardize(&data)?
    };
    let k = data.k();

    let regime = match (&a.prior, &config_file.prior) {
        (Some(s), _) => parse_regime(s)?,
        (None, Some(p)) => p.regime,
        (None, None) => Regime::SsvsMu,
    };
    let mut prior = match config_file.prior.clone() {
        Some(p) => PriorConfig { regime, ..p },
        None => PriorConfig::application(regime, k),
    };
    if let Some(pi) = resolve_inclusion_prior(a.inclusion_prior.as_deref(), k)? {
        if !regime.has_indicators() && pi.iter().any(|&p| p < 1.0) {
            return Err(CliError::user(format!(
                "--inclusion-prior does not apply to the {regime} regime"
            )));
        }
        prior.inclusion_prior = pi;
    }
    if let Some(c) = a.spike_ratio {
        prior.spike = SpikeMode::Ratio { c };
    }
    if let Some(g1) = a.g1 {
        prior.spike = SpikeMode::Fixed { g1 };
    }
    if let Some(sd) = a.mu_prior_sd {
        prior.mu_prior_sd = sd;
    }
    if let Some(b) = a.laplace_scale {
        prior.laplace_scale = b;
    }
    match (&a.subset_mask, regime) {
        (Some(path), Regime::Subset) => {
            prior.subset_mask = Some(dataset_io::read_subset_mask(path, data.outcome_names())?);
        }
        (Some(_), other) => {
            return Err(CliError::user(format!(
                "--subset-mask requires the subset regime, not {other}"
            )));
        }
        (None, Regime::Subset) if prior.subset_mask.is_none() => {
            return Err(CliError::user("the subset regime needs --subset-mask FILE"));
        }
        (None, Regime::Subset) => {}
        (None, _) => prior.subset_mask = None,
    }
    if !regime.has_indicators() && regime != Regime::Laplace {
        prior.inclusion_prior = vec![1.0; k];
    }
    prior.validate(k)?;

    let mut sampler = a.sampler.apply(config_file.sampler.clone().unwrap_or_default());
    if let Some(seed) = a.seed {
        sampler.seed = seed;
    }
    sampler.validate()?;

    let out = prepare_out_dir(a.out.as_deref())?;
    let design = stack_long(&data);
    let chain = runner::fit_parallel(&design, &prior, &sampler)?;
    let summary = summarize(&chain)?;

    let mut manifest = Manifest::new("fit", argv, sampler.seed);
    chain_io::write_chain(&chain, &out.join(CHAIN_FILE))?;
    manifest.outputs.push(CHAIN_FILE.into());
    let record = FitRecord {
        label: a.label.clone().unwrap_or_else(|| regime.name().to_string()),
        outcome_names: data.outcome_names().to_vec(),
        standardization,
        summary,
    };
    results_io::write_fit_record(&record, &out)?;
    manifest.outputs.extend(
        [
            results_io::FIT_SUMMARY_JSON,
            results_io::FIT_SUMMARY_CSV,
            results_io::DIAGNOSTICS_FILE,
        ]
        .map(String::from),
    );
    manifest.set("data", a.data.display());
    manifest.set("log1p_exposure", a.log1p_exposure);
    manifest.set("standardize_exposure", a.standardize_exposure);
    manifest.set("standardize_outcomes", !a.no_standardize);
    manifest.set_json("prior", &prior)?;
    manifest.set_json("sampler", &sampler)?;
    manifest.wall_time_secs = started.elapsed().as_secs_f64();
    manifest.write(&out)?;

    for d in record.summary.flagged() {
        eprintln!(
            "warning: {} has split R-hat {}; consider a longer run",
            d.name,
            d.rhat.map_or("undefined".to_string(), |r| format!("{r:.3}"))
        );
    }
    if !a.quiet {
        let layout = if regime.has_indicators() {
            Layout::Table5
        } else {
            Layout::Table6
        };
        print!("{}", render_fits(&[record.column()], layout)?.to_text());
        eprintln!("wrote {}", out.display());
    }
    Ok(())
}

enum Stored {
    Grid(Vec<outsel_core::RepResult>),
    Fit(Box<FitRecord>),
}

fn load_dir(dir: &Path) -> CliResult<Stored> {
    let results = dir.join(results_io::RESULTS_FILE);
    if results.is_file() {
        return Ok(Stored::Grid(results_io::read_results(&results)?));
    }
    if dir.join(results_io::FIT_SUMMARY_JSON).is_file() {
        return Ok(Stored::Fit(Box::new(results_io::read_fit_record(dir)?)));
    }
    Err(CliError::user(format!(
        "no results in {}: expected {} or {}",
        dir.display(),
        results_io::RESULTS_FILE,
        results_io::FIT_SUMMARY_JSON
    )))
}

fn report(a: ReportArgs) -> CliResult<()> {
    let stored = a.inputs.iter().map(|d| load_dir(d)).collect::<CliResult<Vec<_>>>()?;
    let layout = match &a.layout {
        Some(s) => {
            Layout::parse(s).ok_or_else(|| CliError::user(format!("unknown layout `{s}` (table1 to table6)")))?
        }
        None => match stored[0] {
            Stored::Grid(_) => Layout::Table1,
            Stored::Fit(_) => Layout::Table5,
        },
    };
    let table = if layout.uses_grid() {
        let mut all = Vec::new();
        for (s, dir) in stored.into_iter().zip(&a.inputs) {
            match s {
                Stored::Grid(r) => all.extend(r),
                Stored::Fit(_) => {
                    return Err(CliError::user(format!(
                        "{} holds a single fit; grid layouts need simulation results",
                        dir.display()
                    )))
                }
            }
        }
        render_grid(&all, layout)?
    } else {
        let mut cols = Vec::new();
        for (s, dir) in stored.into_iter().zip(&a.inputs) {
            match s {
                Stored::Fit(r) => cols.push(r.column()),
                Stored::Grid(_) => {
                    return Err(CliError::user(format!(
                        "{} holds simulation results; table5 and table6 need fits",
                        dir.display()
                    )))
                }
            }
        }
        render_fits(&cols, layout)?
    };
    match a.format.as_str() {
        "csv" => print!("{}", table.to_csv()),
        _ => print!("{}", table.to_text()),
    }
    Ok(())
}
