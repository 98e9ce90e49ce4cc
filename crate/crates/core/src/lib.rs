//! Bayesian outcome selection.
//!
//! Several continuous outcomes measured on the same individuals are stacked
//! into long format, the exposure enters through outcome-specific interaction
//! terms, and a random-intercept linear mixed model is fitted by Gibbs
//! sampling. A spike-and-slab prior whose slab is centred at a common effect
//! `mu` decides which outcomes respond to the exposure and estimates the mean
//! effect among those that do.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the command line
//! and parallel execution live in the companion `outsel` crate.

#![no_std]

extern crate alloc;

pub mod data;
pub mod error;
pub mod gibbs;
pub mod math;
pub mod metrics;
pub mod prior;
pub mod report;
pub mod sim;
pub mod slice;

pub use data::{stack_long, standardize, Dataset, LongDesign, LongRow, StandardizationRecord};
pub use error::{Error, Result};
pub use gibbs::{run_chain, ChainDraws, ChainOutput, GibbsSampler, SamplerConfig};
pub use metrics::{FitSummary, RepMetrics};
pub use prior::{log_beta_prior, log_joint, LogNormalPrior, ParameterState, PriorConfig, Regime, SpikeMode};
pub use sim::{GridSpec, RepResult, Study, Study1Params, Study2Params, TruthRecord};
