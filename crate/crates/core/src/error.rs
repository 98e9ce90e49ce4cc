use alloc::string::String;

/// Errors produced by the core library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),
    #[error("outcome `{outcome}` is constant over its observed cells; cannot standardize")]
    ConstantColumn { outcome: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("slice sampler exhausted {steps} steps while updating `{parameter}`")]
    SliceExhausted { parameter: String, steps: usize },
    #[error("non-finite log density while updating `{parameter}` at sweep {sweep} (chain {chain}): {state}")]
    NonFinite {
        parameter: String,
        chain: usize,
        sweep: usize,
        state: String,
    },
    #[error("regime `{0}` carries no inclusion indicators")]
    NoIndicators(&'static str),
    #[error("outcome {outcome} is classified relevant but has no draws with I=1")]
    NoIncludedDraws { outcome: usize },
    #[error("too few draws: {0}")]
    TooFewDraws(String),
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("missing table cell: {0}")]
    MissingCell(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
