//! Agents, environments and the interaction loop.

mod agent;
mod cover;
mod env;
mod policy;

pub use agent::{Agent, AgentConfig, StepOutcome, DEFAULT_MC_SAMPLES};
pub use cover::{init_cover, loop_erase, Cover, COVER_ENUMERATION_CAP, COVER_SEARCH_BUDGET};
pub use env::{Environment, GenPrior};
pub use policy::{
    sample_means, select_bayes_ucb, select_greedy, select_greedy_exact, select_ts_approx, select_ts_exact, Policy,
    QuantileSchedule, Selection, MIN_QUANTILE_LEVEL,
};

use thiserror::Error;

use crate::gaussian::StatsError;
use crate::graph::Path;
use crate::oracle::OracleError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BanditError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("path {0} is not a valid path in the graph")]
    InvalidPath(Path),
    #[error("parameter vector has {got} entries for {expected} edges")]
    ParamLength { got: usize, expected: usize },
    #[error("no path from vertex {from} to vertex {to}")]
    NoPath { from: usize, to: usize },
    #[error("no candidate paths to choose from")]
    NoPaths,
}
