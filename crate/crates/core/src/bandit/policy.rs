//! Path-selection policies.
//!
//! Every policy turns the current edge beliefs into one weight per edge and
//! picks a path minimising a cost over those weights. The approximate
//! policies use the bottleneck oracle; the exact ones enumerate paths and
//! score each by its expected maximum.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::BanditError;
use crate::gaussian::{gaussian_quantile, sample_gaussian, EdgeBelief};
use crate::graph::{Graph, Path};
use crate::objective::exact_cost;
use crate::oracle::minimax;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Policy {
    /// Thompson Sampling with the max-of-means cost and the minimax oracle.
    TsApprox,
    /// Thompson Sampling with the expected-maximum cost over enumerated paths.
    TsExact,
    /// Oracle on lower posterior quantiles.
    BayesUcb,
    /// Oracle on posterior means.
    Greedy,
    /// Expected-maximum cost on posterior means over enumerated paths.
    GreedyExact,
}

impl Policy {
    pub const ALL: [Policy; 5] = [Self::TsApprox, Self::TsExact, Self::BayesUcb, Self::Greedy, Self::GreedyExact];

    /// Whether the policy scores every enumerated path instead of calling the oracle.
    pub fn enumerates_paths(self) -> bool {
        matches!(self, Self::TsExact | Self::GreedyExact)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::TsApprox => "ts_approx",
            Self::TsExact => "ts_exact",
            Self::BayesUcb => "bayes_ucb",
            Self::Greedy => "greedy",
            Self::GreedyExact => "greedy_exact",
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Policy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ts_approx" | "ts" => Ok(Self::TsApprox),
            "ts_exact" => Ok(Self::TsExact),
            "bayes_ucb" | "bucb" | "b-ucb" => Ok(Self::BayesUcb),
            "greedy" | "gr" => Ok(Self::Greedy),
            "greedy_exact" => Ok(Self::GreedyExact),
            other => Err(format!("unknown agent `{other}`")),
        }
    }
}

/// Smallest quantile level BayesUCB will use.
pub const MIN_QUANTILE_LEVEL: f64 = 1e-6;

/// Lower-quantile level used by BayesUCB at step `t`, clamped to
/// `[MIN_QUANTILE_LEVEL, 0.5]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum QuantileSchedule {
    /// `1/t`
    #[default]
    InverseT,
    Fixed(f64),
    /// `1/(t·(ln T)^c)` for horizon `T`
    InverseTLog(f64),
}

impl QuantileSchedule {
    pub fn level(self, t: u64, horizon: u64) -> f64 {
        let t = t.max(1) as f64;
        let raw = match self {
            Self::InverseT => 1.0 / t,
            Self::Fixed(p) => p,
            Self::InverseTLog(c) => 1.0 / (t * (horizon.max(2) as f64).ln().powf(c)),
        };
        raw.clamp(MIN_QUANTILE_LEVEL, 0.5)
    }
}

impl fmt::Display for QuantileSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InverseT => f.write_str("inverse_t"),
            Self::Fixed(p) => write!(f, "fixed:{p}"),
            Self::InverseTLog(c) => write!(f, "inverse_t_log:{c}"),
        }
    }
}

impl FromStr for QuantileSchedule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |v: &str| v.parse::<f64>().map_err(|_| format!("invalid number `{v}` in schedule `{s}`"));
        match s.split_once(':') {
            None if s == "inverse_t" => Ok(Self::InverseT),
            Some(("fixed", p)) => {
                let p = parse(p)?;
                if p > 0.0 && p < 1.0 {
                    Ok(Self::Fixed(p))
                } else {
                    Err(format!("fixed quantile level {p} outside (0, 1)"))
                }
            }
            Some(("inverse_t_log", c)) => Ok(Self::InverseTLog(parse(c)?)),
            _ => Err(format!("unknown quantile schedule `{s}`")),
        }
    }
}

/// A chosen path and the policy's own score for it.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub path: Path,
    pub objective: f64,
}

fn oracle_select(graph: &Graph, weights: &[f64], source: usize, target: usize) -> Result<Selection, BanditError> {
    let result = minimax(graph, weights, source, target)?;
    Ok(Selection { path: result.path, objective: result.bottleneck_value })
}

/// One posterior draw per edge, in edge order.
pub fn sample_means<R: Rng + ?Sized>(beliefs: &[EdgeBelief], rng: &mut R) -> Vec<f64> {
    beliefs.iter().map(|b| sample_gaussian(b.mu, b.sd(), rng)).collect()
}

pub fn select_ts_approx<R: Rng + ?Sized>(
    beliefs: &[EdgeBelief],
    graph: &Graph,
    source: usize,
    target: usize,
    rng: &mut R,
) -> Result<Selection, BanditError> {
    let sampled = sample_means(beliefs, rng);
    oracle_select(graph, &sampled, source, target)
}

pub fn select_greedy(
    beliefs: &[EdgeBelief],
    graph: &Graph,
    source: usize,
    target: usize,
) -> Result<Selection, BanditError> {
    let means: Vec<f64> = beliefs.iter().map(|b| b.mu).collect();
    oracle_select(graph, &means, source, target)
}

/// `t` is the 1-based step index.
pub fn select_bayes_ucb(
    beliefs: &[EdgeBelief],
    graph: &Graph,
    source: usize,
    target: usize,
    t: u64,
    horizon: u64,
    schedule: QuantileSchedule,
) -> Result<Selection, BanditError> {
    let level = schedule.level(t, horizon);
    let optimistic = beliefs.iter().map(|b| gaussian_quantile(b.mu, b.sd(), level)).collect::<Result<Vec<_>, _>>()?;
    oracle_select(graph, &optimistic, source, target)
}

/// Lowest expected-maximum cost among `paths` under `means` and the beliefs'
/// noise variances. Ties keep the earliest path.
fn best_exact<R: Rng + ?Sized>(
    paths: &[Path],
    means: &[f64],
    beliefs: &[EdgeBelief],
    mc_samples: usize,
    mc_rng: &mut R,
) -> Result<Selection, BanditError> {
    let noise_vars: Vec<f64> = beliefs.iter().map(|b| b.noise_var).collect();
    let mut best: Option<(f64, &Path)> = None;
    for path in paths {
        let cost = exact_cost(path, means, &noise_vars, mc_samples, mc_rng)?.mean;
        if best.is_none_or(|(b, _)| cost < b) {
            best = Some((cost, path));
        }
    }
    let (objective, path) = best.ok_or(BanditError::NoPaths)?;
    Ok(Selection { path: path.clone(), objective })
}

pub fn select_ts_exact<R: Rng + ?Sized, M: Rng + ?Sized>(
    beliefs: &[EdgeBelief],
    paths: &[Path],
    rng: &mut R,
    mc_samples: usize,
    mc_rng: &mut M,
) -> Result<Selection, BanditError> {
    let sampled = sample_means(beliefs, rng);
    best_exact(paths, &sampled, beliefs, mc_samples, mc_rng)
}

pub fn select_greedy_exact<M: Rng + ?Sized>(
    beliefs: &[EdgeBelief],
    paths: &[Path],
    mc_samples: usize,
    mc_rng: &mut M,
) -> Result<Selection, BanditError> {
    let means: Vec<f64> = beliefs.iter().map(|b| b.mu).collect();
    best_exact(paths, &means, beliefs, mc_samples, mc_rng)
}
