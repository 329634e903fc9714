//! Regret traces, per-step regret against the hidden means, and aggregation
//! across repetitions.

use std::collections::HashMap;

use log::warn;
use rand::Rng;
use thiserror::Error;

use crate::gaussian::{McEstimate, StatsError};
use crate::graph::{Graph, Path};
use crate::objective::{approx_cost, exact_cost};
use crate::oracle::{enumerate_paths, minimax, OracleError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("nothing to aggregate")]
    Empty,
    #[error("traces have different horizons ({0} and {1})")]
    HorizonMismatch(usize, usize),
    #[error("traces belong to different agents (`{0}` and `{1}`)")]
    AgentMismatch(String, String),
    #[error("path {0} is not a simple source-target path of this instance")]
    UnknownPath(Path),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    /// 1-based step index.
    pub t: u64,
    pub instant: f64,
    pub cumulative: f64,
    /// Standard error of `instant`; zero unless Monte Carlo was involved.
    pub std_error: f64,
    pub path: Path,
}

/// Regret history of one agent in one repetition.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretTrace {
    pub agent: String,
    pub repetition: usize,
    pub steps: Vec<StepRecord>,
    /// Times each edge was played.
    pub visit_counts: Vec<u64>,
}

impl RegretTrace {
    pub fn new(agent: impl Into<String>, repetition: usize, edge_count: usize) -> Self {
        Self { agent: agent.into(), repetition, steps: Vec::new(), visit_counts: vec![0; edge_count] }
    }

    pub fn push(&mut self, instant: f64, std_error: f64, path: &Path) {
        let cumulative = self.cumulative() + instant;
        for &e in &path.edges {
            self.visit_counts[e] += 1;
        }
        self.steps.push(StepRecord {
            t: self.steps.len() as u64 + 1,
            instant,
            cumulative,
            std_error,
            path: path.clone(),
        });
    }

    pub fn horizon(&self) -> usize {
        self.steps.len()
    }

    pub fn cumulative(&self) -> f64 {
        self.steps.last().map_or(0.0, |s| s.cumulative)
    }

    /// Cumulative regret after `t` steps (0 for `t == 0`).
    pub fn cumulative_at(&self, t: usize) -> f64 {
        if t == 0 {
            0.0
        } else {
            self.steps[t - 1].cumulative
        }
    }

    /// The trace truncated to its first `t` steps.
    pub fn prefix(&self, t: usize) -> Self {
        let mut out = Self::new(self.agent.clone(), self.repetition, self.visit_counts.len());
        for s in &self.steps[..t] {
            out.push(s.instant, s.std_error, &s.path);
        }
        out
    }
}

/// Regret against the minimax optimum of the hidden means.
#[derive(Debug, Clone)]
pub struct ApproxRegret {
    theta_star: Vec<f64>,
    optimum: f64,
}

impl ApproxRegret {
    pub fn new(graph: &Graph, theta_star: &[f64], source: usize, target: usize) -> Result<Self, MetricsError> {
        let optimum = minimax(graph, theta_star, source, target)?.bottleneck_value;
        Ok(Self { theta_star: theta_star.to_vec(), optimum })
    }

    pub fn optimum(&self) -> f64 {
        self.optimum
    }

    pub fn instant(&self, chosen: &Path) -> f64 {
        approx_cost(chosen, &self.theta_star) - self.optimum
    }
}

pub fn approx_instant_regret(
    theta_star: &[f64],
    chosen: &Path,
    graph: &Graph,
    source: usize,
    target: usize,
) -> Result<f64, MetricsError> {
    Ok(ApproxRegret::new(graph, theta_star, source, target)?.instant(chosen))
}

/// Regret in expected path cost, with every simple path scored once up front.
#[derive(Debug, Clone)]
pub struct ExactRegret {
    costs: HashMap<Vec<usize>, McEstimate>,
    optimum: McEstimate,
}

impl ExactRegret {
    #[allow(clippy::too_many_arguments)]
    pub fn new<R: Rng + ?Sized>(
        graph: &Graph,
        theta_star: &[f64],
        noise_sds: &[f64],
        source: usize,
        target: usize,
        path_cap: usize,
        mc_samples: usize,
        rng: &mut R,
    ) -> Result<Self, MetricsError> {
        let noise_vars: Vec<f64> = noise_sds.iter().map(|s| s * s).collect();
        let mut costs = HashMap::new();
        let mut optimum: Option<McEstimate> = None;
        for path in enumerate_paths(graph, source, target, path_cap)? {
            let cost = exact_cost(&path, theta_star, &noise_vars, mc_samples, rng)?;
            if optimum.is_none_or(|o| cost.mean < o.mean) {
                optimum = Some(cost);
            }
            costs.insert(path.edges, cost);
        }
        let optimum = optimum.ok_or(OracleError::Unreachable { from: source, to: target })?;
        Ok(Self { costs, optimum })
    }

    pub fn optimum(&self) -> McEstimate {
        self.optimum
    }

    pub fn cost(&self, path: &Path) -> Option<McEstimate> {
        self.costs.get(&path.edges).copied()
    }

    /// Regret of `chosen` and its standard error.
    pub fn instant(&self, chosen: &Path) -> Result<McEstimate, MetricsError> {
        let cost = self.cost(chosen).ok_or_else(|| MetricsError::UnknownPath(chosen.clone()))?;
        let std_error = (cost.std_error.powi(2) + self.optimum.std_error.powi(2)).sqrt();
        Ok(McEstimate { mean: cost.mean - self.optimum.mean, std_error })
    }
}

#[allow(clippy::too_many_arguments)]
pub fn exact_instant_regret<R: Rng + ?Sized>(
    theta_star: &[f64],
    noise_sds: &[f64],
    chosen: &Path,
    graph: &Graph,
    source: usize,
    target: usize,
    path_cap: usize,
    mc_samples: usize,
    rng: &mut R,
) -> Result<McEstimate, MetricsError> {
    ExactRegret::new(graph, theta_star, noise_sds, source, target, path_cap, mc_samples, rng)?.instant(chosen)
}

/// Per-step mean and sample standard deviation of cumulative regret.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub agent: String,
    pub repetitions: usize,
    pub mean: Vec<f64>,
    pub sd: Vec<f64>,
}

impl Summary {
    pub fn horizon(&self) -> usize {
        self.mean.len()
    }

    pub fn final_mean(&self) -> f64 {
        self.mean.last().copied().unwrap_or(0.0)
    }

    pub fn final_sd(&self) -> f64 {
        self.sd.last().copied().unwrap_or(0.0)
    }
}

/// Mean and sample standard deviation (zero for a single value).
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>();
    (mean, (ss / (n - 1.0)).sqrt())
}

pub fn aggregate(traces: &[RegretTrace]) -> Result<Summary, MetricsError> {
    let first = traces.first().ok_or(MetricsError::Empty)?;
    for tr in traces {
        if tr.horizon() != first.horizon() {
            return Err(MetricsError::HorizonMismatch(first.horizon(), tr.horizon()));
        }
        if tr.agent != first.agent {
            return Err(MetricsError::AgentMismatch(first.agent.clone(), tr.agent.clone()));
        }
    }
    let mut column = vec![0.0; traces.len()];
    let (mut mean, mut sd) = (Vec::with_capacity(first.horizon()), Vec::with_capacity(first.horizon()));
    for t in 0..first.horizon() {
        for (c, tr) in column.iter_mut().zip(traces) {
            *c = tr.steps[t].cumulative;
        }
        let (m, s) = mean_sd(&column);
        mean.push(m);
        sd.push(s);
    }
    Ok(Summary { agent: first.agent.clone(), repetitions: traces.len(), mean, sd })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapCheck {
    pub gap: f64,
    pub bound: f64,
    pub holds: bool,
    /// Some noise variance exceeds 1, where the bound is not guaranteed.
    pub advisory: bool,
    /// Number of edges on at least one source-target path.
    pub usable_edges: usize,
}

/// Compares the expected cost of the max-of-means optimum with the true
/// expected-cost optimum, against `√(2 ln d)` for `d` usable edges.
#[allow(clippy::too_many_arguments)]
pub fn gap_bound_check<R: Rng + ?Sized>(
    theta_star: &[f64],
    noise_sds: &[f64],
    graph: &Graph,
    source: usize,
    target: usize,
    path_cap: usize,
    mc_samples: usize,
    rng: &mut R,
) -> Result<GapCheck, MetricsError> {
    let advisory = noise_sds.iter().any(|s| s * s > 1.0);
    if advisory {
        warn!("noise variance above 1: the gap bound is advisory only");
    }
    let noise_vars: Vec<f64> = noise_sds.iter().map(|s| s * s).collect();
    let paths = enumerate_paths(graph, source, target, path_cap)?;
    let mut usable = vec![false; graph.edge_count()];
    let mut best_exact = f64::INFINITY;
    let mut best_approx: Option<(f64, f64)> = None;
    for path in &paths {
        for &e in &path.edges {
            usable[e] = true;
        }
        let exact = exact_cost(path, theta_star, &noise_vars, mc_samples, rng)?.mean;
        let approx = approx_cost(path, theta_star);
        best_exact = best_exact.min(exact);
        if best_approx.is_none_or(|(a, _)| approx < a) {
            best_approx = Some((approx, exact));
        }
    }
    let (_, exact_of_approx) = best_approx.ok_or(OracleError::Unreachable { from: source, to: target })?;
    let usable_edges = usable.iter().filter(|&&u| u).count();
    let gap = exact_of_approx - best_exact;
    let bound = (2.0 * (usable_edges as f64).ln()).sqrt();
    Ok(GapCheck { gap, bound, holds: gap <= bound, advisory, usable_edges })
}
