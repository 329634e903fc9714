use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use super::config::{ConfigError, Endpoint, ExperimentConfig, RegretMode};
use super::seed::{agent_seed, environment_seed, stream_rng, Stream};
use crate::bandit::{init_cover, Agent, AgentConfig, BanditError, Cover, Environment, GenPrior, Policy};
use crate::graph::Graph;
use crate::io::{load_network, EdgeParams, Format, LoadError, Network, ParamDefaults};
use crate::metrics::{aggregate, ApproxRegret, ExactRegret, MetricsError, RegretTrace, Summary};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error("{0}")]
    Data(String),
    #[error("agent {agent}, repetition {repetition}: {source}")]
    Repetition { agent: Policy, repetition: usize, source: RunError },
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("cannot start worker pool: {0}")]
    Pool(String),
    #[error("writing results: {0}")]
    Io(#[from] std::io::Error),
}

impl ExperimentError {
    /// Process exit code: 1 config, 2 data, 3 runtime.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 1,
            Self::Load(_) | Self::Data(_) => 2,
            Self::Repetition { .. } | Self::Metrics(_) | Self::Pool(_) | Self::Io(_) => 3,
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Bandit(#[from] BanditError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

/// Everything an experiment produced, in (agent, repetition) order.
#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub network: Network,
    pub source: usize,
    pub target: usize,
    pub traces: Vec<RegretTrace>,
    pub summaries: Vec<Summary>,
    pub unusable_edges: Vec<usize>,
    pub cover_size: usize,
    pub environment_seeds: Vec<u64>,
    /// `(agent, repetition, seed)`
    pub agent_seeds: Vec<(Policy, usize, u64)>,
}

impl ExperimentResult {
    pub fn summary(&self, agent: Policy) -> Option<&Summary> {
        self.summaries.iter().find(|s| s.agent == agent.name())
    }

    pub fn traces_of(&self, agent: Policy) -> impl Iterator<Item = &RegretTrace> {
        self.traces.iter().filter(move |t| t.agent == agent.name())
    }
}

/// Loads the graph and applies the config's global parameter overrides.
pub fn load_experiment_network(config: &ExperimentConfig) -> Result<Network, ExperimentError> {
    let format = config.format.unwrap_or_else(|| Format::from_path(&config.graph));
    let mut network = load_network(&config.graph, format, config.directed, ParamDefaults::default())?;
    if let Some(sd) = config.noise_sd {
        network.params.noise_sd.fill(sd);
    }
    if let Some(sd) = config.prior_sd {
        network.params.prior_sd.fill(sd);
    }
    if network.graph.edge_count() == 0 {
        return Err(ExperimentError::Data(format!("{} has no edges", config.graph.display())));
    }
    Ok(network)
}

fn resolve_vertex(network: &Network, name: &str) -> Result<usize, ExperimentError> {
    network.vertex_id(name).ok_or_else(|| ExperimentError::Data(format!("vertex `{name}` is not in the graph")))
}

/// Resolves the query pair; random endpoints are drawn once per experiment
/// from the master seed, retrying until the target is reachable.
pub fn resolve_endpoints(network: &Network, config: &ExperimentConfig) -> Result<(usize, usize), ExperimentError> {
    let n = network.graph.vertex_count();
    let mut rng = stream_rng(config.seed, Stream::Endpoints);
    let fixed_source = match &config.source {
        Endpoint::Vertex(name) => Some(resolve_vertex(network, name)?),
        Endpoint::Random => None,
    };
    let fixed_target = match &config.target {
        Endpoint::Vertex(name) => Some(resolve_vertex(network, name)?),
        Endpoint::Random => None,
    };
    for _ in 0..10_000 {
        let s = fixed_source.unwrap_or_else(|| rng.random_range(0..n));
        let t = fixed_target.unwrap_or_else(|| rng.random_range(0..n));
        if s != t && network.graph.reachable_from(s)[t] {
            return Ok((s, t));
        }
        if fixed_source.is_some() && fixed_target.is_some() {
            break;
        }
    }
    let (s, t) = (config.source.to_string(), config.target.to_string());
    Err(ExperimentError::Data(format!("no reachable source/target pair for `{s}` -> `{t}`")))
}

enum RegretMeter {
    Approx(ApproxRegret),
    Exact(ExactRegret),
}

/// Everything one (agent, repetition) task needs.
pub struct TaskSpec<'a> {
    pub graph: &'a Graph,
    pub params: &'a EdgeParams,
    pub gen_prior: Option<&'a GenPrior>,
    pub source: usize,
    pub target: usize,
    pub cover: &'a Cover,
    pub agent: AgentConfig,
    pub regret: RegretMode,
    pub exact_mc_samples: usize,
    pub repetition: usize,
    pub environment_seed: u64,
    pub agent_seed: u64,
}

/// Runs one agent for `horizon` counted steps after its initial cover.
pub fn run_task(task: &TaskSpec<'_>) -> Result<RegretTrace, RunError> {
    let graph = task.graph;
    let env = Environment::new_repetition(
        graph,
        task.params,
        task.gen_prior,
        &mut stream_rng(task.environment_seed, Stream::Instance),
    )?;
    let meter = match task.regret {
        RegretMode::Approx => {
            RegretMeter::Approx(ApproxRegret::new(graph, env.theta_star(), task.source, task.target)?)
        }
        RegretMode::Exact => RegretMeter::Exact(ExactRegret::new(
            graph,
            env.theta_star(),
            env.noise_sd(),
            task.source,
            task.target,
            task.agent.path_cap,
            task.exact_mc_samples,
            &mut stream_rng(task.environment_seed, Stream::RegretScoring),
        )?),
    };
    let mut agent = Agent::new(graph, task.source, task.target, task.params, task.agent, task.agent_seed)?;
    let mut feedback_rng = stream_rng(task.agent_seed, Stream::Feedback);
    agent.play_cover(task.cover, &env, &mut feedback_rng)?;

    let mut trace = RegretTrace::new(task.agent.policy.name(), task.repetition, graph.edge_count());
    for _ in 0..task.agent.horizon {
        let outcome = agent.run_step(&env, &mut feedback_rng)?;
        let (instant, std_error) = match &meter {
            RegretMeter::Approx(m) => (m.instant(&outcome.chosen), 0.0),
            RegretMeter::Exact(m) => {
                let r = m.instant(&outcome.chosen)?;
                (r.mean, r.std_error)
            }
        };
        trace.push(instant, std_error, &outcome.chosen);
    }
    Ok(trace)
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult, ExperimentError> {
    let network = load_experiment_network(config)?;
    let (source, target) = resolve_endpoints(&network, config)?;
    run_on_network(config, network, source, target)
}

pub fn run_on_network(
    config: &ExperimentConfig,
    network: Network,
    source: usize,
    target: usize,
) -> Result<ExperimentResult, ExperimentError> {
    let graph = &network.graph;
    let cover = init_cover(graph, source, target).map_err(|e| ExperimentError::Data(e.to_string()))?;
    let unusable_edges: Vec<usize> = cover.unusable_edges().collect();
    if !unusable_edges.is_empty() {
        log::info!("{} edges lie on no simple source-target path and are never played", unusable_edges.len());
    }
    let gen_prior = config.env_prior_sd.map(|sd| GenPrior::widened(&network.params, sd));

    let reps = config.reps;
    let instance = |rep: usize| if config.fixed_instance { 0 } else { rep as u32 };
    let environment_seeds: Vec<u64> = (0..reps).map(|r| environment_seed(config.seed, instance(r))).collect();

    let mut tasks = Vec::with_capacity(config.agents.len() * reps);
    let mut agent_seeds = Vec::with_capacity(tasks.capacity());
    for (a, &policy) in config.agents.iter().enumerate() {
        let agent = AgentConfig {
            policy,
            schedule: config.ucb_schedule,
            horizon: config.horizon,
            mc_samples: config.mc_samples,
            path_cap: config.path_cap,
        };
        for (rep, &environment_seed) in environment_seeds.iter().enumerate() {
            let seed = agent_seed(config.seed, a as u32, rep as u32);
            agent_seeds.push((policy, rep, seed));
            tasks.push(TaskSpec {
                graph,
                params: &network.params,
                gen_prior: gen_prior.as_ref(),
                source,
                target,
                cover: &cover,
                agent,
                regret: config.regret,
                exact_mc_samples: config.exact_mc_samples,
                repetition: rep,
                environment_seed,
                agent_seed: seed,
            });
        }
    }

    let run_all = || -> Vec<Result<RegretTrace, RunError>> { tasks.par_iter().map(run_task).collect() };
    let outcomes = if config.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| ExperimentError::Pool(e.to_string()))?
            .install(run_all)
    } else {
        run_all()
    };

    let mut traces = Vec::with_capacity(outcomes.len());
    for (task, outcome) in tasks.iter().zip(outcomes) {
        traces.push(outcome.map_err(|source| ExperimentError::Repetition {
            agent: task.agent.policy,
            repetition: task.repetition,
            source,
        })?);
    }
    let summaries = traces.chunks(reps).map(aggregate).collect::<Result<Vec<_>, _>>()?;
    drop(tasks);

    Ok(ExperimentResult {
        config: config.clone(),
        network,
        source,
        target,
        traces,
        summaries,
        unusable_edges,
        cover_size: cover.paths.len(),
        environment_seeds,
        agent_seeds,
    })
}
