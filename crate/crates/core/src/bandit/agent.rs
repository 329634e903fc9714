use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cover::{init_cover, Cover};
use super::env::Environment;
use super::policy::{
    select_bayes_ucb, select_greedy, select_greedy_exact, select_ts_approx, select_ts_exact, Policy, QuantileSchedule,
    Selection,
};
use super::BanditError;
use crate::gaussian::EdgeBelief;
use crate::graph::{Graph, Path};
use crate::io::EdgeParams;
use crate::oracle::{enumerate_paths, DEFAULT_PATH_CAP};

/// Default number of Monte Carlo draws for expected maxima of long paths.
pub const DEFAULT_MC_SAMPLES: usize = 10_000;

const MC_SEED_SALT: u64 = 0x6d63_5f73_7562_7374;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentConfig {
    pub policy: Policy,
    pub schedule: QuantileSchedule,
    pub horizon: u64,
    pub mc_samples: usize,
    pub path_cap: usize,
}

impl AgentConfig {
    pub fn new(policy: Policy, horizon: u64) -> Self {
        Self {
            policy,
            schedule: QuantileSchedule::default(),
            horizon,
            mc_samples: DEFAULT_MC_SAMPLES,
            path_cap: DEFAULT_PATH_CAP,
        }
    }
}

/// A learner holding one Gaussian belief per edge.
#[derive(Debug, Clone)]
pub struct Agent<'g> {
    graph: &'g Graph,
    source: usize,
    target: usize,
    config: AgentConfig,
    beliefs: Vec<EdgeBelief>,
    steps: u64,
    rng: ChaCha8Rng,
    mc_seed: u64,
    paths: Option<Vec<Path>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub chosen: Path,
    pub feedback: Vec<(usize, f64)>,
    /// The policy's own score of `chosen`.
    pub objective_value: f64,
}

impl<'g> Agent<'g> {
    pub fn new(
        graph: &'g Graph,
        source: usize,
        target: usize,
        params: &EdgeParams,
        config: AgentConfig,
        seed: u64,
    ) -> Result<Self, BanditError> {
        let m = graph.edge_count();
        for len in [params.prior_mean.len(), params.prior_sd.len(), params.noise_sd.len()] {
            if len != m {
                return Err(BanditError::ParamLength { got: len, expected: m });
            }
        }
        let beliefs = (0..m)
            .map(|e| EdgeBelief::new(params.prior_mean[e], params.prior_sd[e], params.noise_sd[e]))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            graph,
            source,
            target,
            config,
            beliefs,
            steps: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
            mc_seed: seed ^ MC_SEED_SALT,
            paths: None,
        })
    }

    pub fn policy(&self) -> Policy {
        self.config.policy
    }

    pub fn config(&self) -> &AgentConfig {
        &self.config
    }

    pub fn beliefs(&self) -> &[EdgeBelief] {
        &self.beliefs
    }

    pub fn beliefs_mut(&mut self) -> &mut [EdgeBelief] {
        &mut self.beliefs
    }

    /// Number of counted steps taken so far.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// All simple source→target paths, enumerated on first use.
    pub fn paths(&mut self) -> Result<&[Path], BanditError> {
        if self.paths.is_none() {
            self.paths = Some(enumerate_paths(self.graph, self.source, self.target, self.config.path_cap)?);
        }
        Ok(self.paths.as_deref().expect("just filled"))
    }

    /// Chooses the next path without changing any beliefs.
    pub fn select(&mut self) -> Result<Selection, BanditError> {
        let t = self.steps + 1;
        let AgentConfig { policy, schedule, horizon, mc_samples, .. } = self.config;
        // a fresh substream per step keeps Monte Carlo draws independent of
        // how many the previous steps consumed
        let mut mc_rng = ChaCha8Rng::seed_from_u64(self.mc_seed);
        mc_rng.set_stream(t);
        match policy {
            Policy::TsApprox => select_ts_approx(&self.beliefs, self.graph, self.source, self.target, &mut self.rng),
            Policy::Greedy => select_greedy(&self.beliefs, self.graph, self.source, self.target),
            Policy::BayesUcb => {
                select_bayes_ucb(&self.beliefs, self.graph, self.source, self.target, t, horizon, schedule)
            }
            Policy::TsExact => {
                self.paths()?;
                let paths = self.paths.as_deref().expect("enumerated");
                select_ts_exact(&self.beliefs, paths, &mut self.rng, mc_samples, &mut mc_rng)
            }
            Policy::GreedyExact => {
                self.paths()?;
                let paths = self.paths.as_deref().expect("enumerated");
                select_greedy_exact(&self.beliefs, paths, mc_samples, &mut mc_rng)
            }
        }
    }

    /// Conjugate update of every edge in `feedback`; other beliefs are untouched.
    pub fn update(&mut self, feedback: &[(usize, f64)]) -> Result<(), BanditError> {
        let m = self.beliefs.len();
        for &(e, w) in feedback {
            self.beliefs.get_mut(e).ok_or(BanditError::ParamLength { got: e, expected: m })?.observe(w)?;
        }
        Ok(())
    }

    /// Plays every path of the initial cover once and learns from it.
    /// These plays do not count as steps.
    pub fn initialize<R: Rng + ?Sized>(&mut self, env: &Environment<'_>, rng: &mut R) -> Result<Cover, BanditError> {
        let cover = init_cover(self.graph, self.source, self.target)?;
        self.play_cover(&cover, env, rng)?;
        Ok(cover)
    }

    /// Like [`Agent::initialize`] with a cover computed beforehand.
    pub fn play_cover<R: Rng + ?Sized>(
        &mut self,
        cover: &Cover,
        env: &Environment<'_>,
        rng: &mut R,
    ) -> Result<(), BanditError> {
        for path in &cover.paths {
            let feedback = env.feedback(path, rng)?;
            self.update(&feedback)?;
        }
        Ok(())
    }

    /// Select, observe, update.
    pub fn run_step<R: Rng + ?Sized>(
        &mut self,
        env: &Environment<'_>,
        rng: &mut R,
    ) -> Result<StepOutcome, BanditError> {
        let selection = self.select()?;
        let feedback = env.feedback(&selection.path, rng)?;
        self.update(&feedback)?;
        self.steps += 1;
        Ok(StepOutcome { chosen: selection.path, feedback, objective_value: selection.objective })
    }
}
