use rand::Rng;

use super::BanditError;
use crate::gaussian::sample_gaussian;
use crate::graph::{validate_path, Graph, Path};
use crate::io::EdgeParams;

/// Distribution the environment draws hidden means from, when it differs
/// from the agents' prior.
#[derive(Debug, Clone, PartialEq)]
pub struct GenPrior {
    pub mean: Vec<f64>,
    pub sd: Vec<f64>,
}

impl GenPrior {
    /// Same means as the agent prior, one shared (wider) standard deviation.
    pub fn widened(params: &EdgeParams, sd: f64) -> Self {
        Self { mean: params.prior_mean.clone(), sd: vec![sd; params.len()] }
    }
}

/// Hidden stochastic edge weights `w_e ~ N(theta_star[e], noise_sd[e]²)`.
///
/// `theta_star` stays fixed for the lifetime of the environment and is only
/// exposed to the evaluation harness, never to agents.
#[derive(Debug, Clone)]
pub struct Environment<'g> {
    graph: &'g Graph,
    theta_star: Vec<f64>,
    noise_sd: Vec<f64>,
}

impl<'g> Environment<'g> {
    /// Draws a fresh instance: hidden means from `gen_prior` if given, else
    /// from the agents' prior in `params`.
    pub fn new_repetition<R: Rng + ?Sized>(
        graph: &'g Graph,
        params: &EdgeParams,
        gen_prior: Option<&GenPrior>,
        rng: &mut R,
    ) -> Result<Self, BanditError> {
        let (mean, sd) = match gen_prior {
            Some(g) => (&g.mean, &g.sd),
            None => (&params.prior_mean, &params.prior_sd),
        };
        if mean.len() != graph.edge_count() || sd.len() != graph.edge_count() {
            return Err(BanditError::ParamLength { got: mean.len().min(sd.len()), expected: graph.edge_count() });
        }
        let theta_star = mean.iter().zip(sd).map(|(&m, &s)| sample_gaussian(m, s, rng)).collect();
        Self::with_theta(graph, theta_star, params.noise_sd.clone())
    }

    pub fn with_theta(graph: &'g Graph, theta_star: Vec<f64>, noise_sd: Vec<f64>) -> Result<Self, BanditError> {
        for len in [theta_star.len(), noise_sd.len()] {
            if len != graph.edge_count() {
                return Err(BanditError::ParamLength { got: len, expected: graph.edge_count() });
            }
        }
        Ok(Self { graph, theta_star, noise_sd })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn theta_star(&self) -> &[f64] {
        &self.theta_star
    }

    pub fn noise_sd(&self) -> &[f64] {
        &self.noise_sd
    }

    pub fn noise_vars(&self) -> Vec<f64> {
        self.noise_sd.iter().map(|s| s * s).collect()
    }

    /// One independent weight draw per edge on `path`, in path order.
    pub fn feedback<R: Rng + ?Sized>(&self, path: &Path, rng: &mut R) -> Result<Vec<(usize, f64)>, BanditError> {
        if !validate_path(self.graph, path) {
            return Err(BanditError::InvalidPath(path.clone()));
        }
        Ok(path.edges.iter().map(|&e| (e, sample_gaussian(self.theta_star[e], self.noise_sd[e], rng))).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn params(n: usize, mean: f64, prior_sd: f64, noise_sd: f64) -> EdgeParams {
        EdgeParams { prior_mean: vec![mean; n], noise_sd: vec![noise_sd; n], prior_sd: vec![prior_sd; n] }
    }

    #[test]
    fn degenerate_generating_prior_reproduces_means() {
        let g = Graph::from_edges(true, 3, [(0, 1), (1, 2)]).unwrap();
        let p = EdgeParams { prior_mean: vec![0.5, -2.0], noise_sd: vec![1.0; 2], prior_sd: vec![1.0; 2] };
        let gen = GenPrior::widened(&p, 0.0);
        let env = Environment::new_repetition(&g, &p, Some(&gen), &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(env.theta_star(), &[0.5, -2.0]);
    }

    #[test]
    fn matched_prior_draws_center_on_prior_mean() {
        let g = Graph::from_edges(true, 2, [(0, 1)]).unwrap();
        let p = params(1, 0.0, 1.0, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 10_000;
        let mean =
            (0..n).map(|_| Environment::new_repetition(&g, &p, None, &mut rng).unwrap().theta_star()[0]).sum::<f64>()
                / n as f64;
        assert!(mean.abs() < 4e-2, "{mean}");
    }

    #[test]
    fn wider_generating_prior_scales_hidden_means() {
        let g = Graph::from_edges(false, 2, [(0, 1)]).unwrap();
        let p = params(1, -3.0, 5.0, 20.0);
        let gen = GenPrior::widened(&p, 20.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let draws: Vec<f64> = (0..20_000)
            .map(|_| Environment::new_repetition(&g, &p, Some(&gen), &mut rng).unwrap().theta_star()[0])
            .collect();
        let m = draws.iter().sum::<f64>() / draws.len() as f64;
        let sd = (draws.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (draws.len() - 1) as f64).sqrt();
        assert!((sd - 20.0).abs() < 0.5, "{sd}");
        // the agent-side prior is untouched
        assert_eq!(p.prior_sd, vec![5.0]);
    }

    #[test]
    fn noiseless_feedback_returns_hidden_means() {
        let g = Graph::from_edges(true, 4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let env = Environment::with_theta(&g, vec![1.0, 2.0, 3.0], vec![0.0; 3]).unwrap();
        let fb = env.feedback(&Path::new(0, 3, vec![0, 1, 2]), &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        assert_eq!(fb, vec![(0, 1.0), (1, 2.0), (2, 3.0)]);
    }

    #[test]
    fn feedback_noise_has_configured_spread() {
        let g = Graph::from_edges(true, 2, [(0, 1)]).unwrap();
        let env = Environment::with_theta(&g, vec![0.3], vec![0.4]).unwrap();
        let path = Path::new(0, 1, vec![0]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let xs: Vec<f64> = (0..100_000).map(|_| env.feedback(&path, &mut rng).unwrap()[0].1).collect();
        let m = xs.iter().sum::<f64>() / xs.len() as f64;
        let sd = (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt();
        assert!((sd - 0.4).abs() < 0.02 * 0.4, "{sd}");
    }

    #[test]
    fn invalid_path_is_rejected() {
        let g = Graph::from_edges(true, 3, [(0, 1), (1, 2)]).unwrap();
        let env = Environment::with_theta(&g, vec![0.0; 2], vec![1.0; 2]).unwrap();
        let bad = Path::new(1, 0, vec![0]);
        assert!(matches!(env.feedback(&bad, &mut ChaCha8Rng::seed_from_u64(0)), Err(BanditError::InvalidPath(_))));
    }
}
