//! Super-arm cost functions.
//!
//! The exact cost of a path is the expected maximum of its edges' Gaussian
//! feedback; the approximate cost is the maximum of the edge means, which can
//! be minimised by the deterministic oracles.

use rand::Rng;

use crate::gaussian::{expected_max_exact, expected_max_mc, GaussianVec, McEstimate, StatsError, MAX_EXACT_COMPONENTS};
use crate::graph::Path;

/// `max_{i∈path} means[i]`.
pub fn approx_cost(path: &Path, means: &[f64]) -> f64 {
    path.max_weight(means)
}

/// `E[max_{i∈path} C_i]` with `C_i ~ N(means[i], noise_vars[i])`.
///
/// Paths of up to three edges are scored in closed form (zero standard
/// error); longer ones by Monte Carlo with `mc_samples` draws from `rng`.
pub fn exact_cost<R: Rng + ?Sized>(
    path: &Path,
    means: &[f64],
    noise_vars: &[f64],
    mc_samples: usize,
    rng: &mut R,
) -> Result<McEstimate, StatsError> {
    let components = GaussianVec::new(
        path.edges.iter().map(|&e| means[e]).collect(),
        path.edges.iter().map(|&e| noise_vars[e]).collect(),
    )?;
    if components.len() <= MAX_EXACT_COMPONENTS {
        Ok(McEstimate { mean: expected_max_exact(&components)?, std_error: 0.0 })
    } else {
        expected_max_mc(&components, mc_samples, rng)
    }
}
