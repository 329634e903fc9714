//! Gaussian machinery: conjugate edge beliefs, sampling and quantiles, and the
//! expected maximum of independent Gaussians.

mod belief;
mod expected_max;
pub mod normal;

use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

pub use belief::EdgeBelief;
pub use expected_max::{clark_max2, expected_max_exact, expected_max_mc, McEstimate, MAX_EXACT_COMPONENTS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("non-finite value {0}")]
    NonFinite(f64),
    #[error("invalid variance {0}")]
    InvalidVariance(f64),
    #[error("probability {0} outside (0, 1)")]
    InvalidProbability(f64),
    #[error("exact expected maximum supports at most 3 components, got {0}")]
    TooManyComponents(usize),
    #[error("no components")]
    Empty,
    #[error("{means} means but {vars} variances")]
    LengthMismatch { means: usize, vars: usize },
    #[error("sample count must be positive")]
    NoSamples,
}

/// Means and variances of independent Gaussian components.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianVec {
    means: Vec<f64>,
    vars: Vec<f64>,
}

impl GaussianVec {
    pub fn new(means: Vec<f64>, vars: Vec<f64>) -> Result<Self, StatsError> {
        if means.len() != vars.len() {
            return Err(StatsError::LengthMismatch { means: means.len(), vars: vars.len() });
        }
        if let Some(&m) = means.iter().find(|m| !m.is_finite()) {
            return Err(StatsError::NonFinite(m));
        }
        if let Some(&v) = vars.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(StatsError::InvalidVariance(v));
        }
        Ok(Self { means, vars })
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn vars(&self) -> &[f64] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.means.len()
    }

    pub fn is_empty(&self) -> bool {
        self.means.is_empty()
    }

    pub fn max_mean(&self) -> f64 {
        self.means.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn sample_gaussian<R: Rng + ?Sized>(mean: f64, sd: f64, rng: &mut R) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    mean + sd * z
}

/// `mean + sd·Φ⁻¹(p)`.
pub fn gaussian_quantile(mean: f64, sd: f64, p: f64) -> Result<f64, StatsError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(StatsError::InvalidProbability(p));
    }
    Ok(mean + sd * normal::quantile(p))
}
