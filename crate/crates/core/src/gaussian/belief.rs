use super::StatsError;

/// Gaussian posterior over the unknown mean weight of one edge, with the
/// edge's observation noise variance known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeBelief {
    pub mu: f64,
    pub var: f64,
    pub noise_var: f64,
    pub observations: u64,
}

impl EdgeBelief {
    pub fn new(prior_mean: f64, prior_sd: f64, noise_sd: f64) -> Result<Self, StatsError> {
        let belief = Self { mu: prior_mean, var: prior_sd * prior_sd, noise_var: noise_sd * noise_sd, observations: 0 };
        belief.check()?;
        Ok(belief)
    }

    fn check(&self) -> Result<(), StatsError> {
        if !self.mu.is_finite() {
            return Err(StatsError::NonFinite(self.mu));
        }
        if !(self.var > 0.0 && self.var.is_finite()) {
            return Err(StatsError::InvalidVariance(self.var));
        }
        if !(self.noise_var > 0.0 && self.noise_var.is_finite()) {
            return Err(StatsError::InvalidVariance(self.noise_var));
        }
        Ok(())
    }

    pub fn sd(&self) -> f64 {
        self.var.sqrt()
    }

    /// Conjugate update with one observed weight.
    pub fn posterior_update(&self, observation: f64) -> Result<Self, StatsError> {
        if !observation.is_finite() {
            return Err(StatsError::NonFinite(observation));
        }
        let var = 1.0 / (1.0 / self.var + 1.0 / self.noise_var);
        let mu = var * (self.mu / self.var + observation / self.noise_var);
        Ok(Self { mu, var, noise_var: self.noise_var, observations: self.observations + 1 })
    }

    pub fn observe(&mut self, observation: f64) -> Result<(), StatsError> {
        *self = self.posterior_update(observation)?;
        Ok(())
    }
}
