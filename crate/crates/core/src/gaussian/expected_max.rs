//! Expected maximum of independent Gaussians.
//!
//! Two components use Clark's closed form. Three components use the exact
//! decomposition `E[max] = Σ_i E[X_i · 1{X_i is the maximum}]`, where each term
//! reduces to a bivariate normal probability over the differences
//! `X_i - X_j`, `X_i - X_k` plus two Stein-type boundary terms.

use rand::Rng;
use rand_distr::StandardNormal;

use super::normal::{bvn_cdf, cdf, pdf};
use super::{GaussianVec, StatsError};

pub const MAX_EXACT_COMPONENTS: usize = 3;

/// Clark's formula for `E[max(X1, X2)]` with independent `X1 ~ N(m1, v1)`, `X2 ~ N(m2, v2)`.
pub fn clark_max2(m1: f64, v1: f64, m2: f64, v2: f64) -> f64 {
    let theta = (v1 + v2).sqrt();
    if theta == 0.0 {
        return m1.max(m2);
    }
    let alpha = (m1 - m2) / theta;
    m1 * cdf(alpha) + m2 * cdf(-alpha) + theta * pdf(alpha)
}

fn max_of_three(m: [f64; 3], v: [f64; 3]) -> f64 {
    // Point masses collapse to their largest value; with at most one left every
    // difference below has positive variance.
    let constants: Vec<usize> = (0..3).filter(|&i| v[i] == 0.0).collect();
    if constants.len() >= 2 {
        let c = constants.iter().map(|&i| m[i]).fold(f64::NEG_INFINITY, f64::max);
        let random: Vec<usize> = (0..3).filter(|&i| v[i] > 0.0).collect();
        return match random.as_slice() {
            [] => c,
            [i] => clark_max2(m[*i], v[*i], c, 0.0),
            _ => unreachable!(),
        };
    }

    let mut total = 0.0;
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let sj = (v[i] + v[j]).sqrt();
        let sk = (v[i] + v[k]).sqrt();
        let aj = (m[i] - m[j]) / sj;
        let ak = (m[i] - m[k]) / sk;
        let rho = (v[i] / (sj * sk)).min(1.0);
        let mut term = m[i] * bvn_cdf(aj, ak, rho);
        if v[i] > 0.0 {
            let resid = (1.0 - rho * rho).sqrt();
            let conditional = |a: f64, b: f64| {
                if resid < 1e-12 {
                    match b.partial_cmp(&a) {
                        Some(std::cmp::Ordering::Greater) => 1.0,
                        Some(std::cmp::Ordering::Less) => 0.0,
                        _ => 0.5,
                    }
                } else {
                    cdf((b - rho * a) / resid)
                }
            };
            term += v[i] / sj * pdf(aj) * conditional(aj, ak);
            term += v[i] / sk * pdf(ak) * conditional(ak, aj);
        }
        total += term;
    }
    total
}

/// Exact `E[max_i X_i]` for one to three independent components.
pub fn expected_max_exact(components: &GaussianVec) -> Result<f64, StatsError> {
    let (m, v) = (components.means(), components.vars());
    match m.len() {
        0 => Err(StatsError::Empty),
        1 => Ok(m[0]),
        2 => Ok(clark_max2(m[0], v[0], m[1], v[1])),
        3 => Ok(max_of_three([m[0], m[1], m[2]], [v[0], v[1], v[2]])),
        n => Err(StatsError::TooManyComponents(n)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
}

/// Monte Carlo estimate of `E[max_i X_i]` with its standard error.
pub fn expected_max_mc<R: Rng + ?Sized>(
    components: &GaussianVec,
    samples: usize,
    rng: &mut R,
) -> Result<McEstimate, StatsError> {
    if components.is_empty() {
        return Err(StatsError::Empty);
    }
    if samples == 0 {
        return Err(StatsError::NoSamples);
    }
    let sds: Vec<f64> = components.vars().iter().map(|v| v.sqrt()).collect();
    let means = components.means();
    let (mut mean, mut m2) = (0.0f64, 0.0f64);
    for n in 1..=samples {
        let mut best = f64::NEG_INFINITY;
        for (mu, sd) in means.iter().zip(&sds) {
            let z: f64 = rng.sample(StandardNormal);
            best = best.max(mu + sd * z);
        }
        let delta = best - mean;
        mean += delta / n as f64;
        m2 += delta * (best - mean);
    }
    let std_error = if samples > 1 { (m2 / (samples - 1) as f64 / samples as f64).sqrt() } else { 0.0 };
    Ok(McEstimate { mean, std_error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gv(means: &[f64], vars: &[f64]) -> GaussianVec {
        GaussianVec::new(means.to_vec(), vars.to_vec()).unwrap()
    }

    #[test]
    fn closed_form_iid_values() {
        let one = expected_max_exact(&gv(&[1.5], &[4.0])).unwrap();
        assert_eq!(one, 1.5);
        let two = expected_max_exact(&gv(&[0.0, 0.0], &[1.0, 1.0])).unwrap();
        assert!((two - 1.0 / std::f64::consts::PI.sqrt()).abs() < 1e-15);
        // E[max of 3 iid N(0,1)] = 3 / (2√π)
        let three = expected_max_exact(&gv(&[0.0, 0.0, 0.0], &[1.0, 1.0, 1.0])).unwrap();
        assert!((three - 1.5 / std::f64::consts::PI.sqrt()).abs() < 1e-13, "{three}");
    }

    #[test]
    fn degenerate_components() {
        assert_eq!(expected_max_exact(&gv(&[1.0, 2.0], &[0.0, 0.0])).unwrap(), 2.0);
        assert_eq!(expected_max_exact(&gv(&[1.0, 2.0, -1.0], &[0.0, 0.0, 0.0])).unwrap(), 2.0);
        // one random component against two constants equals Clark against the larger constant
        let a = expected_max_exact(&gv(&[0.0, 0.5, -3.0], &[1.0, 0.0, 0.0])).unwrap();
        assert!((a - clark_max2(0.0, 1.0, 0.5, 0.0)).abs() < 1e-15);
        // a very low constant does not change the maximum of two
        let b = expected_max_exact(&gv(&[0.0, 0.0, -40.0], &[1.0, 1.0, 0.0])).unwrap();
        assert!((b - 1.0 / std::f64::consts::PI.sqrt()).abs() < 1e-12, "{b}");
    }

    #[test]
    fn rejects_bad_sizes() {
        assert_eq!(expected_max_exact(&gv(&[], &[])), Err(StatsError::Empty));
        assert_eq!(expected_max_exact(&gv(&[0.0; 4], &[1.0; 4])), Err(StatsError::TooManyComponents(4)));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(expected_max_mc(&gv(&[0.0], &[1.0]), 0, &mut rng), Err(StatsError::NoSamples));
    }

    #[test]
    fn monte_carlo_degenerate_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let est = expected_max_mc(&gv(&[0.25, -1.0, 0.75], &[0.0, 0.0, 0.0]), 1000, &mut rng).unwrap();
        assert_eq!(est, McEstimate { mean: 0.75, std_error: 0.0 });
    }

    #[test]
    fn monte_carlo_single_component() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let samples = 200_000;
        let est = expected_max_mc(&gv(&[2.0], &[9.0]), samples, &mut rng).unwrap();
        let se = 3.0 / (samples as f64).sqrt();
        assert!((est.std_error - se).abs() < 0.02 * se, "{est:?}");
        assert!((est.mean - 2.0).abs() < 4.0 * se);
    }
}
