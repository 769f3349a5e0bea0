//! Maximum-likelihood Dirichlet fit to simplex samples, and the team prior
//! derived from a league posterior.

use crate::error::{Error, Result};
use crate::outcome::NUM_OUTCOMES;

use super::posterior::Posterior;
use super::special::{digamma, inv_digamma};
use super::{OutcomeSimplex, PriorSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MleSettings {
    /// Converged once the largest absolute change in alpha falls below this.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Components are clamped to `[epsilon, 1 - epsilon]` before taking logs.
    pub epsilon: f64,
    pub min_samples: usize,
}

impl Default for MleSettings {
    fn default() -> Self {
        MleSettings {
            tolerance: 1e-8,
            max_iterations: 10_000,
            epsilon: 1e-10,
            min_samples: 100,
        }
    }
}

/// Fits `alpha` with the fixed point
/// `alpha_s <- invdigamma(digamma(sum alpha) + mean log pi_s)`,
/// started from a moment-matching estimate.
pub fn fit_dirichlet_mle(samples: &[OutcomeSimplex]) -> Result<[f64; NUM_OUTCOMES]> {
    fit_dirichlet_mle_with(samples, &MleSettings::default())
}

pub fn fit_dirichlet_mle_with(
    samples: &[OutcomeSimplex],
    settings: &MleSettings,
) -> Result<[f64; NUM_OUTCOMES]> {
    if samples.len() < settings.min_samples {
        return Err(Error::Mle(format!(
            "{} samples, at least {} required",
            samples.len(),
            settings.min_samples
        )));
    }
    let n = samples.len() as f64;
    let eps = settings.epsilon;
    let mut mean = [0.0; NUM_OUTCOMES];
    let mut mean_log = [0.0; NUM_OUTCOMES];
    for p in samples {
        for s in 0..NUM_OUTCOMES {
            let v = p.0[s].clamp(eps, 1.0 - eps);
            mean[s] += v / n;
            mean_log[s] += v.ln() / n;
        }
    }
    let mut var = [0.0; NUM_OUTCOMES];
    for p in samples {
        for s in 0..NUM_OUTCOMES {
            let d = p.0[s].clamp(eps, 1.0 - eps) - mean[s];
            var[s] += d * d / (n - 1.0);
        }
    }
    if var.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::Mle(format!(
            "zero sample variance in some component (variances {var:?}); the likelihood has no maximum"
        )));
    }

    // moment matching: var_s = m_s (1 - m_s) / (A + 1), averaged over components
    let precision = (0..NUM_OUTCOMES)
        .map(|s| mean[s] * (1.0 - mean[s]) / var[s] - 1.0)
        .sum::<f64>()
        / NUM_OUTCOMES as f64;
    let start = if precision.is_finite() && precision > 0.0 {
        precision
    } else {
        1.0
    };
    let mut alpha = mean.map(|m| m * start);

    let mut delta = f64::INFINITY;
    for _ in 0..settings.max_iterations {
        let psi_total = digamma(alpha.iter().sum());
        let mut next = [0.0; NUM_OUTCOMES];
        for s in 0..NUM_OUTCOMES {
            next[s] = inv_digamma(psi_total + mean_log[s]);
        }
        delta = alpha
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        alpha = next;
        if !alpha.iter().all(|a| a.is_finite() && *a > 0.0) {
            break;
        }
        if delta < settings.tolerance {
            return Ok(alpha);
        }
    }
    Err(Error::Mle(format!(
        "no convergence after {} iterations (last max change {delta:e}, alpha {alpha:?}, start precision {start})",
        settings.max_iterations
    )))
}

/// Fits one Dirichlet per centre to the pooled league draws.
pub fn derive_team_prior(league: &Posterior) -> Result<PriorSpec> {
    let alpha = (0..league.n_centres())
        .map(|k| {
            fit_dirichlet_mle(&league.centre_samples(k)).map_err(|e| Error::Centre {
                centre: k,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    PriorSpec::new(alpha)
}
