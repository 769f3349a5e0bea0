//! Data-augmentation Gibbs sampler.
//!
//! Every observation gets a latent centre assignment drawn from its support
//! with probability proportional to `z_k * P_k(s_i)`; given the assignments
//! each centre's simplex is conjugate, `P_k ~ Dirichlet(alpha_k + counts_k)`.
//!
//! Chains use ChaCha8 streams derived from one seed (stream = chain index + 1),
//! so a fit is bit-reproducible regardless of thread scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::outcome::NUM_OUTCOMES;

use super::posterior::Posterior;
use super::{PreparedDataset, PriorSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub chains: usize,
    pub iterations: usize,
    pub burn_in: usize,
    pub thinning: usize,
    pub seed: u64,
    pub rhat_threshold: f64,
}

impl SamplerConfig {
    pub fn with_seed(seed: u64) -> Self {
        SamplerConfig {
            seed,
            ..SamplerConfig::default()
        }
    }

    /// Draws kept per chain.
    pub fn kept_per_chain(&self) -> usize {
        (self.iterations - self.burn_in) / self.thinning
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Config(m.to_string()));
        if self.chains < 2 {
            return fail("at least two chains are required");
        }
        if self.thinning == 0 {
            return fail("thinning must be at least 1");
        }
        if self.iterations <= self.burn_in {
            return fail("iterations must exceed burn-in");
        }
        if self.kept_per_chain() < 4 {
            return fail("fewer than four kept draws per chain");
        }
        if !(self.rhat_threshold >= 1.0) {
            return fail("R-hat threshold must be at least 1");
        }
        Ok(())
    }

    fn keeps(&self, iteration: usize) -> bool {
        iteration >= self.burn_in
            && (iteration - self.burn_in + 1).is_multiple_of(self.thinning)
            && (iteration - self.burn_in + 1) / self.thinning <= self.kept_per_chain()
    }
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            chains: 4,
            iterations: 5_000,
            burn_in: 1_000,
            thinning: 4,
            seed: 0,
            rhat_threshold: 1.01,
        }
    }
}

/// One Dirichlet draw. Shapes below one use `Gamma(a + 1) * U^(1/a)` in log
/// space so that tiny shapes never produce an all-zero vector.
pub fn sample_dirichlet<R: Rng + ?Sized>(
    rng: &mut R,
    alpha: &[f64; NUM_OUTCOMES],
) -> [f64; NUM_OUTCOMES] {
    let mut logs = [0.0; NUM_OUTCOMES];
    for (l, &a) in logs.iter_mut().zip(alpha) {
        *l = if a >= 1.0 {
            Gamma::new(a, 1.0).expect("shape > 0").sample(rng).ln()
        } else {
            let g = Gamma::new(a + 1.0, 1.0).expect("shape > 0").sample(rng);
            let u: f64 = rng.gen::<f64>();
            g.ln() + (1.0 - u).ln() / a
        };
    }
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut p = logs.map(|l| (l - max).exp());
    let total: f64 = p.iter().sum();
    for v in p.iter_mut() {
        *v /= total;
    }
    p
}

/// Below this, assignment weights are computed in log space.
const TINY: f64 = 1e-300;

fn choose<R: Rng + ?Sized>(rng: &mut R, probs: &[f64]) -> usize {
    let total: f64 = probs.iter().sum();
    let mut u = rng.gen::<f64>() * total;
    for (j, &p) in probs.iter().enumerate() {
        if u < p {
            return j;
        }
        u -= p;
    }
    // rounding at the top end: last non-zero entry
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

fn run_chain(
    data: &PreparedDataset,
    prior: &PriorSpec,
    cfg: &SamplerConfig,
    chain: usize,
) -> Vec<f64> {
    let k_total = prior.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(chain as u64 + 1);

    // observations pinned to a single centre contribute fixed counts
    let mut fixed = vec![[0u32; NUM_OUTCOMES]; k_total];
    let mut free = Vec::new();
    for (support, s) in data.iter() {
        if support.len() == 1 {
            fixed[support.centres()[0]][s.index()] += 1;
        } else {
            free.push((support, s.index()));
        }
    }

    let mut theta: Vec<[f64; NUM_OUTCOMES]> = (0..k_total)
        .map(|k| sample_dirichlet(&mut rng, prior.alpha(k)))
        .collect();
    let mut counts = fixed.clone();
    let mut kept = Vec::with_capacity(cfg.kept_per_chain() * k_total * NUM_OUTCOMES);
    let mut probs = [0.0; 4];

    for it in 0..cfg.iterations {
        counts.copy_from_slice(&fixed);
        for &(support, s) in &free {
            let centres = support.centres();
            let weights = support.weights();
            let n = centres.len();
            let mut tiny = false;
            for j in 0..n {
                let p = theta[centres[j]][s];
                tiny |= p < TINY;
                probs[j] = weights[j] * p;
            }
            if tiny {
                let logs: Vec<f64> = (0..n)
                    .map(|j| weights[j].ln() + theta[centres[j]][s].ln())
                    .collect();
                let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                for j in 0..n {
                    probs[j] = if max.is_finite() {
                        (logs[j] - max).exp()
                    } else {
                        weights[j]
                    };
                }
            }
            let j = choose(&mut rng, &probs[..n]);
            counts[centres[j]][s] += 1;
        }
        for k in 0..k_total {
            let mut post = *prior.alpha(k);
            for (a, &c) in post.iter_mut().zip(&counts[k]) {
                *a += f64::from(c);
            }
            theta[k] = sample_dirichlet(&mut rng, &post);
        }
        if cfg.keeps(it) {
            for row in &theta {
                kept.extend_from_slice(row);
            }
        }
    }
    kept
}

/// Fits the posterior with independent chains run concurrently.
pub fn gibbs_fit(
    data: &PreparedDataset,
    prior: &PriorSpec,
    config: &SamplerConfig,
) -> Result<Posterior> {
    config.validate()?;
    if data.n_centres() != prior.len() {
        return Err(Error::Prior(format!(
            "prior has {} centres, data was prepared for {}",
            prior.len(),
            data.n_centres()
        )));
    }
    let draws: Vec<Vec<f64>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..config.chains)
            .map(|c| scope.spawn(move || run_chain(data, prior, config, c)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sampler thread panicked"))
            .collect()
    });
    let samples = draws.concat();
    Ok(Posterior::from_samples(
        samples,
        data.centres().clone(),
        *config,
        data.len(),
    ))
}
