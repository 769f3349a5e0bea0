//! Exact posterior means for small datasets by enumerating every latent
//! assignment. Used as a test oracle for the sampler.

use crate::error::{Error, Result};
use crate::outcome::NUM_OUTCOMES;

use super::special::ln_gamma;
use super::{PreparedDataset, PriorSpec};

/// Largest number of assignment vectors [`exact_posterior_mean`] will visit.
pub const ENUMERATION_LIMIT: u64 = 1_000_000;

/// Posterior mean of every centre simplex, averaging the conjugate update
/// over all assignments `c` weighted by
/// `prod_i z_{c_i} * prod_k DirMult(counts_k(c) | alpha_k)`.
pub fn exact_posterior_mean(
    data: &PreparedDataset,
    prior: &PriorSpec,
) -> Result<Vec<[f64; NUM_OUTCOMES]>> {
    if data.n_centres() != prior.len() {
        return Err(Error::Prior(format!(
            "prior has {} centres, data was prepared for {}",
            prior.len(),
            data.n_centres()
        )));
    }
    let obs: Vec<_> = data.iter().collect();
    let assignments: f64 = obs.iter().map(|(s, _)| s.len() as f64).product();
    if assignments > ENUMERATION_LIMIT as f64 {
        return Err(Error::EnumerationBound {
            assignments,
            limit: ENUMERATION_LIMIT,
        });
    }

    let prior_mean: Vec<[f64; NUM_OUTCOMES]> = (0..prior.len()).map(|k| prior.mean(k).0).collect();
    let totals: Vec<f64> = prior.rows().iter().map(|a| a.iter().sum()).collect();

    // only centres some observation can reach move away from the prior
    let mut touched: Vec<usize> = obs.iter().flat_map(|(s, _)| s.centres().to_vec()).collect();
    touched.sort_unstable();
    touched.dedup();
    let slot = |k: usize| touched.binary_search(&k).unwrap();

    let mut choice = vec![0usize; obs.len()];
    let mut counts = vec![[0u32; NUM_OUTCOMES]; touched.len()];
    let mut acc = vec![[0.0; NUM_OUTCOMES]; touched.len()];
    let mut weight_sum = 0.0;
    let mut log_scale = f64::NEG_INFINITY;

    loop {
        for c in counts.iter_mut() {
            *c = [0; NUM_OUTCOMES];
        }
        let mut log_w = 0.0;
        for (i, (support, s)) in obs.iter().enumerate() {
            let j = choice[i];
            log_w += support.weights()[j].ln();
            counts[slot(support.centres()[j])][s.index()] += 1;
        }
        for (t, &k) in touched.iter().enumerate() {
            let n: u32 = counts[t].iter().sum();
            if n == 0 {
                continue;
            }
            let alpha = prior.alpha(k);
            log_w += ln_gamma(totals[k]) - ln_gamma(totals[k] + f64::from(n));
            for s in 0..NUM_OUTCOMES {
                if counts[t][s] > 0 {
                    log_w += ln_gamma(alpha[s] + f64::from(counts[t][s])) - ln_gamma(alpha[s]);
                }
            }
        }

        if log_w > log_scale {
            let r = (log_scale - log_w).exp();
            weight_sum *= r;
            for row in acc.iter_mut() {
                for v in row.iter_mut() {
                    *v *= r;
                }
            }
            log_scale = log_w;
        }
        let w = (log_w - log_scale).exp();
        weight_sum += w;
        for (t, &k) in touched.iter().enumerate() {
            let n: u32 = counts[t].iter().sum();
            if n == 0 {
                continue;
            }
            let alpha = prior.alpha(k);
            let denom = totals[k] + f64::from(n);
            for s in 0..NUM_OUTCOMES {
                let post = (alpha[s] + f64::from(counts[t][s])) / denom;
                acc[t][s] += w * (post - prior_mean[k][s]);
            }
        }

        // odometer step
        let mut i = 0;
        loop {
            if i == obs.len() {
                let mut out = prior_mean;
                if weight_sum > 0.0 {
                    for (t, &k) in touched.iter().enumerate() {
                        for s in 0..NUM_OUTCOMES {
                            out[k][s] += acc[t][s] / weight_sum;
                        }
                    }
                }
                return Ok(out);
            }
            choice[i] += 1;
            if choice[i] < obs[i].0.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{CentreSet, Support};
    use crate::outcome::Outcome;

    fn empty() -> PreparedDataset {
        PreparedDataset::empty(&CentreSet::standard())
    }

    #[test]
    fn no_data_gives_prior_means() {
        let prior = PriorSpec::league_default();
        let m = exact_posterior_mean(&empty(), &prior).unwrap();
        for (k, row) in m.iter().enumerate() {
            assert_eq!(*row, prior.mean(k).0);
        }
    }

    #[test]
    fn single_node_is_conjugate() {
        let prior = PriorSpec::league_default();
        let mut data = empty();
        data.push(
            Support::from_pairs(&[(25, 1.0)]).unwrap(),
            Outcome::ConvertedTry,
        );
        let m = exact_posterior_mean(&data, &prior).unwrap();
        let expected = [70.0, 1.0, 3.0, 10.0, 16.0].map(|a| a / 100.0);
        for s in 0..NUM_OUTCOMES {
            assert!((m[25][s] - expected[s]).abs() < 1e-15);
        }
    }

    #[test]
    fn symmetric_split() {
        let prior = PriorSpec::uniform(33, 2.0);
        let mut data = empty();
        data.push(
            Support::from_pairs(&[(3, 0.5), (4, 0.5)]).unwrap(),
            Outcome::PenaltyGoal,
        );
        let m = exact_posterior_mean(&data, &prior).unwrap();
        for s in 0..NUM_OUTCOMES {
            assert!((m[3][s] - m[4][s]).abs() < 1e-15);
        }
        // each centre takes the observation with probability 1/2
        let hit = 0.5 * 3.0 / 11.0 + 0.5 * 0.2;
        assert!((m[3][2] - hit).abs() < 1e-15);
    }

    #[test]
    fn unequal_weights_by_hand() {
        // two centres, one observation with weights (0.75, 0.25); uniform(1)
        // priors make both marginals equal so assignment odds are 3:1
        let prior = PriorSpec::uniform(33, 1.0);
        let mut data = empty();
        data.push(
            Support::from_pairs(&[(0, 0.75), (1, 0.25)]).unwrap(),
            Outcome::NoPoints,
        );
        let m = exact_posterior_mean(&data, &prior).unwrap();
        assert!((m[0][0] - (0.75 * 2.0 / 6.0 + 0.25 * 0.2)).abs() < 1e-15);
        assert!((m[1][0] - (0.25 * 2.0 / 6.0 + 0.75 * 0.2)).abs() < 1e-15);
    }

    #[test]
    fn enumeration_bound() {
        let prior = PriorSpec::uniform(33, 1.0);
        let mut data = empty();
        let s = Support::from_pairs(&[(0, 0.25), (1, 0.25), (5, 0.25), (6, 0.25)]).unwrap();
        for _ in 0..10 {
            data.push(s, Outcome::NoPoints);
        }
        assert!(matches!(
            exact_posterior_mean(&data, &prior),
            Err(Error::EnumerationBound { .. })
        ));
    }
}
