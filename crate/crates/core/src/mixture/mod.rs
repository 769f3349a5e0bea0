//! The fixed-weight Dirichlet mixture model.
//!
//! Each centre `k` carries an outcome simplex `P_k` with an independent
//! `Dirichlet(alpha_k)` prior. An observation at `(x, y)` with outcome `s`
//! has likelihood `sum_k z_k(x, y) P_k(s)` where `z` are the fixed
//! interpolation weights from [`crate::geometry`].

mod diagnostics;
mod exact;
mod gibbs;
mod mle;
mod posterior;
mod prior;
pub(crate) mod special;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{CentreSet, Support};
use crate::ingest::Action;
use crate::outcome::{Outcome, NUM_OUTCOMES, POINTS};

pub use diagnostics::{effective_sample_size, split_rhat};
pub use exact::{exact_posterior_mean, ENUMERATION_LIMIT};
pub use gibbs::{gibbs_fit, sample_dirichlet, SamplerConfig};
pub use mle::{derive_team_prior, fit_dirichlet_mle, MleSettings};
pub use posterior::{ConvergenceWarning, Posterior};
pub use prior::{read_simplex_table, write_simplex_table, PriorSpec};

/// Probabilities over the five outcomes, in [`Outcome`] index order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutcomeSimplex(pub [f64; NUM_OUTCOMES]);

impl OutcomeSimplex {
    pub fn new(p: [f64; NUM_OUTCOMES]) -> Option<Self> {
        let ok = p.iter().all(|v| *v >= 0.0 && v.is_finite())
            && (p.iter().sum::<f64>() - 1.0).abs() <= 1e-9;
        ok.then_some(OutcomeSimplex(p))
    }

    pub fn get(&self, o: Outcome) -> f64 {
        self.0[o.index()]
    }

    /// Expected points.
    pub fn epv(&self) -> f64 {
        self.0.iter().zip(POINTS).map(|(p, pts)| p * pts).sum()
    }
}

/// Observations reduced to what the likelihood needs: an outcome and the
/// non-zero interpolation weights of the observation's location.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedDataset {
    centres: CentreSet,
    outcomes: Vec<Outcome>,
    supports: Vec<Support>,
}

impl PreparedDataset {
    pub fn empty(centres: &CentreSet) -> Self {
        PreparedDataset {
            centres: centres.clone(),
            outcomes: Vec::new(),
            supports: Vec::new(),
        }
    }

    /// Prepares located observations; errors on any off-pitch location.
    pub fn from_locations(
        centres: &CentreSet,
        obs: impl IntoIterator<Item = (f64, f64, Outcome)>,
    ) -> Result<Self> {
        let mut data = PreparedDataset::empty(centres);
        for (x, y, s) in obs {
            data.push(centres.support(x, y)?, s);
        }
        Ok(data)
    }

    pub fn from_actions(centres: &CentreSet, actions: &[Action]) -> Result<Self> {
        Self::from_locations(centres, actions.iter().map(|a| (a.x, a.y, a.outcome)))
    }

    pub fn push(&mut self, support: Support, outcome: Outcome) {
        debug_assert!(support.centres().iter().all(|&k| k < self.centres.len()));
        self.supports.push(support);
        self.outcomes.push(outcome);
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn n_centres(&self) -> usize {
        self.centres.len()
    }

    pub fn centres(&self) -> &CentreSet {
        &self.centres
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Support, Outcome)> + '_ {
        self.supports.iter().zip(self.outcomes.iter().copied())
    }

    /// Expected number of observations assigned to each centre under the
    /// weights alone.
    pub fn weight_mass(&self) -> Vec<f64> {
        let mut mass = vec![0.0; self.centres.len()];
        for s in &self.supports {
            for (k, w) in s.iter() {
                mass[k] += w;
            }
        }
        mass
    }
}

/// Prior predictive probability of outcome `s` at centre `k`.
pub fn prior_predictive(prior: &PriorSpec, centre: usize, outcome: Outcome) -> f64 {
    prior.mean(centre).get(outcome)
}

/// Log-likelihood of the data with every centre's simplex replaced by its
/// prior predictive: `sum_i log sum_k z_k(x_i, y_i) alpha_{k,s_i} / sum(alpha_k)`.
pub fn log_likelihood(data: &PreparedDataset, prior: &PriorSpec) -> f64 {
    data.iter()
        .map(|(support, s)| {
            support
                .iter()
                .map(|(k, w)| w * prior_predictive(prior, k, s))
                .sum::<f64>()
                .ln()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn node(k: usize) -> Support {
        Support::from_pairs(&[(k, 1.0)]).unwrap()
    }

    #[test]
    fn prior_predictive_examples() {
        let centres = CentreSet::standard();
        let prior = PriorSpec::league_default();
        let k = centres.lookup(0.0, Some(100.0)).unwrap();
        let p = prior_predictive(&prior, k, Outcome::ConvertedTry);
        assert!((p - 15.0 / 99.0).abs() < 1e-15);
        assert!((p - 0.1515).abs() < 1e-4);
        let t = centres.lookup(0.0, None).unwrap();
        assert!((prior_predictive(&prior, t, Outcome::NoPoints) - 0.35).abs() < 1e-15);
        let uniform = PriorSpec::uniform(33, 1.0);
        for o in Outcome::ALL {
            assert!((prior_predictive(&uniform, 4, o) - 0.2).abs() < 1e-15);
        }
        let total: f64 = Outcome::ALL
            .iter()
            .map(|&o| prior_predictive(&prior, k, o))
            .sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn log_likelihood_examples() {
        let prior = PriorSpec::uniform(33, 1.0);
        assert_eq!(
            log_likelihood(&PreparedDataset::empty(&CentreSet::standard()), &prior),
            0.0
        );

        let mut one = PreparedDataset::empty(&CentreSet::standard());
        one.push(node(7), Outcome::DropGoal);
        assert!((log_likelihood(&one, &prior) - 0.2f64.ln()).abs() < 1e-15);

        let league = PriorSpec::league_default();
        let mut two = PreparedDataset::empty(&CentreSet::standard());
        two.push(node(25), Outcome::ConvertedTry);
        two.push(node(30), Outcome::UnconvertedTry);
        let expected = (15.0f64 / 99.0).ln() + (28.0f64 / 100.0).ln();
        assert!((log_likelihood(&two, &league) - expected).abs() < 1e-14);
    }

    #[test]
    fn adding_node_observation_adds_its_term() {
        let prior = PriorSpec::league_default();
        let centres = CentreSet::standard();
        let mut data =
            PreparedDataset::from_locations(&centres, [(5.0, 0.0, Outcome::NoPoints)]).unwrap();
        let before = log_likelihood(&data, &prior);
        data.push(node(12), Outcome::PenaltyGoal);
        let after = log_likelihood(&data, &prior);
        assert!((after - before - (3.0f64 / 100.0).ln()).abs() < 1e-14);
    }

    #[test]
    fn simplex_epv() {
        let s = OutcomeSimplex::new([
            70.0 / 99.0,
            1.0 / 99.0,
            3.0 / 99.0,
            10.0 / 99.0,
            15.0 / 99.0,
        ])
        .unwrap();
        assert!((s.epv() - 137.0 / 99.0).abs() < 1e-14);
        assert!(OutcomeSimplex::new([0.5, 0.6, 0.0, 0.0, 0.0]).is_none());
    }
}
