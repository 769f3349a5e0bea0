//! Shared fixtures for the pipeline benchmarks.

use epv_core::mixture::PreparedDataset;
use epv_core::synth::SyntheticSpec;
use epv_core::{Action, CentreSet};

/// Synthetic actions under the default league ground truth.
pub fn synthetic_actions(n: usize, seed: u64) -> Vec<Action> {
    let spec = SyntheticSpec {
        n_observations: n,
        seed,
        ..SyntheticSpec::default()
    };
    spec.generate(&CentreSet::standard())
        .expect("default spec is valid")
        .actions
}

pub fn prepared(n: usize, seed: u64) -> PreparedDataset {
    PreparedDataset::from_actions(&CentreSet::standard(), &synthetic_actions(n, seed))
        .expect("synthetic locations lie on the pitch")
}
