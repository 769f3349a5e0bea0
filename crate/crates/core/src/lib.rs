#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::needless_range_loop,
    clippy::type_complexity,
    clippy::manual_checked_ops
)]
//! Fixed-weight Bayesian mixture model of possession outcomes over a
//! rugby-league pitch.
//!
//! The pipeline is:
//!
//! 1. [`ingest`] turns raw match events into labelled [`Action`]s grouped into
//!    possessions, and partitions them into league / team subsets.
//! 2. [`geometry`] maps every pitch location onto fixed interpolation weights
//!    over 33 centres.
//! 3. [`mixture`] fits per-centre outcome simplices with a data-augmentation
//!    Gibbs sampler under Dirichlet priors, and derives team priors from a
//!    league posterior.
//! 4. [`surfaces`] evaluates probability, EPV and uncertainty surfaces.
//! 5. [`ratings`] computes actual-vs-expected player ratings.
//!
//! [`synth`] generates seed-deterministic synthetic data from a known ground
//! truth for recovery tests.

pub mod error;
pub mod fmt;
pub mod geometry;
pub mod ingest;
pub mod mixture;
pub mod outcome;
pub mod ratings;
pub mod surfaces;
pub mod synth;

pub use error::{Error, Result};
pub use geometry::{Centre, CentreSet, Region, Support, WeightVector};
pub use ingest::{Action, DataSubset, IngestReport, RawEvent, SubsetLabel};
pub use mixture::{OutcomeSimplex, Posterior, PreparedDataset, PriorSpec, SamplerConfig};
pub use outcome::{Outcome, NUM_OUTCOMES};
pub use ratings::PlayerRating;
pub use surfaces::{DiffGrid, SdFormula, SurfaceGrid};
