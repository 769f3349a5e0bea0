//! Seed-deterministic synthetic data from a known ground truth.
//!
//! Each observation follows the model's generative law: draw a location,
//! draw a centre with probability equal to its interpolation weight there,
//! then draw the outcome from that centre's ground-truth simplex.
//!
//! The raw-event rendering of the same data adds non-location noise (tackles,
//! repeated rows by the same player, conversion kicks) that preprocessing is
//! expected to strip, so `preprocess(raw)` reproduces the actions exactly.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::CentreSet;
use crate::ingest::{Action, RawEvent};
use crate::mixture::{sample_dirichlet, OutcomeSimplex, PriorSpec};
use crate::outcome::{Outcome, NUM_OUTCOMES};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LocationLaw {
    /// Uniform over the whole pitch, try area included.
    #[default]
    Uniform,
    /// Each coordinate is the mean of two uniforms: a tent peaked at the
    /// middle of the pitch.
    Central,
    /// A centre picked uniformly, then a uniform offset of up to
    /// `NODE_JITTER` metres on each axis. Field centres stay on the field
    /// and try centres in the try area.
    Nodes,
}

pub const NODE_JITTER: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticSpec {
    /// Ground-truth simplex per centre.
    pub truth: Vec<[f64; NUM_OUTCOMES]>,
    /// Total number of actions.
    pub n_observations: usize,
    pub location: LocationLaw,
    pub teams: usize,
    pub fixtures: usize,
    pub players_per_team: usize,
    /// Outcomes are drawn at the first action of each possession, so only
    /// the default of 1 follows the generative law for every action.
    pub actions_per_possession: usize,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        let prior = PriorSpec::league_default();
        SyntheticSpec {
            truth: (0..prior.len()).map(|k| prior.mean(k).0).collect(),
            n_observations: 10_000,
            location: LocationLaw::Uniform,
            teams: 4,
            fixtures: 12,
            players_per_team: 13,
            actions_per_possession: 1,
            seed: 0,
        }
    }
}

/// One random simplex per centre, drawn from a Dirichlet prior.
pub fn random_truth(prior: &PriorSpec, seed: u64) -> Vec<[f64; NUM_OUTCOMES]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..prior.len())
        .map(|k| sample_dirichlet(&mut rng, prior.alpha(k)))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticData {
    pub actions: Vec<Action>,
    pub raw: Vec<RawEvent>,
}

fn fixture_name(f: usize) -> String {
    format!("F{:03}", f + 1)
}

fn team_name(t: usize) -> String {
    format!("T{:02}", t + 1)
}

fn player_name(t: usize, p: usize) -> String {
    format!("T{:02}-P{:02}", t + 1, p + 1)
}

fn draw_index<R: Rng>(rng: &mut R, weights: &[f64]) -> usize {
    let mut u = rng.gen::<f64>() * weights.iter().sum::<f64>();
    for (i, &w) in weights.iter().enumerate() {
        if u < w {
            return i;
        }
        u -= w;
    }
    weights.iter().rposition(|&w| w > 0.0).unwrap_or(0)
}

impl SyntheticSpec {
    pub fn validate(&self, centres: &CentreSet) -> Result<()> {
        if self.truth.len() != centres.len() {
            return Err(Error::Config(format!(
                "ground truth has {} rows, the centre layout has {}",
                self.truth.len(),
                centres.len()
            )));
        }
        for (k, row) in self.truth.iter().enumerate() {
            if OutcomeSimplex::new(*row).is_none() {
                return Err(Error::Config(format!(
                    "ground-truth row {k} is not a probability simplex: {row:?}"
                )));
            }
        }
        if self.teams < 2 || self.fixtures == 0 || self.players_per_team < 2 {
            return Err(Error::Config(
                "need at least two teams, one fixture and two players per team".into(),
            ));
        }
        if self.actions_per_possession == 0 {
            return Err(Error::Config(
                "actions_per_possession must be at least 1".into(),
            ));
        }
        Ok(())
    }

    fn fixture_teams(&self, f: usize) -> (usize, usize) {
        let home = f % self.teams;
        let offset = 1 + (f / self.teams) % (self.teams - 1);
        (home, (home + offset) % self.teams)
    }

    /// Locations are rounded to the millimetre so they survive a CSV round
    /// trip unchanged.
    fn location<R: Rng>(&self, rng: &mut R, c: &CentreSet) -> (f64, f64) {
        let mm = |v: f64| (v * 1000.0).round() / 1000.0;
        let (x, y) = self.raw_location(rng, c);
        (mm(x), mm(y))
    }

    fn raw_location<R: Rng>(&self, rng: &mut R, c: &CentreSet) -> (f64, f64) {
        let (wx, wy) = (c.x_max() - c.x_min(), c.y_max() - c.y_min());
        match self.location {
            LocationLaw::Uniform => (
                c.x_min() + rng.gen::<f64>() * wx,
                c.y_min() + rng.gen::<f64>() * wy,
            ),
            LocationLaw::Central => (
                c.x_min() + (rng.gen::<f64>() + rng.gen::<f64>()) / 2.0 * wx,
                c.y_min() + (rng.gen::<f64>() + rng.gen::<f64>()) / 2.0 * wy,
            ),
            LocationLaw::Nodes => {
                let k = rng.gen_range(0..c.len());
                let (x, y) = c.centre_location(k);
                let dx = (2.0 * rng.gen::<f64>() - 1.0) * NODE_JITTER;
                let dy = (2.0 * rng.gen::<f64>() - 1.0) * NODE_JITTER;
                let y_hi = if c.centre(k).y.is_some() {
                    c.y_try_line()
                } else {
                    c.y_max()
                };
                (
                    (x + dx).clamp(c.x_min(), c.x_max()),
                    (y + dy).clamp(c.y_min(), y_hi),
                )
            }
        }
    }

    /// Draws the dataset. Actions use ChaCha8 stream 0 of the seed; raw-event
    /// noise uses stream 1, so adding noise never changes the actions.
    pub fn generate(&self, centres: &CentreSet) -> Result<SyntheticData> {
        self.validate(centres)?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut noise = ChaCha8Rng::seed_from_u64(self.seed);
        noise.set_stream(1);

        let app = self.actions_per_possession;
        let n_poss = self.n_observations.div_ceil(app);
        let mut poss_count = vec![0u32; self.fixtures];
        let mut seq = vec![0u64; self.fixtures];
        let mut actions = Vec::with_capacity(self.n_observations);
        let mut raw = Vec::with_capacity(self.n_observations * 2);

        for i in 0..n_poss {
            let f = i % self.fixtures;
            let (home, away) = self.fixture_teams(f);
            poss_count[f] += 1;
            let pos = poss_count[f];
            let (att, def) = if pos % 2 == 1 {
                (home, away)
            } else {
                (away, home)
            };
            let n_here = app.min(self.n_observations - i * app);

            let mut outcome = Outcome::NoPoints;
            let mut player = rng.gen_range(0..self.players_per_team);
            let start = actions.len();
            for j in 0..n_here {
                if j > 0 {
                    // consecutive actions by one player would be collapsed
                    player =
                        (player + rng.gen_range(1..self.players_per_team)) % self.players_per_team;
                }
                let (x, y) = self.location(&mut rng, centres);
                if j == 0 {
                    let support = centres.support(x, y)?;
                    let k = support.centres()[draw_index(&mut rng, support.weights())];
                    outcome = Outcome::ALL[draw_index(&mut rng, &self.truth[k])];
                }
                actions.push(Action {
                    fixture_id: fixture_name(f),
                    attacking_team: team_name(att),
                    defending_team: team_name(def),
                    player_id: player_name(att, player),
                    x,
                    y,
                    possession_num: pos,
                    outcome,
                });
            }
            for a in &mut actions[start..] {
                a.outcome = outcome;
            }
            self.render_raw(&actions[start..], def, &mut seq[f], &mut noise, &mut raw);
        }
        // fixture by fixture, the order the event reader produces
        let rank: HashMap<String, usize> =
            (0..self.fixtures).map(|f| (fixture_name(f), f)).collect();
        actions.sort_by_key(|a| rank[&a.fixture_id]);
        raw.sort_by_key(|e| rank[&e.fixture_id]);
        Ok(SyntheticData { actions, raw })
    }

    fn render_raw(
        &self,
        poss: &[Action],
        def: usize,
        seq: &mut u64,
        noise: &mut ChaCha8Rng,
        out: &mut Vec<RawEvent>,
    ) {
        let mut push = |a: &Action,
                        category: &str,
                        action: &str,
                        completed: bool,
                        ended: bool,
                        player: Option<String>| {
            out.push(RawEvent {
                fixture_id: a.fixture_id.clone(),
                attacking_team: a.attacking_team.clone(),
                defending_team: a.defending_team.clone(),
                player_id: player.unwrap_or_else(|| a.player_id.clone()),
                category: category.into(),
                action: action.into(),
                x: a.x,
                y: a.y,
                completed,
                ended_possession: ended,
                sequence_index: *seq,
                line: 0,
            });
            *seq += 1;
        };
        let last = poss.len() - 1;
        for (j, a) in poss.iter().enumerate() {
            if j < last {
                push(a, "Move Team", "Pass", true, false, None);
                if noise.gen::<f64>() < 0.2 {
                    push(a, "Move Self", "Carry", true, false, None);
                }
                if noise.gen::<f64>() < 0.3 {
                    let tackler = player_name(def, noise.gen_range(0..self.players_per_team));
                    push(a, "Tackle", "Tackle", true, false, Some(tackler));
                }
                continue;
            }
            match a.outcome {
                Outcome::NoPoints => push(a, "Kick Position", "Kick", true, true, None),
                Outcome::DropGoal => push(a, "Kick Goal", "Field Goal", true, true, None),
                Outcome::PenaltyGoal => push(a, "Kick Goal", "Penalty Goal", true, true, None),
                Outcome::UnconvertedTry | Outcome::ConvertedTry => {
                    push(a, "Move Self", "Try", true, false, None);
                    let made = a.outcome == Outcome::ConvertedTry;
                    // same player, so de-duplication keeps the try location
                    push(a, "Kick Goal", "Conversion", made, true, None);
                }
            }
        }
    }
}
