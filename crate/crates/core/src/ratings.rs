//! Actual-vs-expected player ratings.
//!
//! Every action is credited with its possession's terminal points and
//! debited the mean EPV at its location. A player's rating is the sum over
//! their actions divided by their team's median possessions per fixture.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fmt;
use crate::ingest::Action;
use crate::mixture::Posterior;
use crate::surfaces::epv_at;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayerRating {
    pub player_id: String,
    pub team: String,
    pub ae_rating: f64,
    pub actions: usize,
    pub actual_sum: f64,
    pub expected_sum: f64,
    pub median_possessions: f64,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Median over fixtures of the number of distinct possessions the team had
/// the ball in.
pub fn team_median_possessions(actions: &[Action], team: &str) -> Result<f64> {
    let mut per_fixture: BTreeMap<&str, BTreeSet<u32>> = BTreeMap::new();
    for a in actions.iter().filter(|a| a.attacking_team == team) {
        per_fixture
            .entry(&a.fixture_id)
            .or_default()
            .insert(a.possession_num);
    }
    if per_fixture.is_empty() {
        return Err(Error::UnknownTeam(team.to_string()));
    }
    Ok(median(
        per_fixture.values().map(|s| s.len() as f64).collect(),
    ))
}

/// Median possessions for every attacking team in the data.
pub fn all_team_medians(actions: &[Action]) -> Result<BTreeMap<String, f64>> {
    let teams: BTreeSet<&str> = actions.iter().map(|a| a.attacking_team.as_str()).collect();
    teams
        .into_iter()
        .map(|t| Ok((t.to_string(), team_median_possessions(actions, t)?)))
        .collect()
}

/// Ratings against an arbitrary EPV function, with explicit team medians.
/// One row per (player, team) pair that has at least one action.
pub fn rate_with(
    actions: &[Action],
    epv: impl Fn(f64, f64) -> Result<f64>,
    medians: &BTreeMap<String, f64>,
) -> Result<Vec<PlayerRating>> {
    let mut acc: BTreeMap<(&str, &str), (usize, f64, f64)> = BTreeMap::new();
    for a in actions {
        let expected = epv(a.x, a.y)?;
        let e = acc
            .entry((&a.player_id, &a.attacking_team))
            .or_insert((0, 0.0, 0.0));
        e.0 += 1;
        e.1 += a.outcome.points();
        e.2 += expected;
    }
    let mut out = Vec::with_capacity(acc.len());
    for ((player, team), (n, actual, expected)) in acc {
        let median = *medians
            .get(team)
            .ok_or_else(|| Error::UnknownTeam(team.to_string()))?;
        if !(median > 0.0) {
            return Err(Error::Config(format!(
                "team {team:?} has median possessions {median}"
            )));
        }
        out.push(PlayerRating {
            player_id: player.to_string(),
            team: team.to_string(),
            ae_rating: (actual - expected) / median,
            actions: n,
            actual_sum: actual,
            expected_sum: expected,
            median_possessions: median,
        });
    }
    sort_ratings(&mut out);
    Ok(out)
}

/// Highest rating first; ties go to the higher actual return, then to the
/// lexicographically smaller player id.
pub fn sort_ratings(r: &mut [PlayerRating]) {
    r.sort_by(|a, b| {
        b.ae_rating
            .total_cmp(&a.ae_rating)
            .then(b.actual_sum.total_cmp(&a.actual_sum))
            .then_with(|| a.player_id.cmp(&b.player_id))
            .then_with(|| a.team.cmp(&b.team))
    });
}

pub fn rate_players(actions: &[Action], league: &Posterior) -> Result<Vec<PlayerRating>> {
    let medians = all_team_medians(actions)?;
    rate_with(
        actions,
        |x, y| epv_at(league.centres(), league.mean(), x, y),
        &medians,
    )
}

/// The first `k` rows of a sorted rating list.
pub fn summary_table(ratings: &[PlayerRating], k: usize) -> &[PlayerRating] {
    &ratings[..k.min(ratings.len())]
}

/// Fixed-width text table for terminal output.
pub fn format_table(rows: &[PlayerRating]) -> String {
    let mut s = format!(
        "{:>4}  {:<16} {:<16} {:>9} {:>7}\n",
        "rank", "player", "team", "rating", "actions"
    );
    for (i, r) in rows.iter().enumerate() {
        s.push_str(&format!(
            "{:>4}  {:<16} {:<16} {:>9} {:>7}\n",
            i + 1,
            r.player_id,
            r.team,
            fmt::fixed(r.ae_rating, 4),
            r.actions
        ));
    }
    s
}

pub fn write_ratings_csv<W: Write>(w: W, ratings: &[PlayerRating]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "player_id",
        "team",
        "ae_rating",
        "actions",
        "actual_sum",
        "expected_sum",
        "median_possessions",
    ])?;
    for r in ratings {
        out.write_record([
            r.player_id.clone(),
            r.team.clone(),
            fmt::fixed(r.ae_rating, 4),
            r.actions.to_string(),
            fmt::sig(r.actual_sum, 9),
            fmt::sig(r.expected_sum, 9),
            fmt::sig(r.median_possessions, 9),
        ])?;
    }
    out.flush()?;
    Ok(())
}
