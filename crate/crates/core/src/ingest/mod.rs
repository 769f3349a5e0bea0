//! Event ingest: category filtering, location de-duplication, possession
//! segmentation with outcome labels, and league/team partitioning.

mod category;
mod csv_io;

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::outcome::Outcome;

pub use category::{Category, GoalKick};
pub use csv_io::{read_actions, read_raw_events, write_actions, write_raw_events};

/// Pitch bounds used for clamping raw coordinates.
pub const X_RANGE: (f64, f64) = (0.0, 70.0);
pub const Y_RANGE: (f64, f64) = (-10.0, 110.0);

/// A located match event as delivered by the data provider.
#[derive(Debug, Clone, PartialEq)]
pub struct RawEvent {
    pub fixture_id: String,
    pub attacking_team: String,
    pub defending_team: String,
    pub player_id: String,
    pub category: String,
    pub action: String,
    pub x: f64,
    pub y: f64,
    pub completed: bool,
    pub ended_possession: bool,
    pub sequence_index: u64,
    /// Source line in the input file, 0 when constructed in code.
    pub line: usize,
}

impl RawEvent {
    fn goal_kick(&self) -> Option<GoalKick> {
        if Category::parse(&self.category) == Some(Category::KickGoal) {
            GoalKick::parse(&self.action)
        } else {
            None
        }
    }

    fn is_goal_kick(&self) -> bool {
        Category::parse(&self.category) == Some(Category::KickGoal)
    }

    fn closes_possession(&self) -> bool {
        self.ended_possession || self.is_goal_kick() || self.is_try()
    }

    fn is_try(&self) -> bool {
        self.completed && self.action.trim().eq_ignore_ascii_case("Try")
    }
}

/// One located action of a labelled possession.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Action {
    pub fixture_id: String,
    pub attacking_team: String,
    pub defending_team: String,
    pub player_id: String,
    pub x: f64,
    pub y: f64,
    pub possession_num: u32,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SubsetLabel {
    WholeLeague,
    TeamAttack(String),
    TeamDefence(String),
}

impl SubsetLabel {
    /// Parses `league`, `<team>:attack` or `<team>:defence`.
    pub fn parse(s: &str) -> Result<SubsetLabel> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("league") {
            return Ok(SubsetLabel::WholeLeague);
        }
        match s.rsplit_once(':') {
            Some((team, kind)) if kind.eq_ignore_ascii_case("attack") => {
                Ok(SubsetLabel::TeamAttack(team.to_string()))
            }
            Some((team, kind))
                if kind.eq_ignore_ascii_case("defence") || kind.eq_ignore_ascii_case("defense") =>
            {
                Ok(SubsetLabel::TeamDefence(team.to_string()))
            }
            _ => Err(Error::Config(format!(
                "subset {s:?} must be `league`, `<team>:attack` or `<team>:defence`"
            ))),
        }
    }

    pub fn contains(&self, a: &Action) -> bool {
        match self {
            SubsetLabel::WholeLeague => true,
            SubsetLabel::TeamAttack(t) => &a.attacking_team == t,
            SubsetLabel::TeamDefence(t) => &a.defending_team == t,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DataSubset {
    pub label: SubsetLabel,
    pub actions: Vec<Action>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeCounts {
    pub no_points: usize,
    pub drop_goal: usize,
    pub penalty_goal: usize,
    pub unconverted_try: usize,
    pub converted_try: usize,
}

impl OutcomeCounts {
    fn bump(&mut self, o: Outcome) {
        match o {
            Outcome::NoPoints => self.no_points += 1,
            Outcome::DropGoal => self.drop_goal += 1,
            Outcome::PenaltyGoal => self.penalty_goal += 1,
            Outcome::UnconvertedTry => self.unconverted_try += 1,
            Outcome::ConvertedTry => self.converted_try += 1,
        }
    }
}

/// Summary of a preprocessing run; `outcome_counts` counts possessions.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    pub rows_read: usize,
    pub rows_kept: usize,
    pub dedupe_drops: usize,
    pub clamped_locations: usize,
    pub possessions: usize,
    pub outcome_counts: OutcomeCounts,
}

impl IngestReport {
    /// Report for already-labelled actions: nothing dropped or clamped.
    pub fn for_actions(actions: &[Action]) -> IngestReport {
        let mut report = IngestReport {
            rows_read: actions.len(),
            rows_kept: actions.len(),
            ..IngestReport::default()
        };
        report.count_possessions(actions);
        report
    }

    fn count_possessions(&mut self, actions: &[Action]) {
        let mut seen = BTreeSet::new();
        for a in actions {
            if seen.insert((a.fixture_id.as_str(), a.possession_num)) {
                self.outcome_counts.bump(a.outcome);
            }
        }
        self.possessions = seen.len();
    }
}

/// Clamps coordinates onto the pitch, returning how many events moved.
pub fn clamp_locations(events: &mut [RawEvent]) -> usize {
    let mut moved = 0;
    for e in events.iter_mut() {
        let x = e.x.clamp(X_RANGE.0, X_RANGE.1);
        let y = e.y.clamp(Y_RANGE.0, Y_RANGE.1);
        if x != e.x || y != e.y {
            moved += 1;
            e.x = x;
            e.y = y;
        }
    }
    moved
}

/// Keeps events in the eight location-bearing categories. Incomplete events
/// survive only when they ended the possession.
pub fn filter_categories(events: &[RawEvent]) -> Result<Vec<RawEvent>> {
    let mut kept = Vec::with_capacity(events.len());
    for e in events {
        let cat = Category::parse(&e.category).ok_or_else(|| Error::UnknownCategory {
            value: e.category.clone(),
            line: e.line,
        })?;
        if cat.is_kept() && (e.completed || e.ended_possession) {
            kept.push(e.clone());
        }
    }
    Ok(kept)
}

/// Whether `next` opens a new possession after `prev` within one fixture.
fn opens_possession(prev: &RawEvent, next: &RawEvent) -> bool {
    if prev.attacking_team != next.attacking_team || prev.is_goal_kick() {
        return true;
    }
    if prev.is_try() {
        // the conversion attempt belongs to the try's possession
        return next.goal_kick() != Some(GoalKick::Conversion);
    }
    prev.ended_possession
}

/// Assigns a per-fixture possession number to each event, in input order.
fn possession_numbers(events: &[RawEvent]) -> Vec<u32> {
    let mut state: HashMap<&str, (usize, u32)> = HashMap::new();
    let mut nums = Vec::with_capacity(events.len());
    for (i, e) in events.iter().enumerate() {
        let num = match state.get(e.fixture_id.as_str()) {
            None => 1,
            Some(&(prev, n)) => n + u32::from(opens_possession(&events[prev], e)),
        };
        state.insert(e.fixture_id.as_str(), (i, num));
        nums.push(num);
    }
    nums
}

/// Drops the second of two consecutive events by the same player within one
/// (fixture, possession) episode. Consecutive runs collapse to their first
/// event. Events that close a possession (ended, goal kick, try) are always
/// kept, so the possession structure and a second pass are unchanged.
pub fn dedupe_locations(events: &[RawEvent]) -> Vec<RawEvent> {
    let nums = possession_numbers(events);
    let keep = dedupe_mask(
        events
            .iter()
            .zip(&nums)
            .map(|(e, &n)| (e.fixture_id.as_str(), n, e.player_id.as_str())),
    );
    events
        .iter()
        .zip(keep)
        .filter(|(e, k)| *k || e.closes_possession())
        .map(|(e, _)| e.clone())
        .collect()
}

/// Same rule applied to labelled actions.
pub fn dedupe_actions(actions: &[Action]) -> Vec<Action> {
    let keep = dedupe_mask(actions.iter().map(|a| {
        (
            a.fixture_id.as_str(),
            a.possession_num,
            a.player_id.as_str(),
        )
    }));
    actions
        .iter()
        .zip(keep)
        .filter(|&(_a, k)| k)
        .map(|(a, _k)| a.clone())
        .collect()
}

fn dedupe_mask<'a>(keys: impl Iterator<Item = (&'a str, u32, &'a str)>) -> Vec<bool> {
    // last kept (possession, player) per fixture
    let mut last: HashMap<&str, (u32, &str)> = HashMap::new();
    keys.map(|(fixture, pos, player)| {
        let dup = matches!(last.get(fixture), Some(&(p, pl)) if p == pos && pl == player);
        if !dup {
            last.insert(fixture, (pos, player));
        }
        !dup
    })
    .collect()
}

/// Splits events into possessions and labels every action with its
/// possession's terminal outcome.
pub fn segment_possessions(events: &[RawEvent]) -> Result<Vec<Action>> {
    let nums = possession_numbers(events);
    let mut groups: HashMap<(&str, u32), Vec<usize>> = HashMap::new();
    for (i, (e, &n)) in events.iter().zip(&nums).enumerate() {
        groups
            .entry((e.fixture_id.as_str(), n))
            .or_default()
            .push(i);
    }
    let mut labels: HashMap<(&str, u32), Outcome> = HashMap::with_capacity(groups.len());
    for (&key, idx) in &groups {
        let members: Vec<&RawEvent> = idx.iter().map(|&i| &events[i]).collect();
        let outcome = label_possession(&members).map_err(|message| Error::ConflictingOutcome {
            fixture: key.0.to_string(),
            possession: key.1,
            message,
        })?;
        labels.insert(key, outcome);
    }
    Ok(events
        .iter()
        .zip(&nums)
        .map(|(e, &n)| Action {
            fixture_id: e.fixture_id.clone(),
            attacking_team: e.attacking_team.clone(),
            defending_team: e.defending_team.clone(),
            player_id: e.player_id.clone(),
            x: e.x,
            y: e.y,
            possession_num: n,
            outcome: labels[&(e.fixture_id.as_str(), n)],
        })
        .collect())
}

fn label_possession(events: &[&RawEvent]) -> std::result::Result<Outcome, String> {
    let tries = events.iter().filter(|e| e.is_try()).count();
    if tries > 1 {
        return Err(format!("{tries} tries in one possession"));
    }
    let try_scored = tries == 1;
    let last = events.last().expect("non-empty possession");
    for e in &events[..events.len() - 1] {
        if e.is_goal_kick() {
            return Err(format!("goal kick at line {} is not terminal", e.line));
        }
    }
    if !last.is_goal_kick() {
        return Ok(if try_scored {
            Outcome::UnconvertedTry
        } else {
            Outcome::NoPoints
        });
    }
    let kick = last.goal_kick().ok_or_else(|| {
        format!(
            "unrecognised goal-kick action {:?} at line {}",
            last.action, last.line
        )
    })?;
    match (kick, try_scored, last.completed) {
        (GoalKick::Conversion, true, true) => Ok(Outcome::ConvertedTry),
        (GoalKick::Conversion, true, false) => Ok(Outcome::UnconvertedTry),
        (GoalKick::Conversion, false, _) => Err("conversion without a try".into()),
        (_, true, _) => Err("try followed by a non-conversion goal kick".into()),
        (GoalKick::PenaltyGoal, false, true) => Ok(Outcome::PenaltyGoal),
        (GoalKick::FieldGoal, false, true) => Ok(Outcome::DropGoal),
        (_, false, false) => Ok(Outcome::NoPoints),
    }
}

/// Full preprocessing: clamp, filter, segment, then de-duplicate locations
/// within each labelled possession.
pub fn preprocess(events: &[RawEvent]) -> Result<(Vec<Action>, IngestReport)> {
    let mut events = events.to_vec();
    let clamped = clamp_locations(&mut events);
    let filtered = filter_categories(&events)?;
    let labelled = segment_possessions(&filtered)?;
    let actions = dedupe_actions(&labelled);

    let mut report = IngestReport {
        rows_read: events.len(),
        rows_kept: actions.len(),
        dedupe_drops: labelled.len() - actions.len(),
        clamped_locations: clamped,
        ..IngestReport::default()
    };
    report.count_possessions(&actions);
    Ok((actions, report))
}

/// Checks that every (fixture, possession) group carries one team pair and
/// one outcome.
pub fn validate_actions(actions: &[Action]) -> Result<()> {
    let mut groups: HashMap<(&str, u32), &Action> = HashMap::new();
    for a in actions {
        if a.possession_num == 0 {
            return Err(Error::ConflictingOutcome {
                fixture: a.fixture_id.clone(),
                possession: 0,
                message: "possession numbers start at 1".into(),
            });
        }
        let first = *groups.entry((&a.fixture_id, a.possession_num)).or_insert(a);
        if first.outcome != a.outcome || first.attacking_team != a.attacking_team {
            return Err(Error::ConflictingOutcome {
                fixture: a.fixture_id.clone(),
                possession: a.possession_num,
                message: "actions disagree on outcome or attacking team".into(),
            });
        }
    }
    Ok(())
}

/// One league subset plus attack and defence subsets per team, in team order.
pub fn partition(actions: &[Action], teams: &[String]) -> Result<Vec<DataSubset>> {
    for a in actions {
        for t in [&a.attacking_team, &a.defending_team] {
            if !teams.contains(t) {
                return Err(Error::UnknownTeam(t.clone()));
            }
        }
    }
    let mut out = Vec::with_capacity(2 * teams.len() + 1);
    out.push(DataSubset {
        label: SubsetLabel::WholeLeague,
        actions: actions.to_vec(),
    });
    for t in teams {
        for label in [
            SubsetLabel::TeamAttack(t.clone()),
            SubsetLabel::TeamDefence(t.clone()),
        ] {
            out.push(subset(actions, label));
        }
    }
    Ok(out)
}

pub fn subset(actions: &[Action], label: SubsetLabel) -> DataSubset {
    let actions = actions
        .iter()
        .filter(|a| label.contains(a))
        .cloned()
        .collect();
    DataSubset { label, actions }
}

/// Teams appearing in the data, sorted.
pub fn teams(actions: &[Action]) -> Vec<String> {
    let set: BTreeSet<&String> = actions
        .iter()
        .flat_map(|a| [&a.attacking_team, &a.defending_team])
        .collect();
    set.into_iter().cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn ev(player: &str, category: &str, action: &str, x: f64, y: f64) -> RawEvent {
        RawEvent {
            fixture_id: "F1".into(),
            attacking_team: "St Helens".into(),
            defending_team: "Salford".into(),
            player_id: player.into(),
            category: category.into(),
            action: action.into(),
            x,
            y,
            completed: true,
            ended_possession: false,
            sequence_index: 0,
            line: 0,
        }
    }

    fn seq(mut events: Vec<RawEvent>) -> Vec<RawEvent> {
        for (i, e) in events.iter_mut().enumerate() {
            e.sequence_index = i as u64;
            e.line = i + 2;
        }
        events
    }

    #[test]
    fn tackle_is_removed() {
        let out = filter_categories(&[ev("1", "Tackle", "Made", 1.0, 1.0)]).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn incomplete_kept_only_when_possession_ends() {
        let mut e = ev("1", "Move Team", "Incomplete", 1.0, 1.0);
        e.completed = false;
        e.ended_possession = true;
        assert_eq!(filter_categories(&[e.clone()]).unwrap().len(), 1);
        e.ended_possession = false;
        assert!(filter_categories(&[e]).unwrap().is_empty());
    }

    #[test]
    fn empty_filter() {
        assert!(filter_categories(&[]).unwrap().is_empty());
    }

    #[test]
    fn unknown_category_names_value_and_line() {
        let mut e = ev("1", "Tackles", "Made", 1.0, 1.0);
        e.line = 17;
        match filter_categories(&[e]) {
            Err(Error::UnknownCategory { value, line }) => {
                assert_eq!(value, "Tackles");
                assert_eq!(line, 17);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn filter_preserves_order() {
        let events = seq(vec![
            ev("a", "Move Self", "Run", 1.0, 1.0),
            ev("b", "Tackle", "Made", 1.0, 1.0),
            ev("c", "Move Team", "Complete", 1.0, 1.0),
            ev("d", "Catch Kick", "Kick Receipt", 1.0, 1.0),
        ]);
        let out = filter_categories(&events).unwrap();
        let ids: Vec<&str> = out.iter().map(|e| e.player_id.as_str()).collect();
        assert_eq!(ids, ["a", "c", "d"]);
    }

    #[test]
    fn duplicate_location_collapses() {
        let events = seq(vec![
            ev("p1", "Catch Kick", "Kick Receipt", 9.0, 4.0),
            ev("p1", "Move Self", "Run", 9.0, 4.0),
        ]);
        let out = dedupe_locations(&events);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0], events[0]);
    }

    #[test]
    fn interleaved_players_unchanged() {
        let events = seq(vec![
            ev("p1", "Move Self", "Run", 1.0, 1.0),
            ev("p2", "Move Self", "Run", 2.0, 2.0),
            ev("p1", "Move Self", "Run", 3.0, 3.0),
        ]);
        assert_eq!(dedupe_locations(&events), events);
    }

    #[test]
    fn triple_collapses_to_first() {
        let events = seq(vec![
            ev("p1", "Move Self", "Run", 1.0, 1.0),
            ev("p1", "Move Self", "Run", 2.0, 2.0),
            ev("p1", "Move Self", "Run", 3.0, 3.0),
        ]);
        assert_eq!(dedupe_locations(&events), vec![events[0].clone()]);
    }

    #[test]
    fn dedupe_respects_possession_boundary() {
        let mut first = ev("p1", "Move Team", "Incomplete", 1.0, 1.0);
        first.completed = false;
        first.ended_possession = true;
        let events = seq(vec![first, ev("p1", "Move Self", "Run", 2.0, 2.0)]);
        assert_eq!(dedupe_locations(&events).len(), 2);
    }

    #[test]
    fn closing_duplicate_is_kept() {
        let mut closing = ev("p1", "Move Team", "Incomplete", 1.0, 1.0);
        closing.completed = false;
        closing.ended_possession = true;
        let events = seq(vec![
            ev("p1", "Move Self", "Run", 1.0, 1.0),
            closing,
            ev("p1", "Move Self", "Run", 2.0, 2.0),
        ]);
        let once = dedupe_locations(&events);
        assert_eq!(once, events);
        assert_eq!(dedupe_locations(&once), once);
    }

    fn saints_set() -> Vec<RawEvent> {
        let rows = [
            ("3107", 9.0, 4.0),
            ("21716", 9.0, 6.0),
            ("1983", 14.0, 11.0),
            ("2904", 22.0, 13.0),
            ("11439", 12.0, 12.0),
            ("21795", 37.0, 16.0),
            ("20567", 36.0, 24.0),
            ("2904", 54.0, 35.0),
        ];
        let mut events: Vec<RawEvent> = rows
            .iter()
            .map(|&(p, x, y)| ev(p, "Move Team", "Complete", x, y))
            .collect();
        let last = events.last_mut().unwrap();
        last.category = "Kick Position".into();
        last.action = "Long - To Opposition".into();
        last.ended_possession = true;
        seq(events)
    }

    #[test]
    fn handover_possession_is_no_points() {
        let actions = segment_possessions(&saints_set()).unwrap();
        assert_eq!(actions.len(), 8);
        assert!(actions
            .iter()
            .all(|a| a.possession_num == 1 && a.outcome == Outcome::NoPoints));
    }

    #[test]
    fn penalty_goal_labels_whole_possession() {
        let mut kick = ev("k", "Kick Goal", "Penalty Goal", 35.0, 70.0);
        kick.ended_possession = true;
        let events = seq(vec![ev("a", "Move Self", "Run", 30.0, 60.0), kick]);
        let actions = segment_possessions(&events).unwrap();
        assert!(actions.iter().all(|a| a.outcome == Outcome::PenaltyGoal));
    }

    #[test]
    fn two_possessions_numbered() {
        let mut events = saints_set();
        events.extend(saints_set());
        let events = seq(events);
        let actions = segment_possessions(&events).unwrap();
        assert!(actions[..8].iter().all(|a| a.possession_num == 1));
        assert!(actions[8..].iter().all(|a| a.possession_num == 2));
    }

    #[test]
    fn try_and_conversion_share_possession() {
        let mut t = ev("a", "Move Team", "Try", 20.0, 105.0);
        t.ended_possession = true;
        let mut conv = ev("k", "Kick Goal", "Conversion", 20.0, 80.0);
        conv.ended_possession = true;
        let events = seq(vec![
            ev("b", "Move Self", "Run", 20.0, 90.0),
            t.clone(),
            conv.clone(),
        ]);
        let actions = segment_possessions(&events).unwrap();
        assert!(actions.iter().all(|a| a.outcome == Outcome::ConvertedTry));
        assert!(actions.iter().all(|a| a.possession_num == 1));

        conv.completed = false;
        let events = seq(vec![t, conv]);
        let actions = segment_possessions(&events).unwrap();
        assert!(actions.iter().all(|a| a.outcome == Outcome::UnconvertedTry));
    }

    #[test]
    fn failed_kicks_are_no_points() {
        for action in ["Penalty Goal", "Field Goal"] {
            let mut kick = ev("k", "Kick Goal", action, 35.0, 70.0);
            kick.completed = false;
            kick.ended_possession = true;
            let actions = segment_possessions(&seq(vec![kick])).unwrap();
            assert_eq!(actions[0].outcome, Outcome::NoPoints);
        }
        let mut kick = ev("k", "Kick Goal", "Field Goal", 35.0, 70.0);
        kick.ended_possession = true;
        let actions = segment_possessions(&seq(vec![kick])).unwrap();
        assert_eq!(actions[0].outcome, Outcome::DropGoal);
    }

    #[test]
    fn conversion_without_try_is_a_data_error() {
        let conv = ev("k", "Kick Goal", "Conversion", 20.0, 80.0);
        let err = segment_possessions(&seq(vec![ev("a", "Move Self", "Run", 1.0, 1.0), conv]))
            .unwrap_err();
        match err {
            Error::ConflictingOutcome {
                fixture,
                possession,
                ..
            } => {
                assert_eq!(fixture, "F1");
                assert_eq!(possession, 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn team_change_opens_possession() {
        let mut other = ev("z", "Move Self", "Run", 1.0, 1.0);
        other.attacking_team = "Salford".into();
        other.defending_team = "St Helens".into();
        let events = seq(vec![ev("a", "Move Self", "Run", 1.0, 1.0), other]);
        let actions = segment_possessions(&events).unwrap();
        assert_eq!(actions[1].possession_num, 2);
    }

    #[test]
    fn interleaved_fixtures_numbered_independently() {
        let mut g = ev("g", "Move Self", "Run", 1.0, 1.0);
        g.fixture_id = "F2".into();
        let events = seq(vec![
            ev("a", "Move Self", "Run", 1.0, 1.0),
            g,
            ev("b", "Move Self", "Run", 1.0, 1.0),
        ]);
        let actions = segment_possessions(&events).unwrap();
        assert!(actions.iter().all(|a| a.possession_num == 1));
    }

    #[test]
    fn preprocess_report() {
        let mut events = saints_set();
        events.insert(1, ev("9", "Tackle", "Made", 9.0, 4.0));
        events.insert(1, ev("3107", "Move Self", "Run", 9.0, 4.0));
        events[0].x = -3.0;
        let events = seq(events);
        let (actions, report) = preprocess(&events).unwrap();
        assert_eq!(actions.len(), 8);
        assert_eq!(actions[0].x, 0.0);
        assert_eq!(
            report,
            IngestReport {
                rows_read: 10,
                rows_kept: 8,
                dedupe_drops: 1,
                clamped_locations: 1,
                possessions: 1,
                outcome_counts: OutcomeCounts {
                    no_points: 1,
                    ..OutcomeCounts::default()
                },
            }
        );
    }

    #[test]
    fn deduped_terminal_kick_keeps_label() {
        // same player scores the try and takes the conversion
        let t = ev("a", "Move Team", "Try", 20.0, 105.0);
        let mut conv = ev("a", "Kick Goal", "Conversion", 20.0, 80.0);
        conv.ended_possession = true;
        let (actions, _) = preprocess(&seq(vec![t, conv])).unwrap();
        assert_eq!(actions.len(), 1);
        assert_eq!(actions[0].outcome, Outcome::ConvertedTry);
    }

    fn action(att: &str, def: &str) -> Action {
        Action {
            fixture_id: "F".into(),
            attacking_team: att.into(),
            defending_team: def.into(),
            player_id: "p".into(),
            x: 1.0,
            y: 1.0,
            possession_num: 1,
            outcome: Outcome::NoPoints,
        }
    }

    #[test]
    fn partition_sizes() {
        let teams: Vec<String> = (0..12).map(|i| format!("T{i}")).collect();
        let actions: Vec<Action> = (0..120)
            .map(|i| action(&teams[i % 12], &teams[(i + 1) % 12]))
            .collect();
        let subsets = partition(&actions, &teams).unwrap();
        assert_eq!(subsets.len(), 25);
        assert_eq!(subsets[0].actions.len(), 120);
        let attack: usize = subsets[1..]
            .iter()
            .step_by(2)
            .map(|s| s.actions.len())
            .sum();
        let defence: usize = subsets[2..]
            .iter()
            .step_by(2)
            .map(|s| s.actions.len())
            .sum();
        assert_eq!((attack, defence), (120, 120));
    }

    #[test]
    fn single_team_league() {
        let teams = vec!["A".to_string()];
        let subsets = partition(&[action("A", "A")], &teams).unwrap();
        assert_eq!(subsets.len(), 3);
    }

    #[test]
    fn unknown_team_rejected() {
        let err = partition(&[action("A", "B")], &["A".to_string()]).unwrap_err();
        assert!(matches!(err, Error::UnknownTeam(t) if t == "B"));
    }

    #[test]
    fn subset_label_parsing() {
        assert_eq!(
            SubsetLabel::parse("league").unwrap(),
            SubsetLabel::WholeLeague
        );
        assert_eq!(
            SubsetLabel::parse("St Helens:attack").unwrap(),
            SubsetLabel::TeamAttack("St Helens".into())
        );
        assert_eq!(
            SubsetLabel::parse("Wigan:defence").unwrap(),
            SubsetLabel::TeamDefence("Wigan".into())
        );
        assert!(SubsetLabel::parse("Wigan").is_err());
    }
}
