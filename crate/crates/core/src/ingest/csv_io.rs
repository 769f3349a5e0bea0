use std::collections::HashMap;
use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::fmt;
use crate::outcome::Outcome;

use super::{validate_actions, Action, RawEvent};

/// Lower-cases and strips spaces, underscores and hyphens so that both
/// `player_id` and `Player ID` address the same column.
fn normalise(h: &str) -> String {
    h.chars()
        .filter(|c| !matches!(c, ' ' | '_' | '-'))
        .flat_map(char::to_lowercase)
        .collect()
}

struct Columns {
    index: HashMap<String, usize>,
}

impl Columns {
    fn new(headers: &csv::StringRecord) -> Self {
        let index = headers
            .iter()
            .enumerate()
            .map(|(i, h)| (normalise(h), i))
            .collect();
        Columns { index }
    }

    fn require(&self, name: &str) -> Result<usize> {
        self.index
            .get(&normalise(name))
            .copied()
            .ok_or_else(|| Error::Parse {
                line: 1,
                message: format!("missing required column {name:?}"),
            })
    }

    fn optional(&self, name: &str) -> Option<usize> {
        self.index.get(&normalise(name)).copied()
    }
}

fn field<'r>(rec: &'r csv::StringRecord, col: usize, line: usize, name: &str) -> Result<&'r str> {
    rec.get(col).map(str::trim).ok_or_else(|| Error::Parse {
        line,
        message: format!("missing value for {name}"),
    })
}

fn number(rec: &csv::StringRecord, col: usize, line: usize, name: &str) -> Result<f64> {
    let s = field(rec, col, line, name)?;
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Parse {
            line,
            message: format!("{name}: expected a number, got {s:?}"),
        })
}

fn boolean(rec: &csv::StringRecord, col: usize, line: usize, name: &str) -> Result<bool> {
    let s = field(rec, col, line, name)?;
    match s.to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" | "y" | "t" => Ok(true),
        "false" | "0" | "no" | "n" | "f" => Ok(false),
        _ => Err(Error::Parse {
            line,
            message: format!("{name}: expected a boolean, got {s:?}"),
        }),
    }
}

fn line_of(rec: &csv::StringRecord) -> usize {
    rec.position().map_or(0, |p| p.line() as usize)
}

/// Reads raw events. `sequence_index` is optional; without it, row order
/// within a fixture is used. Events are returned grouped by fixture (in
/// order of first appearance) and ordered by sequence index.
pub fn read_raw_events<R: Read>(r: R) -> Result<Vec<RawEvent>> {
    let mut rdr = csv::ReaderBuilder::new().flexible(false).from_reader(r);
    let cols = Columns::new(rdr.headers()?);
    let c_fixture = cols.require("fixture_id")?;
    let c_att = cols.require("attacking_team")?;
    let c_def = cols.require("defending_team")?;
    let c_player = cols.require("player_id")?;
    let c_cat = cols.require("category")?;
    let c_action = cols.require("action")?;
    let c_x = cols.require("x")?;
    let c_y = cols.require("y")?;
    let c_completed = cols.require("completed")?;
    let c_ended = cols.require("ended_possession")?;
    let c_seq = cols.optional("sequence_index");

    let mut events = Vec::new();
    let mut rows_in_fixture: HashMap<String, u64> = HashMap::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::Parse {
                line,
                message: e.to_string(),
            }
        })?;
        let line = line_of(&rec);
        let fixture_id = field(&rec, c_fixture, line, "fixture_id")?.to_string();
        let row = rows_in_fixture.entry(fixture_id.clone()).or_insert(0);
        let sequence_index = match c_seq {
            Some(c) => {
                let s = field(&rec, c, line, "sequence_index")?;
                s.parse::<u64>().map_err(|_| Error::Parse {
                    line,
                    message: format!("sequence_index: expected an integer, got {s:?}"),
                })?
            }
            None => *row,
        };
        *row += 1;
        events.push(RawEvent {
            fixture_id,
            attacking_team: field(&rec, c_att, line, "attacking_team")?.to_string(),
            defending_team: field(&rec, c_def, line, "defending_team")?.to_string(),
            player_id: field(&rec, c_player, line, "player_id")?.to_string(),
            category: field(&rec, c_cat, line, "category")?.to_string(),
            action: field(&rec, c_action, line, "action")?.to_string(),
            x: number(&rec, c_x, line, "x")?,
            y: number(&rec, c_y, line, "y")?,
            completed: boolean(&rec, c_completed, line, "completed")?,
            ended_possession: boolean(&rec, c_ended, line, "ended_possession")?,
            sequence_index,
            line,
        });
    }
    order_by_sequence(events)
}

fn order_by_sequence(events: Vec<RawEvent>) -> Result<Vec<RawEvent>> {
    let mut fixture_rank: HashMap<String, usize> = HashMap::new();
    for e in &events {
        let n = fixture_rank.len();
        fixture_rank.entry(e.fixture_id.clone()).or_insert(n);
    }
    let mut events = events;
    events.sort_by_key(|e| (fixture_rank[&e.fixture_id], e.sequence_index));
    for w in events.windows(2) {
        if w[0].fixture_id == w[1].fixture_id && w[0].sequence_index == w[1].sequence_index {
            return Err(Error::Parse {
                line: w[1].line,
                message: format!(
                    "duplicate sequence_index {} in fixture {}",
                    w[1].sequence_index, w[1].fixture_id
                ),
            });
        }
    }
    Ok(events)
}

pub fn write_raw_events<W: Write>(w: W, events: &[RawEvent]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "fixture_id",
        "attacking_team",
        "defending_team",
        "player_id",
        "category",
        "action",
        "x",
        "y",
        "completed",
        "ended_possession",
        "sequence_index",
    ])?;
    for e in events {
        out.write_record([
            e.fixture_id.as_str(),
            &e.attacking_team,
            &e.defending_team,
            &e.player_id,
            &e.category,
            &e.action,
            &fmt::sig(e.x, 9),
            &fmt::sig(e.y, 9),
            if e.completed { "true" } else { "false" },
            if e.ended_possession { "true" } else { "false" },
            &e.sequence_index.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Reads pre-segmented actions (`player_id, x, y, pos_num, pos_cat` plus
/// team columns). `fixture_id` defaults to `"0"` when absent.
pub fn read_actions<R: Read>(r: R) -> Result<Vec<Action>> {
    let mut rdr = csv::Reader::from_reader(r);
    let cols = Columns::new(rdr.headers()?);
    let c_fixture = cols.optional("fixture_id");
    let c_att = cols.require("attacking_team")?;
    let c_def = cols.require("defending_team")?;
    let c_player = cols.require("player_id")?;
    let c_x = cols.require("x")?;
    let c_y = cols.require("y")?;
    let c_num = cols.require("pos_num")?;
    let c_cat = cols.require("pos_cat")?;

    let mut actions = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = line_of(&rec);
        let num = field(&rec, c_num, line, "pos_num")?;
        let possession_num =
            num.parse::<u32>()
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| Error::Parse {
                    line,
                    message: format!("pos_num: expected an integer >= 1, got {num:?}"),
                })?;
        let cat = field(&rec, c_cat, line, "pos_cat")?;
        let outcome = cat
            .parse::<u8>()
            .ok()
            .and_then(Outcome::from_code)
            .ok_or_else(|| Error::Parse {
                line,
                message: format!("pos_cat: expected 0..=4, got {cat:?}"),
            })?;
        let fixture_id = match c_fixture {
            Some(c) => field(&rec, c, line, "fixture_id")?.to_string(),
            None => "0".to_string(),
        };
        actions.push(Action {
            fixture_id,
            attacking_team: field(&rec, c_att, line, "attacking_team")?.to_string(),
            defending_team: field(&rec, c_def, line, "defending_team")?.to_string(),
            player_id: field(&rec, c_player, line, "player_id")?.to_string(),
            x: number(&rec, c_x, line, "x")?,
            y: number(&rec, c_y, line, "y")?,
            possession_num,
            outcome,
        });
    }
    validate_actions(&actions)?;
    Ok(actions)
}

pub fn write_actions<W: Write>(w: W, actions: &[Action]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "fixture_id",
        "attacking_team",
        "defending_team",
        "player_id",
        "x",
        "y",
        "pos_num",
        "pos_cat",
    ])?;
    for a in actions {
        out.write_record([
            a.fixture_id.as_str(),
            &a.attacking_team,
            &a.defending_team,
            &a.player_id,
            &fmt::sig(a.x, 9),
            &fmt::sig(a.y, 9),
            &a.possession_num.to_string(),
            &(a.outcome as u8).to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAINTS_SET: &str = "\
fixture_id,attacking_team,defending_team,player_id,x,y,pos_num,pos_cat
1,St Helens,Salford,3107,9,4,1,0
1,St Helens,Salford,21716,9,6,1,0
1,St Helens,Salford,1983,14,11,1,0
1,St Helens,Salford,2904,22,13,1,0
1,St Helens,Salford,11439,12,12,1,0
1,St Helens,Salford,21795,37,16,1,0
1,St Helens,Salford,20567,36,24,1,0
1,St Helens,Salford,2904,54,35,1,0
";

    #[test]
    fn segmented_sample_round_trip() {
        let actions = read_actions(SAINTS_SET.as_bytes()).unwrap();
        assert_eq!(actions.len(), 8);
        let mut out = Vec::new();
        write_actions(&mut out, &actions).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), SAINTS_SET);
    }

    #[test]
    fn alternate_headers_accepted() {
        let text = "Attacking Team,Defending Team,Player ID,x,y,PosNum,PosCat\n\
                    St Helens,Salford,3107,9,4,1,0\n";
        let actions = read_actions(text.as_bytes()).unwrap();
        assert_eq!(actions[0].player_id, "3107");
        assert_eq!(actions[0].fixture_id, "0");
    }

    #[test]
    fn bad_pos_cat_reports_line() {
        let text = "fixture_id,attacking_team,defending_team,player_id,x,y,pos_num,pos_cat\n\
                    1,A,B,p,1,1,1,0\n\
                    1,A,B,p,1,1,1,7\n";
        match read_actions(text.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn mixed_outcomes_rejected() {
        let text = "fixture_id,attacking_team,defending_team,player_id,x,y,pos_num,pos_cat\n\
                    1,A,B,p,1,1,1,0\n\
                    1,A,B,q,1,1,1,4\n";
        assert!(matches!(
            read_actions(text.as_bytes()),
            Err(Error::ConflictingOutcome { .. })
        ));
    }

    #[test]
    fn raw_events_ordered_and_validated() {
        let text = "fixture_id,attacking_team,defending_team,player_id,category,action,x,y,completed,ended_possession,sequence_index\n\
                    F,A,B,p,Move Self,Run,1,2,true,false,5\n\
                    F,A,B,q,Move Self,Run,3,4,1,0,2\n";
        let events = read_raw_events(text.as_bytes()).unwrap();
        assert_eq!(events[0].player_id, "q");
        assert_eq!(events[0].line, 3);
        let dup = text.replace(",2\n", ",5\n");
        assert!(matches!(
            read_raw_events(dup.as_bytes()),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn raw_events_malformed_number() {
        let text = "fixture_id,attacking_team,defending_team,player_id,category,action,x,y,completed,ended_possession\n\
                    F,A,B,p,Move Self,Run,abc,2,true,false\n";
        match read_raw_events(text.as_bytes()) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 2);
                assert!(message.contains('x'));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_column() {
        let text = "fixture_id,attacking_team\nF,A\n";
        assert!(matches!(
            read_raw_events(text.as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
