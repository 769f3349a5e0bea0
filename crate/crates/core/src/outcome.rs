use std::fmt;

use serde::{Deserialize, Serialize};

pub const NUM_OUTCOMES: usize = 5;

/// Terminal outcome of a possession. The discriminant is the PosCat code used
/// in action CSVs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[repr(u8)]
pub enum Outcome {
    NoPoints = 0,
    DropGoal = 1,
    PenaltyGoal = 2,
    UnconvertedTry = 3,
    ConvertedTry = 4,
}

impl Outcome {
    pub const ALL: [Outcome; NUM_OUTCOMES] = [
        Outcome::NoPoints,
        Outcome::DropGoal,
        Outcome::PenaltyGoal,
        Outcome::UnconvertedTry,
        Outcome::ConvertedTry,
    ];

    /// Points scored by the possession.
    pub const fn points(self) -> f64 {
        match self {
            Outcome::NoPoints => 0.0,
            Outcome::DropGoal => 1.0,
            Outcome::PenaltyGoal => 2.0,
            Outcome::UnconvertedTry => 4.0,
            Outcome::ConvertedTry => 6.0,
        }
    }

    pub const fn index(self) -> usize {
        self as usize
    }

    pub fn from_code(code: u8) -> Option<Outcome> {
        Outcome::ALL.get(code as usize).copied()
    }

    /// Column-name stem used in grid and summary exports.
    pub const fn short_name(self) -> &'static str {
        match self {
            Outcome::NoPoints => "no",
            Outcome::DropGoal => "drop",
            Outcome::PenaltyGoal => "pen",
            Outcome::UnconvertedTry => "u4",
            Outcome::ConvertedTry => "c6",
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            Outcome::NoPoints => "no_points",
            Outcome::DropGoal => "drop_goal",
            Outcome::PenaltyGoal => "penalty_goal",
            Outcome::UnconvertedTry => "unconverted_try",
            Outcome::ConvertedTry => "converted_try",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Points for each outcome in index order.
pub const POINTS: [f64; NUM_OUTCOMES] = [0.0, 1.0, 2.0, 4.0, 6.0];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_table() {
        let pts: Vec<f64> = Outcome::ALL.iter().map(|o| o.points()).collect();
        assert_eq!(pts, vec![0.0, 1.0, 2.0, 4.0, 6.0]);
        assert_eq!(pts, POINTS.to_vec());
    }

    #[test]
    fn codes_round_trip() {
        for o in Outcome::ALL {
            assert_eq!(Outcome::from_code(o as u8), Some(o));
        }
        assert_eq!(Outcome::from_code(5), None);
    }
}
