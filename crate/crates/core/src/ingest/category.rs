use std::fmt;

/// Preprocessing categories that raw event actions are grouped into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Category {
    AuxiliaryInformation,
    GenericDescriptor,
    RestartActions,
    MoveSelf,
    MoveTeam,
    KickGoal,
    KickPosition,
    CatchPass,
    CatchKick,
    LooseBall,
    Tackle,
    MissedTackle,
    RunAction,
    PlayTheBall,
    AttackingDescriptor,
    DefensiveDescriptor,
    MoveSelfError,
    MoveTeamError,
    CatchError,
    PenaltyConceded,
    DefensivePlay,
    OffTheBall,
}

impl Category {
    pub const ALL: [Category; 22] = [
        Category::AuxiliaryInformation,
        Category::GenericDescriptor,
        Category::RestartActions,
        Category::MoveSelf,
        Category::MoveTeam,
        Category::KickGoal,
        Category::KickPosition,
        Category::CatchPass,
        Category::CatchKick,
        Category::LooseBall,
        Category::Tackle,
        Category::MissedTackle,
        Category::RunAction,
        Category::PlayTheBall,
        Category::AttackingDescriptor,
        Category::DefensiveDescriptor,
        Category::MoveSelfError,
        Category::MoveTeamError,
        Category::CatchError,
        Category::PenaltyConceded,
        Category::DefensivePlay,
        Category::OffTheBall,
    ];

    pub const fn name(self) -> &'static str {
        match self {
            Category::AuxiliaryInformation => "Auxiliary Information",
            Category::GenericDescriptor => "Generic Descriptor",
            Category::RestartActions => "Restart Actions",
            Category::MoveSelf => "Move Self",
            Category::MoveTeam => "Move Team",
            Category::KickGoal => "Kick Goal",
            Category::KickPosition => "Kick Position",
            Category::CatchPass => "Catch Pass",
            Category::CatchKick => "Catch Kick",
            Category::LooseBall => "Loose Ball",
            Category::Tackle => "Tackle",
            Category::MissedTackle => "Missed Tackle",
            Category::RunAction => "Run Action",
            Category::PlayTheBall => "Play-The-Ball",
            Category::AttackingDescriptor => "Attacking Descriptor",
            Category::DefensiveDescriptor => "Defensive Descriptor",
            Category::MoveSelfError => "Move Self Error",
            Category::MoveTeamError => "Move Team Error",
            Category::CatchError => "Catch Error",
            Category::PenaltyConceded => "Penalty Conceded",
            Category::DefensivePlay => "Defensive Play",
            Category::OffTheBall => "Off The Ball",
        }
    }

    /// Exact match after trimming whitespace and folding case.
    pub fn parse(s: &str) -> Option<Category> {
        let s = s.trim();
        Category::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
    }

    /// Categories whose actions locate the ball for the attacking team.
    pub const fn is_kept(self) -> bool {
        matches!(
            self,
            Category::MoveTeam
                | Category::MoveSelf
                | Category::CatchKick
                | Category::KickPosition
                | Category::MoveTeamError
                | Category::MoveSelfError
                | Category::LooseBall
                | Category::KickGoal
        )
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Goal-kick attempt type within the Kick Goal category.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GoalKick {
    Conversion,
    PenaltyGoal,
    FieldGoal,
}

impl GoalKick {
    pub fn parse(action: &str) -> Option<GoalKick> {
        let a = action.trim();
        if a.eq_ignore_ascii_case("Conversion") {
            Some(GoalKick::Conversion)
        } else if a.eq_ignore_ascii_case("Penalty Goal") {
            Some(GoalKick::PenaltyGoal)
        } else if a.eq_ignore_ascii_case("Field Goal") {
            Some(GoalKick::FieldGoal)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_is_trimmed_and_case_folded() {
        assert_eq!(Category::parse("  move team "), Some(Category::MoveTeam));
        assert_eq!(
            Category::parse("PLAY-THE-BALL"),
            Some(Category::PlayTheBall)
        );
        assert_eq!(Category::parse("Move  Team"), None);
        assert_eq!(Category::parse("Tackles"), None);
    }

    #[test]
    fn eight_kept_categories() {
        assert_eq!(Category::ALL.iter().filter(|c| c.is_kept()).count(), 8);
        assert!(!Category::Tackle.is_kept());
        assert!(!Category::CatchPass.is_kept());
        assert!(!Category::RunAction.is_kept());
    }

    #[test]
    fn names_round_trip() {
        for c in Category::ALL {
            assert_eq!(Category::parse(c.name()), Some(c));
        }
    }
}
