use crate::error::{Error, Result};

/// Single round-robin fixture list: `L - 1` weeks of `L / 2` matches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeagueSchedule {
    teams: usize,
    weeks: Vec<Vec<(usize, usize)>>,
}

impl LeagueSchedule {
    pub fn teams(&self) -> usize {
        self.teams
    }

    pub fn num_weeks(&self) -> usize {
        self.weeks.len()
    }

    pub fn weeks(&self) -> &[Vec<(usize, usize)>] {
        &self.weeks
    }

    /// Fixtures of week `w`, wrapping around for repeated seasons.
    pub fn week(&self, w: usize) -> &[(usize, usize)] {
        &self.weeks[w % self.weeks.len()]
    }

    /// Opponent table for week `w`: `opponents[i]` is who team `i` plays.
    pub fn opponents(&self, w: usize) -> Vec<usize> {
        let mut opp = vec![0; self.teams];
        for &(a, b) in self.week(w) {
            opp[a] = b;
            opp[b] = a;
        }
        opp
    }
}

/// Builds the fixture list with the circle method.
///
/// Team `L - 1` stays fixed while the others rotate one slot per week.
pub fn generate_league_schedule(teams: usize) -> Result<LeagueSchedule> {
    if teams < 2 || !teams.is_multiple_of(2) {
        return Err(Error::param(format!(
            "league size must be even and >= 2, got {teams}"
        )));
    }
    let ring = teams - 1;
    let weeks = (0..ring)
        .map(|w| {
            let mut matches = Vec::with_capacity(teams / 2);
            matches.push((w, ring));
            for k in 1..teams / 2 {
                let a = (w + k) % ring;
                let b = (w + ring - k) % ring;
                matches.push((a, b));
            }
            matches
        })
        .collect();
    Ok(LeagueSchedule { teams, weeks })
}
