use rand::Rng;

use crate::error::{Error, Result};

/// Probability that a team of fitness `f_i` beats one of fitness `f_j`.
///
/// Odds are linear in the distance to the ideal value `f_ideal`
/// (minimization): `p_i = (f_j - f_ideal) / (f_i + f_j - 2 f_ideal)`.
/// Equal teams sitting exactly at the ideal value get 0.5.
pub fn win_probability(f_i: f64, f_j: f64, f_ideal: f64) -> Result<f64> {
    if f_i.is_nan() || f_j.is_nan() || f_ideal.is_nan() {
        return Err(Error::param("fitness values must not be NaN"));
    }
    if f_ideal > f_i.min(f_j) {
        return Err(Error::param(format!(
            "ideal fitness {f_ideal} exceeds min({f_i}, {f_j})"
        )));
    }
    if f_i == f_j {
        return Ok(0.5);
    }
    // Unbounded fitness: the finite side always wins.
    if f_j == f64::INFINITY {
        return Ok(1.0);
    }
    if f_i == f64::INFINITY {
        return Ok(0.0);
    }
    let gap_i = f_i - f_ideal;
    let gap_j = f_j - f_ideal;
    let denom = gap_i + gap_j;
    if denom == 0.0 {
        return Ok(0.5);
    }
    Ok((gap_j / denom).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchResult {
    pub opponent: usize,
    pub won: bool,
}

/// Results of one league week, indexed by team.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeekOutcome {
    pub week_index: usize,
    pub results: Vec<MatchResult>,
}

impl WeekOutcome {
    pub fn won(&self, team: usize) -> bool {
        self.results[team].won
    }

    pub fn opponent(&self, team: usize) -> usize {
        self.results[team].opponent
    }
}

/// Plays every match of one week. For match `(i, j)` a single uniform draw
/// `u` decides it: `i` wins iff `u < win_probability(f_i, f_j, f_ideal)`.
pub fn play_week<R: Rng + ?Sized>(
    week_index: usize,
    fixtures: &[(usize, usize)],
    fitness: &[f64],
    f_ideal: f64,
    rng: &mut R,
) -> Result<WeekOutcome> {
    let teams = fitness.len();
    if fixtures.len() * 2 != teams {
        return Err(Error::param(format!(
            "{} matches cannot seat {teams} teams",
            fixtures.len()
        )));
    }
    let mut results: Vec<Option<MatchResult>> = vec![None; teams];
    for &(i, j) in fixtures {
        if i >= teams || j >= teams || i == j || results[i].is_some() || results[j].is_some() {
            return Err(Error::param(format!("malformed fixture ({i}, {j})")));
        }
        let p_i = win_probability(fitness[i], fitness[j], f_ideal)?;
        let u: f64 = rng.gen();
        let i_won = u < p_i;
        results[i] = Some(MatchResult {
            opponent: j,
            won: i_won,
        });
        results[j] = Some(MatchResult {
            opponent: i,
            won: !i_won,
        });
    }
    Ok(WeekOutcome {
        week_index,
        results: results.into_iter().map(Option::unwrap).collect(),
    })
}
