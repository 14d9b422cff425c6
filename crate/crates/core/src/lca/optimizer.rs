use rand::Rng;

use super::matchplay::play_week;
use super::params::{BoxDomain, LcaParams};
use super::schedule::{generate_league_schedule, LeagueSchedule};
use super::update::swot_update;
use crate::error::Result;
use crate::rng::{seeded, SimRng};

/// Function to minimize. Must be deterministic in its argument.
pub trait Objective {
    fn evaluate(&self, x: &[f64]) -> f64;
}

impl<F> Objective for F
where
    F: Fn(&[f64]) -> f64,
{
    fn evaluate(&self, x: &[f64]) -> f64 {
        self(x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Team {
    pub formation: Vec<f64>,
    pub fitness: f64,
    pub best_formation: Vec<f64>,
    pub best_fitness: f64,
}

impl Team {
    fn new(formation: Vec<f64>, fitness: f64) -> Self {
        Self {
            best_formation: formation.clone(),
            best_fitness: fitness,
            formation,
            fitness,
        }
    }

    fn adopt(&mut self, formation: Vec<f64>, fitness: f64) {
        if fitness < self.best_fitness {
            self.best_formation.clone_from(&formation);
            self.best_fitness = fitness;
        }
        self.formation = formation;
        self.fitness = fitness;
    }
}

/// Observable state of a league between weeks.
#[derive(Debug, Clone, PartialEq)]
pub struct LeagueState {
    pub teams: Vec<Team>,
    /// Best fitness seen by any evaluation so far.
    pub ideal_fitness: f64,
    pub best_formation: Vec<f64>,
    pub evaluations_used: u64,
    /// Ideal fitness after initialization, then after every played week.
    pub history: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LcaOutcome {
    pub best: Vec<f64>,
    pub best_fitness: f64,
    pub history: Vec<f64>,
    pub evaluations: u64,
    pub weeks_played: usize,
}

/// A running league. Use [`optimize`] unless you need to step week by week.
pub struct League<'a, O: Objective + ?Sized> {
    objective: &'a O,
    domain: &'a BoxDomain,
    params: LcaParams,
    schedule: LeagueSchedule,
    rng: SimRng,
    state: LeagueState,
    week: usize,
    budget: u64,
}

fn score<O: Objective + ?Sized>(objective: &O, x: &[f64]) -> f64 {
    let f = objective.evaluate(x);
    if f.is_nan() {
        f64::INFINITY
    } else {
        f
    }
}

impl<'a, O: Objective + ?Sized> League<'a, O> {
    /// Seeds the RNG, places every team uniformly in the domain and evaluates it.
    pub fn new(objective: &'a O, domain: &'a BoxDomain, params: &LcaParams) -> Result<Self> {
        params.validate()?;
        let schedule = generate_league_schedule(params.league_size)?;
        let mut rng = seeded(params.seed);
        let teams: Vec<Team> = (0..params.league_size)
            .map(|_| {
                let x: Vec<f64> = domain
                    .lower()
                    .iter()
                    .zip(domain.upper())
                    .enumerate()
                    .map(|(d, (lo, hi))| domain.clamp(d, lo + rng.gen::<f64>() * (hi - lo)))
                    .collect();
                let f = score(objective, &x);
                Team::new(x, f)
            })
            .collect();
        let leader = (0..teams.len())
            .min_by(|&a, &b| teams[a].fitness.total_cmp(&teams[b].fitness))
            .expect("league is non-empty");
        let ideal = teams[leader].fitness;
        let state = LeagueState {
            best_formation: teams[leader].formation.clone(),
            ideal_fitness: ideal,
            evaluations_used: teams.len() as u64,
            history: vec![ideal],
            teams,
        };
        Ok(Self {
            objective,
            domain,
            budget: params.max_evaluations.unwrap_or(u64::MAX),
            params: params.clone(),
            schedule,
            rng,
            state,
            week: 0,
        })
    }

    pub fn state(&self) -> &LeagueState {
        &self.state
    }

    pub fn schedule(&self) -> &LeagueSchedule {
        &self.schedule
    }

    pub fn total_weeks(&self) -> usize {
        self.params.seasons * self.params.weeks_per_season()
    }

    pub fn finished(&self) -> bool {
        self.week >= self.total_weeks() || self.state.evaluations_used >= self.budget
    }

    /// Plays one week and moves every team to its post-match formation.
    /// Returns `false` without doing anything once the run is over.
    pub fn play_next_week(&mut self) -> Result<bool> {
        if self.finished() {
            return Ok(false);
        }
        let t = self.week;
        let fitness: Vec<f64> = self.state.teams.iter().map(|team| team.fitness).collect();
        let outcome = play_week(
            t,
            self.schedule.week(t),
            &fitness,
            self.state.ideal_fitness,
            &mut self.rng,
        )?;
        let next_opponents = self.schedule.opponents(t + 1);

        let mut candidates = Vec::with_capacity(self.state.teams.len());
        for (i, team) in self.state.teams.iter().enumerate() {
            let l = outcome.opponent(i);
            let j = next_opponents[i];
            let k = outcome.opponent(j);
            let x = swot_update(
                team,
                &self.state.teams[l].formation,
                &self.state.teams[k].formation,
                outcome.won(i),
                outcome.won(k),
                &self.params,
                self.domain,
                &mut self.rng,
            )?;
            candidates.push(x);
        }

        for (team, x) in self.state.teams.iter_mut().zip(candidates) {
            if self.state.evaluations_used >= self.budget {
                break;
            }
            let f = score(self.objective, &x);
            self.state.evaluations_used += 1;
            if f < self.state.ideal_fitness {
                self.state.ideal_fitness = f;
                self.state.best_formation.clone_from(&x);
            }
            team.adopt(x, f);
        }
        self.state.history.push(self.state.ideal_fitness);
        self.week += 1;
        Ok(true)
    }

    pub fn into_outcome(self) -> LcaOutcome {
        LcaOutcome {
            best: self.state.best_formation,
            best_fitness: self.state.ideal_fitness,
            history: self.state.history,
            evaluations: self.state.evaluations_used,
            weeks_played: self.week,
        }
    }
}

/// Minimizes `objective` over `domain`.
///
/// Runs `seasons * (league_size - 1)` weeks over one reused fixture list,
/// stopping early when `max_evaluations` is spent.
pub fn optimize<O: Objective + ?Sized>(
    objective: &O,
    domain: &BoxDomain,
    params: &LcaParams,
) -> Result<LcaOutcome> {
    let mut league = League::new(objective, domain, params)?;
    while league.play_next_week()? {}
    Ok(league.into_outcome())
}
