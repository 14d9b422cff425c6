//! League Championship Algorithm over continuous box domains.
//!
//! A league of `L` teams plays a single round-robin fixture list season
//! after season. Each team's formation is a candidate solution; after every
//! week the match outcomes drive a SWOT-style update of each formation,
//! anchored at that team's best formation so far.
//!
//! The optimizer knows nothing about scheduling; anything implementing
//! [`Objective`] can be minimized.

mod matchplay;
mod optimizer;
mod params;
mod schedule;
mod update;

pub use matchplay::{play_week, win_probability, MatchResult, WeekOutcome};
pub use optimizer::{optimize, LcaOutcome, League, LeagueState, Objective, Team};
pub use params::{BoxDomain, LcaParams};
pub use schedule::{generate_league_schedule, LeagueSchedule};
pub use update::{
    change_count, change_count_from_uniform, select_change_mask, swot_step, swot_update, SwotDraws,
};
