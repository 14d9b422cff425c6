use crate::error::{Error, Result};

/// Control parameters of the league.
#[derive(Debug, Clone, PartialEq)]
pub struct LcaParams {
    /// Number of teams, even and at least 4.
    pub league_size: usize,
    /// Number of seasons; each season is `league_size - 1` weeks.
    pub seasons: usize,
    /// Success probability of the truncated geometric change count.
    pub change_prob: f64,
    /// Step coefficient for retreating from a loser.
    pub retreat_coeff: f64,
    /// Step coefficient for approaching a winner.
    pub approach_coeff: f64,
    pub seed: u64,
    /// Hard cap on objective evaluations, including initialization.
    pub max_evaluations: Option<u64>,
}

impl Default for LcaParams {
    fn default() -> Self {
        Self {
            league_size: 10,
            seasons: 222,
            change_prob: 0.3,
            retreat_coeff: 1.0,
            approach_coeff: 1.0,
            seed: 0,
            max_evaluations: None,
        }
    }
}

impl LcaParams {
    pub fn validate(&self) -> Result<()> {
        if self.league_size < 4 || !self.league_size.is_multiple_of(2) {
            return Err(Error::param(format!(
                "league size must be even and >= 4, got {}",
                self.league_size
            )));
        }
        if self.seasons == 0 {
            return Err(Error::param("seasons must be positive"));
        }
        if !(self.change_prob > 0.0 && self.change_prob < 1.0) {
            return Err(Error::param(format!(
                "change probability must lie in (0, 1), got {}",
                self.change_prob
            )));
        }
        let coeff_ok = |c: f64| c.is_finite() && c >= 0.0;
        if !coeff_ok(self.retreat_coeff) || !coeff_ok(self.approach_coeff) {
            return Err(Error::param(
                "retreat/approach coefficients must be finite and >= 0",
            ));
        }
        if self.retreat_coeff == 0.0 && self.approach_coeff == 0.0 {
            return Err(Error::param(
                "retreat and approach coefficients cannot both be zero",
            ));
        }
        if let Some(budget) = self.max_evaluations {
            if budget < self.league_size as u64 {
                return Err(Error::param(format!(
                    "evaluation budget {budget} cannot initialize a league of {}",
                    self.league_size
                )));
            }
        }
        Ok(())
    }

    /// Weeks in one season.
    pub fn weeks_per_season(&self) -> usize {
        self.league_size - 1
    }

    /// Upper bound on objective evaluations for a full run without a budget.
    pub fn full_run_evaluations(&self) -> u64 {
        let l = self.league_size as u64;
        l + self.seasons as u64 * (l - 1) * l
    }
}

/// Axis-aligned search box.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxDomain {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoxDomain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::param("domain dimension must be positive"));
        }
        if lower.len() != upper.len() {
            return Err(Error::param(format!(
                "bound length mismatch: {} lower vs {} upper",
                lower.len(),
                upper.len()
            )));
        }
        for (d, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::param(format!(
                    "dimension {d}: need finite lower < upper, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// The same interval `[lower, upper]` in every one of `dim` dimensions.
    pub fn uniform(dim: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::new(vec![lower; dim], vec![upper; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| *lo <= *v && *v <= *hi)
    }

    pub fn clamp(&self, d: usize, v: f64) -> f64 {
        if v.is_nan() {
            return self.lower[d];
        }
        v.clamp(self.lower[d], self.upper[d])
    }
}
