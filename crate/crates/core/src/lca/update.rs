use rand::distributions::Open01;
use rand::Rng;

use super::optimizer::Team;
use super::params::{BoxDomain, LcaParams};
use crate::error::{Error, Result};

fn check_change_args(n: usize, p_c: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::param("dimension must be positive"));
    }
    if !(p_c > 0.0 && p_c < 1.0) {
        return Err(Error::param(format!(
            "change probability must lie in (0, 1), got {p_c}"
        )));
    }
    Ok(())
}

/// Inverse transform of the geometric distribution truncated to `[1, n]`.
///
/// `r` must lie in the open interval (0, 1). The result is non-decreasing in `r`.
pub fn change_count_from_uniform(r: f64, n: usize, p_c: f64) -> Result<usize> {
    check_change_args(n, p_c)?;
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::param(format!(
            "uniform draw must lie in (0, 1), got {r}"
        )));
    }
    let keep = 1.0 - p_c;
    let tail = keep.powf(n as f64);
    let q = ((1.0 - r * (1.0 - tail)).ln() / keep.ln()).ceil();
    // q is NaN-free here; clamp absorbs rounding at both ends.
    Ok((q.max(1.0) as usize).min(n))
}

/// Number of formation components to change this week.
pub fn change_count<R: Rng + ?Sized>(rng: &mut R, n: usize, p_c: f64) -> Result<usize> {
    check_change_args(n, p_c)?;
    let r: f64 = rng.sample(Open01);
    change_count_from_uniform(r, n, p_c)
}

/// Picks exactly `q` of `n` components uniformly without replacement.
pub fn select_change_mask<R: Rng + ?Sized>(rng: &mut R, n: usize, q: usize) -> Result<Vec<bool>> {
    if q == 0 || q > n {
        return Err(Error::param(format!("change count {q} outside [1, {n}]")));
    }
    let mut mask = vec![false; n];
    for d in rand::seq::index::sample(rng, n, q) {
        mask[d] = true;
    }
    Ok(mask)
}

/// Random quantities consumed by one SWOT update: for every changed
/// dimension `d`, the pair of step scalars `(r1, r2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SwotDraws {
    pub changes: Vec<(usize, f64, f64)>,
}

impl SwotDraws {
    pub fn draw<R: Rng + ?Sized>(rng: &mut R, n: usize, p_c: f64) -> Result<Self> {
        let q = change_count(rng, n, p_c)?;
        let mask = select_change_mask(rng, n, q)?;
        let changes = mask
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(d, _)| (d, rng.gen::<f64>(), rng.gen::<f64>()))
            .collect();
        Ok(Self { changes })
    }
}

/// Deterministic core of the SWOT update.
///
/// Team `i` approaches winners and retreats from losers:
/// the `k` term compares `i` with the team its next opponent just played,
/// the `l` term compares `i` with the team it just played itself.
/// The step is anchored at `best`; components not listed in `draws`
/// keep `best` exactly.
#[allow(clippy::too_many_arguments)]
pub fn swot_step(
    best: &[f64],
    x_i: &[f64],
    x_l: &[f64],
    x_k: &[f64],
    i_won: bool,
    k_won: bool,
    draws: &SwotDraws,
    retreat: f64,
    approach: f64,
    domain: &BoxDomain,
) -> Result<Vec<f64>> {
    let n = domain.dim();
    if [best.len(), x_i.len(), x_l.len(), x_k.len()]
        .iter()
        .any(|&len| len != n)
    {
        return Err(Error::param(format!(
            "formation length differs from domain dimension {n}"
        )));
    }
    let mut next = best.to_vec();
    for &(d, r1, r2) in &draws.changes {
        if d >= n {
            return Err(Error::param(format!(
                "changed dimension {d} outside [0, {n})"
            )));
        }
        let tau_k = if k_won {
            approach * (x_k[d] - x_i[d])
        } else {
            retreat * (x_i[d] - x_k[d])
        };
        let tau_l = if i_won {
            retreat * (x_i[d] - x_l[d])
        } else {
            approach * (x_l[d] - x_i[d])
        };
        next[d] = domain.clamp(d, best[d] + r1 * tau_k + r2 * tau_l);
    }
    Ok(next)
}

/// Draws the change mask and step scalars, then applies [`swot_step`].
#[allow(clippy::too_many_arguments)]
pub fn swot_update<R: Rng + ?Sized>(
    team: &Team,
    x_l: &[f64],
    x_k: &[f64],
    i_won: bool,
    k_won: bool,
    params: &LcaParams,
    domain: &BoxDomain,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let draws = SwotDraws::draw(rng, domain.dim(), params.change_prob)?;
    swot_step(
        &team.best_formation,
        &team.formation,
        x_l,
        x_k,
        i_won,
        k_won,
        &draws,
        params.retreat_coeff,
        params.approach_coeff,
        domain,
    )
}
