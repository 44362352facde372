//! Independent checks of computed equilibria: deviation regret, simulated
//! rank frequencies and sign changes between effort curves.

mod monte_carlo;
mod regret;

pub use monte_carlo::{monte_carlo_ranks, RankFrequencies, MIN_SAMPLES};
pub use regret::{best_response_regret, default_regret_grids, RegretReport, REGRET_FRACTION};

use crate::contest::{Contest, PrizeVector};
use crate::error::Result;
use crate::numerics::{crossing_count, CrossingReport, SampledCurve};

/// Sign changes of `g_v − g_w` on `grid`.
pub fn effort_crossings(contest: &Contest, v: &PrizeVector, w: &PrizeVector, grid: &[f64]) -> Result<CrossingReport> {
    let a = contest.equilibrium_curve(v, grid)?;
    let b = contest.equilibrium_curve(w, grid)?;
    crossing_count(
        &SampledCurve::new(a.grid, a.efforts)?,
        &SampledCurve::new(b.grid, b.efforts)?,
    )
}
