use rayon::prelude::*;

use super::{bernstein_derivative, cumulative_rank_weight, Contest, PrizeVector};
use crate::error::{Error, Result};
use crate::numerics::integrate_piecewise;

/// Default lower edge of curve grids; `mᵢ(0)` can diverge.
pub const DEFAULT_THETA_MIN: f64 = 1e-3;

/// Equilibrium effort sampled on an increasing grid in `[θ_min, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumCurve {
    pub theta_min: f64,
    pub grid: Vec<f64>,
    pub efforts: Vec<f64>,
}

impl EquilibriumCurve {
    /// `points` equally spaced abscissae from `theta_min` to 1.
    pub fn uniform_grid(theta_min: f64, points: usize) -> Vec<f64> {
        let step = (1.0 - theta_min) / (points - 1) as f64;
        let mut grid: Vec<f64> = (0..points).map(|k| theta_min + step * k as f64).collect();
        grid[points - 1] = 1.0;
        grid
    }

    /// `points` log-spaced abscissae from `theta_min` to 1.
    pub fn log_grid(theta_min: f64, points: usize) -> Vec<f64> {
        let lo = theta_min.ln();
        let mut grid: Vec<f64> = (0..points)
            .map(|k| (lo * (1.0 - k as f64 / (points - 1) as f64)).exp())
            .collect();
        grid[0] = theta_min;
        grid[points - 1] = 1.0;
        grid
    }
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Input("effort grid is empty".into()));
    }
    if grid.iter().any(|&x| !(x > 0.0 && x <= 1.0)) {
        return Err(Error::Domain("effort grid must lie in (0, 1]".into()));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Input("effort grid must be strictly increasing".into()));
    }
    Ok(())
}

impl Contest {
    /// `mᵢ(θ) = −∫_{F(θ)}^1 pᵢ′(t) / F⁻¹(t) dt`: the change in type `θ`'s
    /// equilibrium effort per unit of prize `i`.
    pub fn marginal_effect(&self, i: usize, theta: f64) -> Result<f64> {
        self.check_rank(i)?;
        let lo = self.lower_limit(theta)?;
        let n = self.n;
        let d = &self.dist;
        let r = integrate_piecewise(
            |t| -bernstein_derivative(n, i, t) / d.quantile(t),
            lo,
            1.0,
            &d.probability_breakpoints(),
            self.tol,
        )?;
        Ok(r.value)
    }

    fn lower_limit(&self, theta: f64) -> Result<f64> {
        if !(theta > 0.0 && theta <= 1.0) {
            return Err(Error::Domain(format!(
                "effort is evaluated on (0, 1]; θ = {theta} may sit on a divergent integral"
            )));
        }
        Ok(self.dist.cdf(theta))
    }

    /// `g(θ) = Σ vᵢ mᵢ(θ)` evaluated term by term.
    pub fn effort_direct(&self, v: &PrizeVector, theta: f64) -> Result<f64> {
        self.check_prizes(v)?;
        let mut g = 0.0;
        for (i, &vi) in v.values().iter().enumerate() {
            if vi != 0.0 {
                g += vi * self.marginal_effect(i + 1, theta)?;
            }
        }
        Ok(g)
    }

    /// Positive kernel `Σᵢ (vᵢ − vᵢ₊₁)(−Σ_{j≤i} p_j′(t)) / F⁻¹(t)` of the gap form.
    fn gap_kernel<'a>(&'a self, gaps: &'a [f64]) -> impl Fn(f64) -> f64 + 'a {
        let n = self.n;
        move |t| {
            let mut acc = 0.0;
            for (k, &gap) in gaps.iter().enumerate() {
                if gap != 0.0 {
                    acc += gap * cumulative_rank_weight(n, k + 1, t);
                }
            }
            if acc == 0.0 {
                0.0
            } else {
                acc / self.dist.quantile(t)
            }
        }
    }

    /// Equilibrium effort of type `θ`, in the gap form.
    pub fn effort(&self, v: &PrizeVector, theta: f64) -> Result<f64> {
        self.check_prizes(v)?;
        let lo = self.lower_limit(theta)?;
        let gaps = v.gaps();
        let r = integrate_piecewise(
            self.gap_kernel(&gaps),
            lo,
            1.0,
            &self.dist.probability_breakpoints(),
            self.tol,
        )?;
        Ok(r.value)
    }

    /// Equilibrium effort on a strictly increasing grid in `(0, 1]`.
    ///
    /// The gap-form integral is split at the grid's probability levels; the
    /// pieces are integrated in parallel and accumulated from `θ = 1` down.
    pub fn equilibrium_curve(&self, v: &PrizeVector, grid: &[f64]) -> Result<EquilibriumCurve> {
        self.check_prizes(v)?;
        validate_grid(grid)?;
        let gaps = v.gaps();
        let kernel = self.gap_kernel(&gaps);
        let bps = self.dist.probability_breakpoints();
        let mut levels: Vec<f64> = grid.iter().map(|&x| self.dist.cdf(x)).collect();
        levels.push(1.0);
        let pieces: Vec<f64> = levels
            .par_windows(2)
            .map(|w| {
                if w[0] >= w[1] {
                    return Ok(0.0);
                }
                integrate_piecewise(&kernel, w[0], w[1], &bps, self.tol).map(|r| r.value)
            })
            .collect::<Result<_>>()?;
        let mut efforts = vec![0.0; grid.len()];
        let mut acc = 0.0;
        for k in (0..grid.len()).rev() {
            acc += pieces[k];
            efforts[k] = acc;
        }
        Ok(EquilibriumCurve {
            theta_min: grid[0],
            grid: grid.to_vec(),
            efforts,
        })
    }
}
