use crate::contest::{bernstein, Contest, EquilibriumCurve, PrizeVector, DEFAULT_THETA_MIN};
use crate::error::{Error, Result};

/// Acceptance threshold as a fraction of the prize spread `v₁ − vₙ`.
pub const REGRET_FRACTION: f64 = 1e-4;
const MERGE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct RegretReport {
    /// `max_θ [max_t payoff(t; θ) − payoff(θ; θ)]`.
    pub max_regret: f64,
    pub worst_type: f64,
    pub worst_deviation: f64,
    pub type_points: usize,
    pub deviation_points: usize,
    /// `1e-4 (v₁ − vₙ)`
    pub threshold: f64,
    /// Effort strictly decreases along the evaluated grid (or `v` is constant).
    pub effort_monotone: bool,
}

impl RegretReport {
    pub fn passed(&self) -> bool {
        self.max_regret <= self.threshold && self.effort_monotone
    }
}

/// Type and deviation grids of 64 and 256 equally spaced points on `[1e-3, 1]`.
pub fn default_regret_grids() -> (Vec<f64>, Vec<f64>) {
    (
        EquilibriumCurve::uniform_grid(DEFAULT_THETA_MIN, 64),
        EquilibriumCurve::uniform_grid(DEFAULT_THETA_MIN, 256),
    )
}

/// Largest gain any type on `type_grid` can get by mimicking a type on
/// `deviation_grid`, against opponents playing the computed equilibrium.
///
/// Mimicking `t` wins rank `i` with probability `pᵢ(F(t))` at cost `θ g(t)`.
/// Truthful play is among the options, so regret is never negative.
pub fn best_response_regret(
    contest: &Contest,
    v: &PrizeVector,
    type_grid: &[f64],
    deviation_grid: &[f64],
) -> Result<RegretReport> {
    if type_grid.is_empty() || deviation_grid.is_empty() {
        return Err(Error::Input("regret grids must be non-empty".into()));
    }
    let mut points: Vec<f64> = type_grid.iter().chain(deviation_grid).copied().collect();
    points.sort_by(f64::total_cmp);
    // grids built with different step sizes can hit the same abscissa up to rounding
    points.dedup_by(|b, a| (*b - *a).abs() <= MERGE_TOL * a.abs());
    let curve = contest.equilibrium_curve(v, &points)?;
    let effort_at = |x: f64| {
        let k = points.partition_point(|&p| p < x);
        let nearest = if k == points.len() || (k > 0 && x - points[k - 1] < points[k] - x) { k - 1 } else { k };
        curve.efforts[nearest]
    };
    let n = contest.n();
    let d = contest.distribution();
    let gaps = v.gaps();
    // vₙ + Σ (vᵢ − vᵢ₊₁) P(rank ≤ i): exactly vₙ when the prizes are flat
    let expected_prize = |t: f64| {
        let q = d.cdf(t);
        let mut at_most = 0.0;
        let mut total = v.values()[n - 1];
        for (i, &gap) in gaps.iter().enumerate() {
            at_most += bernstein(n, i + 1, q);
            total += gap * at_most;
        }
        total
    };
    let deviations: Vec<(f64, f64, f64)> =
        deviation_grid.iter().map(|&t| (t, expected_prize(t), effort_at(t))).collect();

    let mut report = RegretReport {
        max_regret: 0.0,
        worst_type: type_grid[0],
        worst_deviation: type_grid[0],
        type_points: type_grid.len(),
        deviation_points: deviation_grid.len(),
        threshold: REGRET_FRACTION * (v.values()[0] - v.values()[n - 1]),
        effort_monotone: v.is_constant() || curve.efforts.windows(2).all(|w| w[1] < w[0]),
    };
    for &theta in type_grid {
        let truthful = expected_prize(theta) - theta * effort_at(theta);
        let (mut best, mut best_t) = (truthful, theta);
        for &(t, prize, effort) in &deviations {
            let payoff = prize - theta * effort;
            if payoff > best {
                best = payoff;
                best_t = t;
            }
        }
        let regret = best - truthful;
        if regret > report.max_regret {
            report.max_regret = regret;
            report.worst_type = theta;
            report.worst_deviation = best_t;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::Distribution;

    #[test]
    fn two_agent_uniform() {
        let c = Contest::new(Distribution::power(1.0).unwrap(), 2).unwrap();
        let v = PrizeVector::new(vec![1.0, 0.0]).unwrap();
        let theta = (-1.0f64).exp();
        let devs: Vec<f64> = (1..=1000).map(|k| k as f64 / 1000.0).collect();
        let r = best_response_regret(&c, &v, &[theta], &devs).unwrap();
        // payoff t + θ ln t peaks at t = θ; the grid can only do worse
        assert!(r.max_regret < 1e-10, "{r:?}");
        assert!(r.passed());
    }

    #[test]
    fn constant_prizes_have_no_regret() {
        let c = Contest::new(Distribution::power(2.0).unwrap(), 3).unwrap();
        let v = PrizeVector::new(vec![0.4; 3]).unwrap();
        let (tg, dg) = default_regret_grids();
        let r = best_response_regret(&c, &v, &tg, &dg).unwrap();
        assert_eq!(r.max_regret, 0.0);
    }

    #[test]
    fn signaling_prizes() {
        let c = Contest::new(Distribution::power(2.0).unwrap(), 3).unwrap();
        let v = PrizeVector::new(vec![3.2, 1.6, 1.2]).unwrap();
        let (tg, dg) = default_regret_grids();
        let r = best_response_regret(&c, &v, &tg, &dg).unwrap();
        assert!(r.max_regret <= 1e-4 * 2.0, "{r:?}");
        assert!(r.effort_monotone);
    }

    #[test]
    fn overlapping_grids_merge() {
        let c = Contest::new(Distribution::power(2.0).unwrap(), 2).unwrap();
        let v = PrizeVector::new(vec![0.78, 0.11]).unwrap();
        let (tg, dg) = default_regret_grids();
        let r = best_response_regret(&c, &v, &tg, &dg).unwrap();
        assert!(r.effort_monotone && r.passed(), "{r:?}");
    }

    #[test]
    fn wrong_curve_is_detected() {
        // a contest solved for the wrong distribution leaves profitable deviations
        let c = Contest::new(Distribution::power(2.0).unwrap(), 3).unwrap();
        let wrong = Contest::new(Distribution::power(1.0).unwrap(), 3).unwrap();
        let v = PrizeVector::new(vec![1.0, 0.0, 0.0]).unwrap();
        let (tg, dg) = default_regret_grids();
        let curve = wrong.equilibrium_curve(&v, &dg).unwrap();
        let d = c.distribution();
        let mut worst: f64 = 0.0;
        for &theta in &tg {
            let payoff = |t: f64, g: f64| bernstein(3, 1, d.cdf(t)) - theta * g;
            let truthful = payoff(theta, wrong.effort(&v, theta).unwrap());
            for (&t, &g) in dg.iter().zip(&curve.efforts) {
                worst = worst.max(payoff(t, g) - truthful);
            }
        }
        assert!(worst > 1e-2);
    }
}
