//! Rank-order contests: prize vectors, rank probabilities, equilibrium effort
//! and the expected marginal effect of each prize.

mod compare;
mod effort;
mod lambda;

pub use compare::{majorizes, ComparisonReport, Corollary, CorollaryCheck};
pub use effort::{EquilibriumCurve, DEFAULT_THETA_MIN};
pub use lambda::{closed_form_lambda_power, LambdaMethod, MarginalEffects};

use std::sync::OnceLock;

use crate::distributions::Distribution;
use crate::error::{Error, Result};
use crate::numerics::binomial;

/// Default absolute quadrature tolerance for contest integrals.
pub const CONTEST_TOL: f64 = 1e-12;

/// Nonincreasing, nonnegative prizes `v₁ ≥ … ≥ vₙ ≥ 0`, `n ≥ 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrizeVector {
    values: Vec<f64>,
}

impl PrizeVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Input("a prize vector needs at least two ranks".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("prizes must be finite".into()));
        }
        if let Some(i) = values.windows(2).position(|w| w[0] < w[1]) {
            return Err(Error::Input(format!(
                "prizes must be nonincreasing: v{} = {} < v{} = {}",
                i + 1,
                values[i],
                i + 2,
                values[i + 1]
            )));
        }
        if values[values.len() - 1] < 0.0 {
            return Err(Error::Input("prizes must be nonnegative".into()));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `vᵢ − vᵢ₊₁` for `i = 1..n−1`.
    pub fn gaps(&self) -> Vec<f64> {
        self.values.windows(2).map(|w| w[0] - w[1]).collect()
    }

    pub fn is_constant(&self) -> bool {
        self.values.iter().all(|&v| v == self.values[0])
    }
}

/// `pᵢ(t) = C(n−1, i−1) tⁱ⁻¹ (1−t)ⁿ⁻ⁱ` and its derivative in `t`: the chance
/// of rank `i` when a share `t` of the opponents is more productive.
pub fn rank_probability(n: usize, i: usize, t: f64) -> Result<(f64, f64)> {
    if n < 1 || i < 1 || i > n {
        return Err(Error::Input(format!("rank {i} out of range for n = {n}")));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("t must lie in [0, 1], got {t}")));
    }
    Ok((bernstein(n, i, t), bernstein_derivative(n, i, t)))
}

pub(crate) fn bernstein(n: usize, i: usize, t: f64) -> f64 {
    binomial(n - 1, i - 1) * t.powi((i - 1) as i32) * (1.0 - t).powi((n - i) as i32)
}

pub(crate) fn bernstein_derivative(n: usize, i: usize, t: f64) -> f64 {
    let mut d = 0.0;
    if i >= 2 {
        d += (i - 1) as f64 * t.powi((i - 2) as i32) * (1.0 - t).powi((n - i) as i32);
    }
    if i < n {
        d -= (n - i) as f64 * t.powi((i - 1) as i32) * (1.0 - t).powi((n - i - 1) as i32);
    }
    binomial(n - 1, i - 1) * d
}

/// `−Σ_{j≤i} p_j′(t) = (n−1) C(n−2, i−1) tⁱ⁻¹ (1−t)ⁿ⁻¹⁻ⁱ` for `i = 1..n−1`.
pub(crate) fn cumulative_rank_weight(n: usize, i: usize, t: f64) -> f64 {
    (n - 1) as f64 * binomial(n - 2, i - 1) * t.powi((i - 1) as i32) * (1.0 - t).powi((n - 1 - i) as i32)
}

/// An `n`-agent contest over a fixed ability distribution.
///
/// Construction checks the lower-tail conditions that make every effort
/// integral finite. Marginal effects are computed once and cached.
#[derive(Debug)]
pub struct Contest {
    dist: Distribution,
    n: usize,
    tol: f64,
    lambdas: OnceLock<MarginalEffects>,
}

impl Clone for Contest {
    fn clone(&self) -> Self {
        Self {
            dist: self.dist.clone(),
            n: self.n,
            tol: self.tol,
            lambdas: self.lambdas.clone(),
        }
    }
}

impl Contest {
    pub fn new(dist: Distribution, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Input(format!("a contest needs n ≥ 2 agents, got {n}")));
        }
        dist.require_assumption1()?;
        Ok(Self {
            dist,
            n,
            tol: CONTEST_TOL,
            lambdas: OnceLock::new(),
        })
    }

    /// Overrides the absolute quadrature tolerance.
    pub fn with_tolerance(mut self, tol: f64) -> Result<Self> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::Parameter(format!("tolerance must be positive, got {tol}")));
        }
        self.tol = tol;
        self.lambdas = OnceLock::new();
        Ok(self)
    }

    pub fn distribution(&self) -> &Distribution {
        &self.dist
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    fn check_prizes(&self, v: &PrizeVector) -> Result<()> {
        if v.len() == self.n {
            Ok(())
        } else {
            Err(Error::Input(format!(
                "prize vector has {} entries but the contest has {} agents",
                v.len(),
                self.n
            )))
        }
    }

    fn check_rank(&self, i: usize) -> Result<()> {
        if (1..=self.n).contains(&i) {
            Ok(())
        } else {
            Err(Error::Input(format!("rank {i} out of range for n = {}", self.n)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_probability_examples() {
        let (p, _) = rank_probability(3, 2, 0.5).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        let (p, dp) = rank_probability(3, 1, 0.0).unwrap();
        assert_eq!((p, dp), (1.0, -2.0));
        let (p, _) = rank_probability(4, 4, 1.0).unwrap();
        assert_eq!(p, 1.0);
        assert!(rank_probability(3, 0, 0.5).is_err());
        assert!(rank_probability(3, 4, 0.5).is_err());
    }

    #[test]
    fn rank_probabilities_sum_to_one_and_derivatives_to_zero() {
        for n in 2..9 {
            for k in 0..=20 {
                let t = k as f64 / 20.0;
                let (s, ds) = (1..=n).fold((0.0, 0.0), |(s, ds), i| {
                    let (p, dp) = rank_probability(n, i, t).unwrap();
                    (s + p, ds + dp)
                });
                assert!((s - 1.0).abs() < 1e-13 && ds.abs() < 1e-11, "n={n} t={t}");
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let h = 1e-6;
        for i in 1..=5 {
            let t = 0.37;
            let fd = (bernstein(5, i, t + h) - bernstein(5, i, t - h)) / (2.0 * h);
            assert!((fd - bernstein_derivative(5, i, t)).abs() < 1e-8);
        }
    }

    #[test]
    fn cumulative_weight_is_minus_partial_sum_of_derivatives() {
        let n = 6;
        for i in 1..n {
            let t = 0.23;
            let partial: f64 = (1..=i).map(|j| bernstein_derivative(n, j, t)).sum();
            assert!((cumulative_rank_weight(n, i, t) + partial).abs() < 1e-13);
        }
    }

    #[test]
    fn prize_vector_validation() {
        assert!(PrizeVector::new(vec![1.0]).is_err());
        assert!(PrizeVector::new(vec![0.5, 1.0]).is_err());
        assert!(PrizeVector::new(vec![1.0, -0.1]).is_err());
        assert!(PrizeVector::new(vec![1.0, f64::NAN]).is_err());
        let v = PrizeVector::new(vec![3.0, 1.0, 1.0]).unwrap();
        assert_eq!(v.gaps(), vec![2.0, 0.0]);
    }

    #[test]
    fn contest_rejects_heavy_lower_tail() {
        let d = Distribution::power(0.4).unwrap();
        assert!(matches!(Contest::new(d, 3), Err(Error::Domain(_))));
        assert!(Contest::new(Distribution::power(2.0).unwrap(), 1).is_err());
    }
}
