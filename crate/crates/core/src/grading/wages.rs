use rayon::prelude::*;

use crate::distributions::{parse_two_column_table, Distribution, Family, MonotoneCubic};
use crate::error::{Error, Result};
use crate::numerics::{binomial, diverges_at_zero, integrate_piecewise};

const WAGE_TOL: f64 = 1e-12;
const MONOTONE_GRID: usize = 512;

/// Monotone nonincreasing wage `w(θ)` paid to a type known to be `θ`.
#[derive(Debug, Clone, PartialEq)]
pub enum WageSpec {
    /// `w(θ) = 1/θ`
    InverseProductivity,
    /// `w(θ) = 1 − θ`
    Linear,
    Tabulated(MonotoneCubic),
}

impl WageSpec {
    /// Tabulated wage from `(θ, w)` rows spanning `[0, 1]`.
    pub fn tabulated(points: &[(f64, f64)]) -> Result<Self> {
        if points.len() < 2 || points[0].0 != 0.0 || points[points.len() - 1].0 != 1.0 {
            return Err(Error::Input("wage table must span θ = 0 to θ = 1".into()));
        }
        if points.iter().any(|&(_, w)| w < 0.0) {
            return Err(Error::Input("wages must be nonnegative".into()));
        }
        let (xs, ys) = points.iter().copied().unzip();
        let w = WageSpec::Tabulated(MonotoneCubic::new(xs, ys)?);
        w.validate()?;
        Ok(w)
    }

    pub fn from_table_text(text: &str) -> Result<Self> {
        Self::tabulated(&parse_two_column_table(text)?)
    }

    pub fn eval(&self, theta: f64) -> f64 {
        match self {
            WageSpec::InverseProductivity => 1.0 / theta,
            WageSpec::Linear => 1.0 - theta,
            WageSpec::Tabulated(c) => c.eval(theta),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            WageSpec::InverseProductivity => "inverse_productivity",
            WageSpec::Linear => "linear",
            WageSpec::Tabulated(_) => "tabulated",
        }
    }

    /// Checks `w` is nonincreasing on `θ = k/512`, `k = 1..512`.
    pub fn validate(&self) -> Result<()> {
        let values: Vec<f64> = (1..=MONOTONE_GRID)
            .map(|k| self.eval(k as f64 / MONOTONE_GRID as f64))
            .collect();
        if values.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::Input(format!("wage {} is not nonincreasing", self.label())));
        }
        Ok(())
    }

    fn knots(&self) -> &[f64] {
        match self {
            WageSpec::Tabulated(c) => c.knots(),
            _ => &[],
        }
    }
}

/// `vᵢ* = E[w(θ) | θ is the i-th smallest of n]`, strictly decreasing in `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderStatWages {
    vstar: Vec<f64>,
}

impl OrderStatWages {
    pub fn new(vstar: Vec<f64>) -> Result<Self> {
        if vstar.len() < 2 {
            return Err(Error::Input("need wages for at least two ranks".into()));
        }
        if vstar.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("order-statistic wages must be finite".into()));
        }
        if let Some(i) = vstar.windows(2).position(|w| !(w[0] > w[1])) {
            return Err(Error::Input(format!(
                "order-statistic wages must be strictly decreasing; ranks {} and {} give {} and {}",
                i + 1,
                i + 2,
                vstar[i],
                vstar[i + 1]
            )));
        }
        Ok(Self { vstar })
    }

    pub fn values(&self) -> &[f64] {
        &self.vstar
    }

    pub fn n(&self) -> usize {
        self.vstar.len()
    }
}

/// Expected wage of each order statistic,
/// `vᵢ* = n C(n−1, i−1) ∫₀¹ w(F⁻¹(t)) tⁱ⁻¹ (1−t)ⁿ⁻ⁱ dt`.
///
/// Divergent ranks are reported as [`Error::Integrability`]: analytically for
/// `w = 1/θ` under `F = θ^p` (rank `k` needs `k > 1/p`), by an endpoint probe
/// otherwise.
pub fn order_statistic_wages(d: &Distribution, w: &WageSpec, n: usize) -> Result<OrderStatWages> {
    if n < 2 {
        return Err(Error::Input(format!("need n ≥ 2, got {n}")));
    }
    w.validate()?;
    let kernel = |i: usize| {
        move |t: f64| w.eval(d.quantile(t)) * t.powi((i - 1) as i32) * (1.0 - t).powi((n - i) as i32)
    };
    match (d.family(), w) {
        (Family::Power { p }, WageSpec::InverseProductivity) => {
            if let Some(rank) = (1..=n).find(|&k| k as f64 - 1.0 / p <= 0.0) {
                return Err(Error::Integrability { rank });
            }
        }
        _ => {
            if let Some(rank) = (1..=n).find(|&i| diverges_at_zero(kernel(i))) {
                return Err(Error::Integrability { rank });
            }
        }
    }
    let mut bps = d.probability_breakpoints();
    bps.extend(w.knots().iter().map(|&x| d.cdf(x)));
    let vstar = (1..=n)
        .into_par_iter()
        .map(|i| {
            let r = integrate_piecewise(kernel(i), 0.0, 1.0, &bps, WAGE_TOL)?;
            Ok(n as f64 * binomial(n - 1, i - 1) * r.value)
        })
        .collect::<Result<Vec<_>>>()?;
    OrderStatWages::new(vstar)
}
