//! Ability distributions on `[0, 1]` and the quantile profile `h(t) = t / F⁻¹(t)`.
//!
//! A type `θ` is an agent's marginal cost of effort, so mass near zero means
//! highly productive agents. Three families are supported: `F(θ) = θ^p`,
//! `F(θ) = 1 − (1 − θ)^p`, and a tabulated CDF interpolated with a monotone
//! cubic.

mod pchip;
mod profile;

pub use pchip::MonotoneCubic;
pub use profile::{Assumption1Report, Curvature, HClassification, Monotonicity, ClassificationMethod, TailSample};

use crate::error::{Error, Result};
use crate::numerics::{integrate_piecewise, invert_monotone};

/// Parametric or tabulated family of an ability law.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Power { p: f64 },
    ReflectedPower { p: f64 },
    Tabulated(MonotoneCubic),
}

/// Description of a distribution before validation.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    Power { p: f64 },
    ReflectedPower { p: f64 },
    /// `(θ, F(θ))` rows, strictly increasing, from `(0, 0)` to `(1, 1)`.
    Tabulated { points: Vec<(f64, f64)> },
}

/// An ability distribution on `[0, 1]`. Immutable once constructed.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    family: Family,
}

const GRID_MONOTONE: usize = 1024;
const GRID_ROUND_TRIP: usize = 256;

impl Distribution {
    pub fn new(spec: FamilySpec) -> Result<Self> {
        match spec {
            FamilySpec::Power { p } => Self::power(p),
            FamilySpec::ReflectedPower { p } => Self::reflected_power(p),
            FamilySpec::Tabulated { points } => Self::tabulated(&points),
        }
    }

    /// `F(θ) = θ^p`.
    pub fn power(p: f64) -> Result<Self> {
        check_shape(p)?;
        Self::checked(Family::Power { p })
    }

    /// `F(θ) = 1 − (1 − θ)^p`.
    pub fn reflected_power(p: f64) -> Result<Self> {
        check_shape(p)?;
        Self::checked(Family::ReflectedPower { p })
    }

    /// Tabulated CDF with monotone cubic interpolation between rows.
    pub fn tabulated(points: &[(f64, f64)]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Input("a CDF table needs at least two rows".into()));
        }
        let (first, last) = (points[0], points[points.len() - 1]);
        if first != (0.0, 0.0) || last != (1.0, 1.0) {
            return Err(Error::Input(format!(
                "CDF table must run from (0, 0) to (1, 1), got {first:?} .. {last:?}"
            )));
        }
        if points.windows(2).any(|w| !(w[0].0 < w[1].0 && w[0].1 < w[1].1)) {
            return Err(Error::Input("CDF table rows must be strictly increasing in both columns".into()));
        }
        let (xs, ys) = points.iter().copied().unzip();
        Self::checked(Family::Tabulated(MonotoneCubic::new(xs, ys)?))
    }

    /// Parses a two-column `(θ, F(θ))` text table with a header line.
    ///
    /// Columns may be separated by whitespace or commas; `#` starts a comment.
    pub fn from_table_text(text: &str) -> Result<Self> {
        Self::tabulated(&parse_two_column_table(text)?)
    }

    fn checked(family: Family) -> Result<Self> {
        let d = Self { family };
        d.check_invariants()?;
        Ok(d)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Short human-readable name, e.g. `power(2)`.
    pub fn label(&self) -> String {
        match &self.family {
            Family::Power { p } => format!("power({p})"),
            Family::ReflectedPower { p } => format!("reflected_power({p})"),
            Family::Tabulated(c) => format!("tabulated({} rows)", c.knots().len()),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        match &self.family {
            Family::Power { p } => x.powf(*p),
            Family::ReflectedPower { p } => -(p * (-x).ln_1p()).exp_m1(),
            Family::Tabulated(c) => c.eval(x),
        }
    }

    pub fn density(&self, x: f64) -> f64 {
        match &self.family {
            Family::Power { p } => p * x.powf(p - 1.0),
            Family::ReflectedPower { p } => p * (1.0 - x).powf(p - 1.0),
            Family::Tabulated(c) => c.derivative(x),
        }
    }

    /// `f(1 − u)`, evaluated without forming `1 − u` where the family allows.
    pub fn density_at_complement(&self, u: f64) -> f64 {
        match &self.family {
            Family::ReflectedPower { p } => p * u.powf(p - 1.0),
            _ => self.density(1.0 - u),
        }
    }

    /// `f′(x)`; only the closed-form families provide it.
    pub fn density_derivative(&self, x: f64) -> Option<f64> {
        match &self.family {
            Family::Power { p } => Some(p * (p - 1.0) * x.powf(p - 2.0)),
            Family::ReflectedPower { p } => Some(-p * (p - 1.0) * (1.0 - x).powf(p - 2.0)),
            Family::Tabulated(_) => None,
        }
    }

    /// `F⁻¹(t)` for `t ∈ [0, 1]`.
    pub fn quantile(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        match &self.family {
            Family::Power { p } => t.powf(1.0 / p),
            Family::ReflectedPower { p } => -((-t).ln_1p() / p).exp_m1(),
            Family::Tabulated(c) => tabulated_quantile(c, t),
        }
    }

    /// Probability levels `F(θ_k)` at interior table knots, where integrands in
    /// `t = F(θ)` lose smoothness. Empty for the closed-form families.
    pub fn probability_breakpoints(&self) -> Vec<f64> {
        match &self.family {
            Family::Tabulated(c) => interior(c.values()),
            _ => Vec::new(),
        }
    }

    /// Interior knots in `θ`, for integrals over the type space.
    pub fn type_breakpoints(&self) -> Vec<f64> {
        match &self.family {
            Family::Tabulated(c) => interior(c.knots()),
            _ => Vec::new(),
        }
    }

    /// `h(t) = t / F⁻¹(t)` for `t ∈ (0, 1]`.
    pub fn h(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::Domain(format!("h(t) is defined on (0, 1], got t = {t}")));
        }
        Ok(self.h_unchecked(t))
    }

    /// `h(t)` without the domain check, for quadrature kernels that never
    /// sample `t = 0`.
    pub(crate) fn h_unchecked(&self, t: f64) -> f64 {
        match &self.family {
            Family::Power { p } => t.powf(1.0 - 1.0 / p),
            _ => t / self.quantile(t),
        }
    }

    /// `(h(t), h′(t))`.
    ///
    /// `h′` uses `(x f(x) − F(x)) / (f(x) x²)` at `x = F⁻¹(t)` and falls back
    /// to a central difference with step `min(1e-5, t/2, (1−t)/2)` where the
    /// density vanishes. At `t = 1` the difference is one-sided.
    pub fn h_profile(&self, t: f64) -> Result<(f64, f64)> {
        let h = self.h(t)?;
        let x = self.quantile(t);
        let f = self.density(x);
        let h_prime = if f > 0.0 && f.is_finite() && x > 0.0 {
            (x * f - self.cdf(x)) / (f * x * x)
        } else {
            self.h_prime_difference(t)?
        };
        Ok((h, h_prime))
    }

    fn h_prime_difference(&self, t: f64) -> Result<f64> {
        let step = 1e-5_f64.min(t / 2.0).min((1.0 - t) / 2.0);
        if step > 0.0 {
            Ok((self.h(t + step)? - self.h(t - step)?) / (2.0 * step))
        } else {
            let step = 1e-5_f64.min(t / 2.0);
            Ok((self.h(t)? - self.h(t - step)?) / step)
        }
    }

    /// `F(x) ≤ G(x) + 1e-12` on a 1024-point grid, i.e. `other` puts more
    /// mass on productive types.
    pub fn stochastically_dominates(&self, other: &Distribution) -> bool {
        grid(GRID_MONOTONE).all(|x| self.cdf(x) <= other.cdf(x) + 1e-12)
    }

    /// Validates the invariants every distribution must satisfy.
    fn check_invariants(&self) -> Result<()> {
        if self.cdf(0.0) != 0.0 || (self.cdf(1.0) - 1.0).abs() > 1e-15 {
            return Err(Error::Input(format!("{}: F(0) must be 0 and F(1) must be 1", self.label())));
        }
        let mut prev = 0.0;
        for x in grid(GRID_MONOTONE) {
            let (fx, dens) = (self.cdf(x), self.density(x));
            if fx < prev {
                return Err(Error::Input(format!("{}: CDF decreases at {x}", self.label())));
            }
            if dens < 0.0 {
                return Err(Error::Input(format!("{}: negative density at {x}", self.label())));
            }
            prev = fx;
        }
        let mass = self.total_mass()?;
        if (mass - 1.0).abs() > 1e-8 {
            return Err(Error::Input(format!("{}: density integrates to {mass}", self.label())));
        }
        for k in 1..GRID_ROUND_TRIP {
            let t = k as f64 / GRID_ROUND_TRIP as f64;
            let err = (self.cdf(self.quantile(t)) - t).abs();
            if err > 1e-10 {
                return Err(Error::Numeric(format!(
                    "{}: quantile round trip error {err:e} at t = {t}",
                    self.label()
                )));
            }
        }
        Ok(())
    }

    /// `∫₀¹ f`, split at ½ so the upper half is integrated in `u = 1 − θ`.
    pub fn total_mass(&self) -> Result<f64> {
        let bps = self.type_breakpoints();
        let lower_bps: Vec<f64> = bps.iter().copied().filter(|&x| x < 0.5).collect();
        let upper_bps: Vec<f64> = bps.iter().filter(|&&x| x > 0.5).map(|x| 1.0 - x).collect();
        let lower = integrate_piecewise(|x| self.density(x), 0.0, 0.5, &lower_bps, 1e-12)?;
        let upper = integrate_piecewise(|u| self.density_at_complement(u), 0.0, 0.5, &upper_bps, 1e-12)?;
        Ok(lower.value + upper.value)
    }
}

fn check_shape(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("shape parameter must be positive and finite, got {p}")))
    }
}

fn interior(v: &[f64]) -> Vec<f64> {
    v[1..v.len() - 1].to_vec()
}

/// `k / (n − 1)` for `k = 0..n`.
fn grid(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| k as f64 / (n - 1) as f64)
}

fn tabulated_quantile(c: &MonotoneCubic, t: f64) -> f64 {
    let (xs, ys) = (c.knots(), c.values());
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let k = ys.partition_point(|&y| y <= t).saturating_sub(1).min(xs.len() - 2);
    if ys[k] == t {
        return xs[k];
    }
    // the cubic is monotone on its segment, so the bracket is exact
    let tol = 1e-15 * t;
    invert_monotone(|x| c.eval(x), t, xs[k], xs[k + 1], tol).unwrap_or(0.5 * (xs[k] + xs[k + 1]))
}

/// Parses `(x, y)` rows after a mandatory header line.
pub fn parse_two_column_table(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut rows = Vec::new();
    let mut header_seen = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        if !header_seen {
            header_seen = true;
            if fields.iter().all(|f| f.parse::<f64>().is_ok()) {
                return Err(Error::Input("table is missing its header line".into()));
            }
            continue;
        }
        if fields.len() != 2 {
            return Err(Error::Input(format!(
                "line {}: expected two columns, found {}",
                lineno + 1,
                fields.len()
            )));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| Error::Input(format!("line {}: cannot parse {s:?} as a number", lineno + 1)))
        };
        rows.push((parse(fields[0])?, parse(fields[1])?));
    }
    if rows.is_empty() {
        return Err(Error::Input("table has no data rows".into()));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_law() {
        let d = Distribution::power(1.0).unwrap();
        for &x in &[0.0, 0.2, 0.7, 1.0] {
            assert_eq!(d.cdf(x), x);
            assert_eq!(d.density(x), 1.0);
            assert_eq!(d.quantile(x), x);
        }
    }

    #[test]
    fn power_two() {
        let d = Distribution::power(2.0).unwrap();
        assert!((d.cdf(0.3) - 0.09).abs() < 1e-15);
        assert!((d.density(0.3) - 0.6).abs() < 1e-15);
        assert!((d.quantile(0.49) - 0.7).abs() < 1e-15);
        assert_eq!(d.density_derivative(0.3), Some(2.0));
    }

    #[test]
    fn reflected_power_two() {
        let d = Distribution::reflected_power(2.0).unwrap();
        assert!((d.cdf(0.5) - 0.75).abs() < 1e-15);
        assert!((d.quantile(0.75) - 0.5).abs() < 1e-15);
        // 1 - sqrt(1 - t)
        assert!((d.quantile(0.19) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn shape_must_be_positive() {
        assert!(matches!(Distribution::power(0.0), Err(Error::Parameter(_))));
        assert!(matches!(Distribution::reflected_power(-1.0), Err(Error::Parameter(_))));
        assert!(matches!(Distribution::power(f64::NAN), Err(Error::Parameter(_))));
    }

    #[test]
    fn h_profile_examples() {
        let (h, hp) = Distribution::power(1.0).unwrap().h_profile(0.3).unwrap();
        assert!((h - 1.0).abs() < 1e-15 && hp.abs() < 1e-15);
        let (h, hp) = Distribution::power(2.0).unwrap().h_profile(0.25).unwrap();
        assert!((h - 0.5).abs() < 1e-15 && (hp - 1.0).abs() < 1e-14);
        let (h, _) = Distribution::reflected_power(2.0).unwrap().h_profile(0.75).unwrap();
        assert!((h - 1.5).abs() < 1e-14);
    }

    #[test]
    fn h_at_zero_is_a_domain_error() {
        let d = Distribution::power(2.0).unwrap();
        assert!(matches!(d.h_profile(0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn h_prime_at_one_uses_formula_or_one_sided_difference() {
        let d = Distribution::power(2.0).unwrap();
        let (_, hp) = d.h_profile(1.0).unwrap();
        assert!((hp - 0.5).abs() < 1e-12);
        let hp_fd = d.h_prime_difference(1.0).unwrap();
        assert!((hp_fd - 0.5).abs() < 1e-4);
    }

    #[test]
    fn dominance() {
        let p2 = Distribution::power(2.0).unwrap();
        let p1 = Distribution::power(1.0).unwrap();
        assert!(p2.stochastically_dominates(&p1));
        assert!(!p1.stochastically_dominates(&p2));
        assert!(p1.stochastically_dominates(&p1));
    }

    #[test]
    fn table_parsing() {
        let text = "theta,F\n0,0\n0.5, 0.25 # comment\n\n1 1\n";
        let rows = parse_two_column_table(text).unwrap();
        assert_eq!(rows, vec![(0.0, 0.0), (0.5, 0.25), (1.0, 1.0)]);
        assert!(parse_two_column_table("0 0\n1 1\n").is_err());
        assert!(parse_two_column_table("a b\n0 0 0\n").is_err());
    }

    #[test]
    fn tabulated_requires_monotone_rows() {
        let bad = [(0.0, 0.0), (0.5, 0.6), (0.6, 0.5), (1.0, 1.0)];
        assert!(matches!(Distribution::tabulated(&bad), Err(Error::Input(_))));
        let bad_ends = [(0.0, 0.1), (1.0, 1.0)];
        assert!(Distribution::tabulated(&bad_ends).is_err());
    }

    #[test]
    fn tabulated_square_law_tracks_power_two() {
        let pts: Vec<(f64, f64)> = (0..=40).map(|k| k as f64 / 40.0).map(|x| (x, x * x)).collect();
        let d = Distribution::tabulated(&pts).unwrap();
        for k in 1..20 {
            let t = k as f64 / 20.0;
            assert!((d.quantile(t) - t.sqrt()).abs() < 1e-3);
            assert!((d.cdf(d.quantile(t)) - t).abs() < 1e-12);
        }
    }

    #[test]
    fn reflected_density_mass_with_endpoint_singularity() {
        let d = Distribution::reflected_power(0.5).unwrap();
        assert!((d.total_mass().unwrap() - 1.0).abs() < 1e-10);
    }
}
