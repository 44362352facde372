//! Tail conditions and the shape of `h`.

use super::{Distribution, Family};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Curvature {
    Concave,
    Convex,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassificationMethod {
    ClosedForm,
    Numeric,
}

impl Monotonicity {
    pub fn as_str(self) -> &'static str {
        match self {
            Monotonicity::Increasing => "increasing",
            Monotonicity::Decreasing => "decreasing",
            Monotonicity::Indeterminate => "indeterminate",
        }
    }
}

impl Curvature {
    pub fn as_str(self) -> &'static str {
        match self {
            Curvature::Concave => "concave",
            Curvature::Convex => "convex",
            Curvature::Indeterminate => "indeterminate",
        }
    }
}

impl ClassificationMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassificationMethod::ClosedForm => "closed_form",
            ClassificationMethod::Numeric => "numeric",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HClassification {
    pub monotonicity: Monotonicity,
    pub curvature: Curvature,
    pub method: ClassificationMethod,
    /// `|h′| < 1e-9` on the whole grid: `h` is constant and every label holds weakly.
    pub flat: bool,
}

impl HClassification {
    /// True when both labels are determinate.
    pub fn is_determinate(&self) -> bool {
        self.monotonicity != Monotonicity::Indeterminate && self.curvature != Curvature::Indeterminate
    }

    /// Same labels, or either side is flat (a constant `h` satisfies every label).
    pub fn agrees_with(&self, other: &HClassification) -> bool {
        self.flat
            || other.flat
            || (self.monotonicity == other.monotonicity && self.curvature == other.curvature)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailSample {
    pub theta: f64,
    /// `f(θ)F(θ)`
    pub density_times_cdf: f64,
    /// `θ² / F⁻¹(θ)`
    pub quantile_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Assumption1Report {
    pub passed: bool,
    pub tail_samples: Vec<TailSample>,
    /// Fitted decay exponents `α` of `s(θ) ~ θ^α` over the last ten probes.
    pub decay_exponents: (f64, f64),
}

const PROBE_FIRST: i32 = 5;
const PROBE_LAST: i32 = 30;
const TAIL_THRESHOLD: f64 = 1e-4;
const FIT_SPAN: usize = 10;
/// Minimum fitted exponent accepted as convergence when the probe grid is too
/// coarse to push a slowly vanishing tail under the threshold.
const MIN_DECAY_EXPONENT: f64 = 0.01;

const CLASSIFY_POINTS: usize = 512;
const CLASSIFY_SLACK: f64 = 1e-9;

impl Distribution {
    /// Probes `f(θ)F(θ)` and `θ²/F⁻¹(θ)` at `θ = 2⁻⁵, …, 2⁻³⁰`.
    ///
    /// Passes when both sequences decrease strictly toward zero and each either
    /// ends below `1e-4` or decays at a fitted rate `θ^α` with `α > 0.01`.
    pub fn validate_assumption1(&self) -> Assumption1Report {
        let tail_samples: Vec<TailSample> = (PROBE_FIRST..=PROBE_LAST)
            .map(|j| {
                let theta = (-j as f64).exp2();
                TailSample {
                    theta,
                    density_times_cdf: self.density(theta) * self.cdf(theta),
                    quantile_ratio: theta * theta / self.quantile(theta),
                }
            })
            .collect();
        let first: Vec<f64> = tail_samples.iter().map(|s| s.density_times_cdf).collect();
        let second: Vec<f64> = tail_samples.iter().map(|s| s.quantile_ratio).collect();
        let thetas: Vec<f64> = tail_samples.iter().map(|s| s.theta).collect();
        let a1 = decay_exponent(&thetas, &first);
        let a2 = decay_exponent(&thetas, &second);
        let passed = vanishes(&first, a1) && vanishes(&second, a2);
        Assumption1Report {
            passed,
            tail_samples,
            decay_exponents: (a1, a2),
        }
    }

    /// Errors unless the tail conditions hold.
    pub fn require_assumption1(&self) -> Result<()> {
        if self.validate_assumption1().passed {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "{} violates the lower-tail conditions (f·F → 0, θ²/F⁻¹(θ) → 0)",
                self.label()
            )))
        }
    }

    /// Monotonicity and curvature of `h`: closed form for the parametric
    /// families, grid test for tables.
    pub fn classify_h(&self) -> Result<HClassification> {
        use Curvature::*;
        use Monotonicity::*;
        let (monotonicity, curvature, p) = match self.family() {
            Family::Power { p } => {
                if *p <= 0.5 {
                    return Err(Error::Domain(format!(
                        "power({p}) has p ≤ 1/2, where the lower-tail conditions fail"
                    )));
                }
                if *p >= 1.0 {
                    (Increasing, Concave, *p)
                } else {
                    (Decreasing, Convex, *p)
                }
            }
            Family::ReflectedPower { p } => {
                if *p >= 1.0 {
                    (Decreasing, Concave, *p)
                } else {
                    (Increasing, Convex, *p)
                }
            }
            Family::Tabulated(_) => return self.classify_h_numeric(),
        };
        Ok(HClassification {
            monotonicity,
            curvature,
            method: ClassificationMethod::ClosedForm,
            flat: p == 1.0,
        })
    }

    /// Sign test of `h′` and of second differences of `h` on `t = k/512`.
    pub fn classify_h_numeric(&self) -> Result<HClassification> {
        let ts: Vec<f64> = (1..=CLASSIFY_POINTS).map(|k| k as f64 / CLASSIFY_POINTS as f64).collect();
        let mut hs = Vec::with_capacity(ts.len());
        let mut slopes = Vec::with_capacity(ts.len());
        for &t in &ts {
            let (h, hp) = self.h_profile(t)?;
            hs.push(h);
            slopes.push(hp);
        }
        let flat = slopes.iter().all(|d| d.abs() < CLASSIFY_SLACK);
        let scale = hs.iter().fold(1.0_f64, |m, h| m.max(h.abs()));
        let slack = CLASSIFY_SLACK * scale;
        let monotonicity = if slopes.iter().all(|&d| d >= -CLASSIFY_SLACK) {
            Monotonicity::Increasing
        } else if slopes.iter().all(|&d| d <= CLASSIFY_SLACK) {
            Monotonicity::Decreasing
        } else {
            Monotonicity::Indeterminate
        };
        let second: Vec<f64> = hs.windows(3).map(|w| w[0] - 2.0 * w[1] + w[2]).collect();
        let curvature = if second.iter().all(|&c| c <= slack) {
            Curvature::Concave
        } else if second.iter().all(|&c| c >= -slack) {
            Curvature::Convex
        } else {
            Curvature::Indeterminate
        };
        Ok(HClassification {
            monotonicity,
            curvature,
            method: ClassificationMethod::Numeric,
            flat,
        })
    }

    /// Direction of the density on an interior grid.
    pub fn density_trend(&self) -> Monotonicity {
        trend(interior_grid().map(|x| self.density(x)))
    }

    /// Direction of `f(θ)θ²/F(θ)²` on an interior grid.
    pub fn competition_index_trend(&self) -> Monotonicity {
        trend(interior_grid().map(|x| {
            let fx = self.cdf(x);
            self.density(x) * x * x / (fx * fx)
        }))
    }
}

fn interior_grid() -> impl Iterator<Item = f64> {
    (1..CLASSIFY_POINTS).map(|k| k as f64 / CLASSIFY_POINTS as f64)
}

fn trend(values: impl Iterator<Item = f64>) -> Monotonicity {
    let values: Vec<f64> = values.collect();
    let scale = values.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let slack = CLASSIFY_SLACK * scale;
    let steps: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    if steps.iter().all(|&d| d >= -slack) {
        Monotonicity::Increasing
    } else if steps.iter().all(|&d| d <= slack) {
        Monotonicity::Decreasing
    } else {
        Monotonicity::Indeterminate
    }
}

fn vanishes(values: &[f64], exponent: f64) -> bool {
    let finite = values.iter().all(|v| v.is_finite() && *v >= 0.0);
    let decreasing = values.windows(2).all(|w| w[1] < w[0]);
    let last = *values.last().unwrap();
    finite && decreasing && (last < TAIL_THRESHOLD || exponent > MIN_DECAY_EXPONENT)
}

/// Least-squares slope of `log s` against `log θ` over the last probes.
fn decay_exponent(thetas: &[f64], values: &[f64]) -> f64 {
    let start = thetas.len() - FIT_SPAN;
    let pts: Vec<(f64, f64)> = thetas[start..]
        .iter()
        .zip(&values[start..])
        .filter(|(_, v)| **v > 0.0 && v.is_finite())
        .map(|(t, v)| (t.ln(), v.ln()))
        .collect();
    if pts.len() < 2 {
        // identically zero tails vanish as fast as anything can
        return if values[start..].iter().all(|v| *v == 0.0) {
            f64::INFINITY
        } else {
            f64::NAN
        };
    }
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let (sxy, sxx) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
    sxy / sxx
}
