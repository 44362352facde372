use super::{Contest, PrizeVector};
use crate::distributions::Monotonicity;
use crate::error::{Error, Result};

const MAJORIZATION_TOL: f64 = 1e-12;
const SIGN_SLACK: f64 = 1e-9;

/// True when every prefix sum of `v` weakly exceeds that of `w` and the
/// totals match. Tolerances scale with `max(1, |Σ v|)`.
pub fn majorizes(v: &PrizeVector, w: &PrizeVector) -> Result<bool> {
    if v.len() != w.len() {
        return Err(Error::Input(format!(
            "cannot compare prize vectors of lengths {} and {}",
            v.len(),
            w.len()
        )));
    }
    let total: f64 = v.values().iter().sum();
    let tol = MAJORIZATION_TOL * total.abs().max(1.0);
    let (mut sv, mut sw) = (0.0, 0.0);
    for (a, b) in v.values().iter().zip(w.values()) {
        sv += a;
        sw += b;
        if sv < sw - tol {
            return Ok(false);
        }
    }
    Ok((sv - sw).abs() <= tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corollary {
    /// One intermediate prize differs; the sign follows the density's trend.
    PrizeRaise { rank: usize },
    /// Same first and last prize, one vector majorizes the other; the sign
    /// follows the trend of `f(θ)θ²/F(θ)²`.
    Competition,
}

/// A comparison result whose hypotheses hold for the pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorollaryCheck {
    pub corollary: Corollary,
    /// Trend of the function the corollary conditions on.
    pub condition: Monotonicity,
    /// Predicted sign of `effort_v − effort_w` (+1 or −1).
    pub predicted_sign: i8,
    /// Whether the computed difference has the predicted weak sign.
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub effort_v: f64,
    pub effort_w: f64,
    pub delta: f64,
    pub checks: Vec<CorollaryCheck>,
}

impl Contest {
    /// Expected effort under `v` and `w`, with the comparison results whose
    /// hypotheses the pair and the distribution satisfy.
    pub fn compare(&self, v: &PrizeVector, w: &PrizeVector) -> Result<ComparisonReport> {
        let effort_v = self.expected_effort(v)?;
        let effort_w = self.expected_effort(w)?;
        let delta = effort_v - effort_w;
        let agrees = |sign: i8| f64::from(sign) * delta >= -SIGN_SLACK;
        let mut checks = Vec::new();

        if let Some((rank, raised)) = single_intermediate_difference(v, w) {
            let condition = self.dist.density_trend();
            let base = match condition {
                Monotonicity::Increasing => Some(1),
                Monotonicity::Decreasing => Some(-1),
                Monotonicity::Indeterminate => None,
            };
            if let Some(base) = base {
                let predicted_sign = if raised { base } else { -base };
                checks.push(CorollaryCheck {
                    corollary: Corollary::PrizeRaise { rank },
                    condition,
                    predicted_sign,
                    agrees: agrees(predicted_sign),
                });
            }
        }

        let (a, b) = (v.values(), w.values());
        let n = a.len();
        if a[0] == b[0] && a[n - 1] == b[n - 1] {
            let direction = if majorizes(v, w)? {
                Some(1)
            } else if majorizes(w, v)? {
                Some(-1)
            } else {
                None
            };
            let condition = self.dist.competition_index_trend();
            let base = match condition {
                Monotonicity::Increasing => Some(-1),
                Monotonicity::Decreasing => Some(1),
                Monotonicity::Indeterminate => None,
            };
            if let (Some(direction), Some(base)) = (direction, base) {
                let predicted_sign = direction * base;
                checks.push(CorollaryCheck {
                    corollary: Corollary::Competition,
                    condition,
                    predicted_sign,
                    agrees: agrees(predicted_sign),
                });
            }
        }

        Ok(ComparisonReport {
            effort_v,
            effort_w,
            delta,
            checks,
        })
    }
}

/// `Some((rank, v_rank > w_rank))` when the vectors differ in exactly one
/// intermediate rank.
fn single_intermediate_difference(v: &PrizeVector, w: &PrizeVector) -> Option<(usize, bool)> {
    let diffs: Vec<usize> = (0..v.len()).filter(|&i| v.values()[i] != w.values()[i]).collect();
    match diffs.as_slice() {
        [i] if *i > 0 && *i < v.len() - 1 => Some((i + 1, v.values()[*i] > w.values()[*i])),
        _ => None,
    }
}
