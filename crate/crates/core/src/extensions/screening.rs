use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{binomial, log_beta};

/// Objectives within this relative distance of the maximum count as tied.
const TIE_TOL: f64 = 1e-12;

/// Information revealed per unit of expected effort when the top `k` of `n`
/// agents share a uniform prize and `F(θ) = θ^p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScreeningReport {
    pub n: usize,
    pub p: f64,
    pub k: usize,
    /// Prior mean of `θ`.
    pub mu: f64,
    /// Posterior mean of `θ` among prize winners.
    pub mu1: f64,
    /// Posterior mean of `θ` among the rest.
    pub mu0: f64,
    pub z: f64,
    /// Variance of the posterior means.
    pub variance: f64,
    /// Expected-effort normalizer `C(n−1,k−1)(n−k)β(k+1−1/p, n−k)`, used as given.
    pub denominator: f64,
    pub objective: f64,
}

/// Screening objective for `k` prizes.
pub fn screening_objective(p: f64, n: usize, k: usize) -> Result<ScreeningReport> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::Domain(format!("screening needs p ≥ 1, got {p}")));
    }
    if n < 2 || k < 1 || k >= n {
        return Err(Error::Input(format!("prize count k = {k} must lie in 1..{}", n.saturating_sub(1))));
    }
    let (nf, kf) = (n as f64, k as f64);
    let mu = p / (p + 1.0);
    let z = (log_beta(kf + 1.0 + 1.0 / p, nf - kf)? - log_beta(kf, nf - kf)?).exp();
    let mu1 = nf / kf * mu * z;
    let mu0 = nf / (nf - kf) * mu * (1.0 - z);
    let variance = mu * mu * (nf * z - kf).powi(2) / (kf * (nf - kf));
    let denominator = binomial(n - 1, k - 1) * (nf - kf) * log_beta(kf + 1.0 - 1.0 / p, nf - kf)?.exp();
    Ok(ScreeningReport {
        n,
        p,
        k,
        mu,
        mu1,
        mu0,
        z,
        variance,
        denominator,
        objective: variance / denominator,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScreeningSweep {
    pub k_star: usize,
    /// One report per `k = 1..n−1`.
    pub table: Vec<ScreeningReport>,
}

/// Best prize count; near-ties (relative `1e-12`) go to the smaller `k`.
pub fn screening_optimize(p: f64, n: usize) -> Result<ScreeningSweep> {
    if n < 2 {
        return Err(Error::Input(format!("need n ≥ 2, got {n}")));
    }
    let table = (1..n)
        .into_par_iter()
        .map(|k| screening_objective(p, n, k))
        .collect::<Result<Vec<_>>>()?;
    let best = table.iter().map(|r| r.objective).fold(f64::NEG_INFINITY, f64::max);
    let k_star = table
        .iter()
        .find(|r| r.objective >= best - TIE_TOL * best.abs())
        .map(|r| r.k)
        .expect("table is non-empty");
    Ok(ScreeningSweep { k_star, table })
}
