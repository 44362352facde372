use rayon::prelude::*;

use super::{bernstein_derivative, Contest, PrizeVector};
use crate::distributions::Family;
use crate::error::{Error, Result};
use crate::numerics::{beta, binomial, integrate_piecewise};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaMethod {
    ClosedForm,
    Quadrature,
}

impl LambdaMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            LambdaMethod::ClosedForm => "closed_form",
            LambdaMethod::Quadrature => "quadrature",
        }
    }
}

/// Expected marginal effects `λᵢ = E[mᵢ(θ)] = −∫₀¹ pᵢ′(t) h(t) dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalEffects {
    pub lambdas: Vec<f64>,
    pub methods: Vec<LambdaMethod>,
}

impl MarginalEffects {
    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    /// `λᵢ` for rank `i` (1-based).
    pub fn get(&self, i: usize) -> f64 {
        self.lambdas[i - 1]
    }

    pub fn sum(&self) -> f64 {
        self.lambdas.iter().sum()
    }

    /// `Σ vᵢ λᵢ`.
    pub fn dot(&self, v: &[f64]) -> f64 {
        v.iter().zip(&self.lambdas).map(|(a, b)| a * b).sum()
    }
}

/// Closed form of `λᵢ` for `F(θ) = θ^p`, `p > ½`.
pub fn closed_form_lambda_power(p: f64, n: usize, i: usize) -> Result<f64> {
    if !(p > 0.5) || !p.is_finite() {
        return Err(Error::Domain(format!("closed-form marginal effects need p > 1/2, got {p}")));
    }
    if n < 2 || i < 1 || i > n {
        return Err(Error::Input(format!("rank {i} out of range for n = {n}")));
    }
    let nf = n as f64;
    if i == n {
        return Ok(-(nf - 1.0) / (nf - 1.0 / p));
    }
    if i == 1 {
        return if p > 1.0 {
            Ok((p - 1.0) / p * beta(1.0 - 1.0 / p, nf)?)
        } else {
            Ok((nf - 1.0) * beta(2.0 - 1.0 / p, nf - 1.0)?)
        };
    }
    let fi = i as f64;
    Ok((p - 1.0) / p * binomial(n - 1, i - 1) * beta(fi - 1.0 / p, nf - fi + 1.0)?)
}

impl Contest {
    /// Marginal effects, from closed forms when the family admits them and by
    /// quadrature otherwise. Cached after the first call.
    pub fn marginal_effects(&self) -> Result<&MarginalEffects> {
        if let Some(m) = self.lambdas.get() {
            return Ok(m);
        }
        let computed = match self.dist.family() {
            Family::Power { p } => {
                let lambdas = (1..=self.n)
                    .map(|i| closed_form_lambda_power(*p, self.n, i))
                    .collect::<Result<Vec<_>>>()?;
                MarginalEffects {
                    methods: vec![LambdaMethod::ClosedForm; self.n],
                    lambdas,
                }
            }
            _ => self.marginal_effects_quadrature()?,
        };
        Ok(self.lambdas.get_or_init(|| computed))
    }

    /// Marginal effects by quadrature of `−pᵢ′ h` for every rank.
    pub fn marginal_effects_quadrature(&self) -> Result<MarginalEffects> {
        let lambdas = (1..=self.n)
            .into_par_iter()
            .map(|i| self.lambda_quadrature(i))
            .collect::<Result<Vec<_>>>()?;
        Ok(MarginalEffects {
            methods: vec![LambdaMethod::Quadrature; self.n],
            lambdas,
        })
    }

    fn lambda_quadrature(&self, i: usize) -> Result<f64> {
        let n = self.n;
        let d = &self.dist;
        let r = integrate_piecewise(
            |t| -bernstein_derivative(n, i, t) * d.h_unchecked(t),
            0.0,
            1.0,
            &d.probability_breakpoints(),
            self.tol,
        )?;
        Ok(r.value)
    }

    /// `E[g_v(θ)] = Σ vᵢ λᵢ`.
    pub fn expected_effort(&self, v: &PrizeVector) -> Result<f64> {
        self.check_prizes(v)?;
        Ok(self.marginal_effects()?.dot(v.values()))
    }
}
