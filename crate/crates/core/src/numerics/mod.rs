//! Numerical building blocks shared by the rest of the crate.

mod crossing;
mod quadrature;
mod roots;
mod special;

pub use crossing::{crossing_count, crossing_count_with, default_dead_band, Crossing, CrossingReport, SampledCurve};
pub use quadrature::{
    diverges_at_zero, endpoint_exponent, integrate, integrate_piecewise, QuadratureResult, TanhSinh, DEFAULT_TOL,
};
pub use roots::invert_monotone;
pub use special::{beta, binomial, ln_gamma, log_beta};
