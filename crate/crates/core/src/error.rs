use thiserror::Error;

/// Errors produced by the contest engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid model parameter (for example a non-positive shape).
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Malformed or inconsistent input data.
    #[error("invalid input: {0}")]
    Input(String),

    /// Quadrature did not reach the requested tolerance within its refinement budget.
    #[error("quadrature failure: best estimate {estimate:e} with error bound {error:e}")]
    Quadrature { estimate: f64, error: f64 },

    /// Root finding target lies outside the values at the bracket ends.
    #[error("target {target} not bracketed: g({lo}) = {g_lo}, g({hi}) = {g_hi}")]
    Bracket {
        target: f64,
        lo: f64,
        hi: f64,
        g_lo: f64,
        g_hi: f64,
    },

    /// A conditional wage integral diverges for the given rank.
    #[error("wage integral for rank {rank} is not finite")]
    Integrability { rank: usize },

    /// Marginal effects are ordered in a way the budget allocation does not cover.
    #[error("unsupported ordering of marginal effects: {0}")]
    UnsupportedOrdering(String),

    /// A computed quantity violated an invariant it is guaranteed to satisfy.
    #[error("numeric check failed: {0}")]
    Numeric(String),
}

impl Error {
    /// True for failures of the numerical machinery rather than of the inputs.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Quadrature { .. } | Error::Numeric(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
