//! Symmetric equilibria of rank-order contests with private ability.
//!
//! Agents draw a marginal cost of effort `θ ∈ [0, 1]` from a common law `F`,
//! exert effort, and are ranked by it. The crate computes the symmetric
//! equilibrium effort for any nonincreasing prize vector, the expected effect
//! of each prize on effort, and the effort-maximizing way to grade agents when
//! a grade is worth the expected wage of the ranks it reveals.
//!
//! ```
//! use contest_core::{contest::{Contest, PrizeVector}, distributions::Distribution};
//!
//! let contest = Contest::new(Distribution::power(2.0)?, 3)?;
//! let v = PrizeVector::new(vec![3.2, 1.6, 1.2])?;
//! assert!((contest.expected_effort(&v)? - 17.6 / 15.0).abs() < 1e-12);
//! # Ok::<(), contest_core::Error>(())
//! ```

pub mod contest;
pub mod distributions;
pub mod error;
pub mod export;
pub mod extensions;
pub mod grading;
pub mod numerics;
pub mod verify;

pub use error::{Error, Result};
