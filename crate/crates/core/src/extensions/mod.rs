//! Budget allocation under concave prize utility, and the screening objective.

mod budget;
mod screening;

pub use budget::{budget_allocation_power_utility, AllocationCase, BudgetAllocation};
pub use screening::{screening_objective, screening_optimize, ScreeningReport, ScreeningSweep};
