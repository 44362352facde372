use crate::contest::{Contest, PrizeVector};
use crate::error::{Error, Result};
use crate::numerics::invert_monotone;

/// Relative size of the transfers used to confirm local optimality.
const PERTURBATION: f64 = 1e-6;
const GAIN_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AllocationCase {
    /// Positive, strictly decreasing interior effects: prizes for the top `n−1`.
    DecreasingPrizes,
    /// Negative interior effects: the whole budget goes to the winner.
    WinnerTakeAll,
}

impl AllocationCase {
    pub fn as_str(self) -> &'static str {
        match self {
            AllocationCase::DecreasingPrizes => "decreasing_prizes",
            AllocationCase::WinnerTakeAll => "winner_take_all",
        }
    }
}

/// Effort-maximizing split of a budget when agents value prizes as `u(v) = v^r`.
#[derive(Debug, Clone, PartialEq)]
pub struct BudgetAllocation {
    pub prizes: PrizeVector,
    pub r: f64,
    pub budget: f64,
    pub v1: f64,
    /// `cᵢ^{1/(1−r)}` for ranks `2..n−1`, `cᵢ = λᵢ/λ₁`.
    pub ratios: Vec<f64>,
    pub case: AllocationCase,
    /// `Σ u(vᵢ) λᵢ` at the allocation.
    pub utility_effort: f64,
    /// Largest change of the objective over pairwise `±ε` transfers.
    pub max_perturbation_gain: f64,
}

impl BudgetAllocation {
    pub fn is_local_maximum(&self) -> bool {
        self.max_perturbation_gain <= GAIN_SLACK
    }
}

fn utility_effort(v: &[f64], lambdas: &[f64], r: f64) -> f64 {
    v.iter().zip(lambdas).map(|(&x, &l)| if x > 0.0 { x.powf(r) * l } else { 0.0 }).sum()
}

/// Maximizes `Σ vᵢ^r λᵢ` subject to `Σ vᵢ = B`.
///
/// Covers the two orderings of marginal effects with a known solution: every
/// interior effect positive and strictly decreasing, or every interior effect
/// negative. Anything else is [`Error::UnsupportedOrdering`].
pub fn budget_allocation_power_utility(contest: &Contest, budget: f64, r: f64) -> Result<BudgetAllocation> {
    if !(budget > 0.0 && budget.is_finite()) {
        return Err(Error::Parameter(format!("budget must be positive, got {budget}")));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Parameter(format!("utility exponent must lie in (0, 1), got {r}")));
    }
    let lambdas = &contest.marginal_effects()?.lambdas;
    let n = lambdas.len();
    let interior = &lambdas[1..n - 1];
    let positive_decreasing = interior.iter().all(|&l| l > 0.0)
        && lambdas[..n - 1].windows(2).all(|w| w[0] > w[1]);
    let negative = !interior.is_empty() && interior.iter().all(|&l| l < 0.0);

    let (values, v1, ratios, case) = if positive_decreasing {
        let ratios: Vec<f64> = interior.iter().map(|&l| (l / lambdas[0]).powf(1.0 / (1.0 - r))).collect();
        let scale = 1.0 + ratios.iter().sum::<f64>();
        let v1 = invert_monotone(|x| x * scale, budget, 0.0, budget, 1e-15 * budget)?;
        let mut values = Vec::with_capacity(n);
        values.push(v1);
        values.extend(ratios.iter().map(|a| a * v1));
        values.push(0.0);
        (values, v1, ratios, AllocationCase::DecreasingPrizes)
    } else if negative {
        let mut values = vec![0.0; n];
        values[0] = budget;
        (values, budget, Vec::new(), AllocationCase::WinnerTakeAll)
    } else {
        return Err(Error::UnsupportedOrdering(format!(
            "interior effects {interior:?} are neither all positive and decreasing nor all negative"
        )));
    };

    let utility = utility_effort(&values, lambdas, r);
    let eps = PERTURBATION * budget;
    let mut max_gain = f64::NEG_INFINITY;
    for from in 0..n {
        if values[from] < eps {
            continue;
        }
        for to in (0..n).filter(|&j| j != from) {
            let mut moved = values.clone();
            moved[from] -= eps;
            moved[to] += eps;
            max_gain = max_gain.max(utility_effort(&moved, lambdas, r) - utility);
        }
    }

    Ok(BudgetAllocation {
        prizes: PrizeVector::new(values)?,
        r,
        budget,
        v1,
        ratios,
        case,
        utility_effort: utility,
        max_perturbation_gain: max_gain,
    })
}
