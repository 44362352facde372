use std::cmp::Ordering;

use rayon::prelude::*;

use super::{enumerate_gradings, induced_prize_vector, order_statistic_wages, GradingContest, OrderStatWages, WageSpec};
use crate::contest::Contest;
use crate::distributions::{Curvature, HClassification, Monotonicity};
use crate::error::{Error, Result};

/// Efforts within this relative distance of a cluster's best are tied.
pub const TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    BruteForce,
    Structured,
}

impl SearchMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchMode::BruteForce => "bruteforce",
            SearchMode::Structured => "structured",
        }
    }
}

/// The four shape cases of `h` that pin down the optimal grading structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HCase {
    IncreasingConcave,
    IncreasingConvex,
    DecreasingConcave,
    DecreasingConvex,
}

impl HCase {
    pub fn from_classification(c: &HClassification) -> Option<Self> {
        use Curvature::*;
        use Monotonicity::*;
        match (c.monotonicity, c.curvature) {
            (Increasing, Concave) => Some(HCase::IncreasingConcave),
            (Increasing, Convex) => Some(HCase::IncreasingConvex),
            (Decreasing, Concave) => Some(HCase::DecreasingConcave),
            (Decreasing, Convex) => Some(HCase::DecreasingConvex),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            HCase::IncreasingConcave => "increasing_concave",
            HCase::IncreasingConvex => "increasing_convex",
            HCase::DecreasingConcave => "decreasing_concave",
            HCase::DecreasingConvex => "decreasing_convex",
        }
    }

    /// Human-readable form of the optimal structure.
    pub fn structure(self) -> &'static str {
        match self {
            HCase::IncreasingConcave => "(1,2,...,n)",
            HCase::IncreasingConvex => "(1,n-1,n)",
            HCase::DecreasingConcave => "(1,2,...,k,n)",
            HCase::DecreasingConvex => "(1,k,n)",
        }
    }

    /// Candidate contests with the case's structure.
    pub fn candidates(self, n: usize) -> Vec<GradingContest> {
        let make = |cuts: Vec<usize>| GradingContest::new(cuts).expect("structured cuts are increasing");
        if n == 2 {
            return vec![make(vec![1, 2])];
        }
        match self {
            HCase::IncreasingConcave => vec![GradingContest::rank_revealing(n)],
            HCase::IncreasingConvex => vec![make(vec![1, n - 1, n])],
            HCase::DecreasingConcave => (1..n).map(|k| make((1..=k).chain([n]).collect())).collect(),
            HCase::DecreasingConvex => std::iter::once(make(vec![1, n]))
                .chain((2..n).map(|k| make(vec![1, k, n])))
                .collect(),
        }
    }

    /// Whether `g` has this case's structure.
    pub fn matches(self, g: &GradingContest) -> bool {
        self.candidates(g.n()).contains(g)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradingSearchResult {
    pub best: GradingContest,
    pub best_effort: f64,
    /// Every evaluated contest, best first.
    pub ranking: Vec<(GradingContest, f64)>,
    pub mode: SearchMode,
    /// Structured mode found no determinate shape and searched exhaustively.
    pub fell_back: bool,
    pub classification: Option<HClassification>,
    pub vstar: OrderStatWages,
}

/// Finds the grading contest with the highest expected effort.
///
/// Brute force scores every contest; structured mode scores only contests of
/// the form dictated by the shape of `h` and falls back to brute force when
/// the shape is indeterminate. Ties (relative `1e-9`) go to fewer grades, then
/// to the lexicographically smallest cut sequence.
pub fn optimize_grading(contest: &Contest, wage: &WageSpec, mode: SearchMode) -> Result<GradingSearchResult> {
    let n = contest.n();
    let vstar = order_statistic_wages(contest.distribution(), wage, n)?;
    let lambdas = contest.marginal_effects()?;
    let (candidates, classification, fell_back) = match mode {
        SearchMode::BruteForce => (enumerate_gradings(n)?, None, false),
        SearchMode::Structured => {
            let c = contest.distribution().classify_h()?;
            match HCase::from_classification(&c) {
                Some(case) => (case.candidates(n), Some(c), false),
                None => (enumerate_gradings(n)?, Some(c), true),
            }
        }
    };
    let scored = candidates
        .into_par_iter()
        .map(|g| {
            let v = induced_prize_vector(&g, &vstar)?;
            Ok((g, lambdas.dot(v.values())))
        })
        .collect::<Result<Vec<_>>>()?;
    let ranking = rank(scored);
    let (best, best_effort) = ranking
        .first()
        .cloned()
        .ok_or_else(|| Error::Input("no grading contests to evaluate".into()))?;
    Ok(GradingSearchResult {
        best,
        best_effort,
        ranking,
        mode,
        fell_back,
        classification,
        vstar,
    })
}

fn prefer(a: &GradingContest, b: &GradingContest) -> Ordering {
    a.grades().cmp(&b.grades()).then_with(|| a.cuts().cmp(b.cuts()))
}

/// Sorts by effort, then reorders each tie cluster by [`prefer`].
fn rank(mut scored: Vec<(GradingContest, f64)>) -> Vec<(GradingContest, f64)> {
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| prefer(&a.0, &b.0)));
    let mut out = Vec::with_capacity(scored.len());
    let mut start = 0;
    while start < scored.len() {
        let head = scored[start].1;
        let tol = TIE_TOL * head.abs();
        let end = start + scored[start..].iter().take_while(|(_, e)| head - e <= tol).count();
        let mut cluster = scored[start..end].to_vec();
        cluster.sort_by(|a, b| prefer(&a.0, &b.0));
        out.extend(cluster);
        start = end;
    }
    out
}
