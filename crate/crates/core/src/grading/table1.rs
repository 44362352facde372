use super::{optimize_grading, GradingContest, HCase, SearchMode, WageSpec};
use crate::contest::{Contest, MarginalEffects};
use crate::distributions::HClassification;
use crate::error::{Error, Result};

const SLACK: f64 = 1e-9;

/// Shape of `h`, ordering of marginal effects and optimal grading structure
/// for one distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct Table1Row {
    pub distribution: String,
    pub classification: HClassification,
    pub case: Option<HCase>,
    pub lambdas: MarginalEffects,
    /// Computed order, e.g. `λ1 > λ2 > 0 > λ3`.
    pub observed_order: String,
    /// Whether the computed effects follow the case's ordering pattern.
    pub order_matches: bool,
    /// Brute-force optimum, when the wage integrals converge.
    pub optimum: Option<GradingContest>,
    pub optimum_effort: Option<f64>,
    /// Whether the optimum has the case's structure.
    pub structure_matches: Option<bool>,
}

/// Recomputes one row; `wage` drives the optimal-structure column.
pub fn table1_row(contest: &Contest, wage: &WageSpec) -> Result<Table1Row> {
    let classification = contest.distribution().classify_h()?;
    let case = HCase::from_classification(&classification);
    let lambdas = contest.marginal_effects()?.clone();
    let order_matches = case.is_some_and(|c| follows_pattern(c, &lambdas.lambdas));
    let (optimum, optimum_effort) = match optimize_grading(contest, wage, SearchMode::BruteForce) {
        Ok(r) => (Some(r.best), Some(r.best_effort)),
        Err(Error::Integrability { .. }) => (None, None),
        Err(e) => return Err(e),
    };
    let structure_matches = match (case, &optimum) {
        (Some(c), Some(g)) => Some(c.matches(g)),
        _ => None,
    };
    Ok(Table1Row {
        distribution: contest.distribution().label(),
        classification,
        case,
        observed_order: describe_order(&lambdas.lambdas),
        lambdas,
        order_matches,
        optimum,
        optimum_effort,
        structure_matches,
    })
}

fn decreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[0] > w[1] - SLACK)
}

/// Checks the ordering pattern of marginal effects implied by `case`.
pub(crate) fn follows_pattern(case: HCase, l: &[f64]) -> bool {
    let n = l.len();
    let (first, last) = (l[0], l[n - 1]);
    let interior = &l[1..n - 1];
    let ends = first > SLACK && last < -SLACK && interior.iter().all(|&x| first > x - SLACK);
    let rev: Vec<f64> = interior.iter().rev().copied().collect();
    let shape = match case {
        HCase::IncreasingConcave => interior.iter().all(|&x| x > -SLACK) && decreasing(interior),
        HCase::IncreasingConvex => interior.iter().all(|&x| x > -SLACK) && decreasing(&rev),
        HCase::DecreasingConcave => interior.iter().all(|&x| x < SLACK) && decreasing(interior),
        HCase::DecreasingConvex => interior.iter().all(|&x| x < SLACK) && decreasing(&rev),
    };
    ends && shape
}

/// Ranks sorted by effect, with `0` marking the sign change.
pub fn describe_order(l: &[f64]) -> String {
    let mut idx: Vec<usize> = (0..l.len()).collect();
    idx.sort_by(|&a, &b| l[b].total_cmp(&l[a]).then(a.cmp(&b)));
    let mut parts = Vec::with_capacity(l.len() + 1);
    let mut zero_placed = false;
    for i in idx {
        if !zero_placed && l[i] < 0.0 {
            parts.push("0".to_string());
            zero_placed = true;
        }
        parts.push(format!("λ{}", i + 1));
    }
    if !zero_placed {
        parts.push("0".to_string());
    }
    parts.join(" > ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::Distribution;

    #[test]
    fn order_description() {
        assert_eq!(describe_order(&[0.5, 0.2, -0.7]), "λ1 > λ2 > 0 > λ3");
        assert_eq!(describe_order(&[4.5, -3.0, -1.5]), "λ1 > 0 > λ3 > λ2");
    }

    #[test]
    fn parametric_rows() {
        let rows = [
            (Distribution::power(2.0).unwrap(), HCase::IncreasingConcave),
            (Distribution::reflected_power(0.5).unwrap(), HCase::IncreasingConvex),
            (Distribution::reflected_power(2.0).unwrap(), HCase::DecreasingConcave),
            (Distribution::power(0.75).unwrap(), HCase::DecreasingConvex),
        ];
        for (d, case) in rows {
            let c = Contest::new(d, 6).unwrap();
            let row = table1_row(&c, &WageSpec::Linear).unwrap();
            assert_eq!(row.case, Some(case));
            assert!(row.order_matches, "{}: {}", row.distribution, row.observed_order);
            assert_eq!(row.structure_matches, Some(true), "{}: {:?}", row.distribution, row.optimum);
        }
    }

    #[test]
    fn divergent_wage_leaves_structure_blank() {
        let c = Contest::new(Distribution::power(0.75).unwrap(), 4).unwrap();
        let row = table1_row(&c, &WageSpec::InverseProductivity).unwrap();
        assert!(row.optimum.is_none() && row.structure_matches.is_none());
    }
}
