use std::collections::BTreeMap;

use contest_core::contest::{majorizes, Contest, Corollary, EquilibriumCurve, DEFAULT_THETA_MIN};
use contest_core::distributions::Distribution;
use contest_core::export::{Cell, Table};
use contest_core::extensions::{budget_allocation_power_utility, screening_optimize};
use contest_core::grading::{optimize_grading, order_statistic_wages, table1_row, SearchMode, WageSpec};
use contest_core::numerics::{crossing_count, SampledCurve};
use contest_core::verify::{best_response_regret, default_regret_grids, monte_carlo_ranks, REGRET_FRACTION};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult, EXIT_NUMERIC, EXIT_VALIDATION};
use crate::scenario::{FamilyName, Scenario};

const CURVE_POINTS: usize = 256;
const SIMULATION_SAMPLES: usize = 100_000;
const SIMULATION_TYPE: f64 = 0.5;

/// Everything a command produced, before it is printed or written.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub command: &'static str,
    pub tables: Vec<(&'static str, Table)>,
    pub metrics: BTreeMap<String, Value>,
    pub tolerances: BTreeMap<String, f64>,
    pub passed: bool,
    /// Exit status when `passed` is false.
    pub failure_code: u8,
}

impl Outcome {
    fn new(command: &'static str, tol: f64) -> Self {
        Self {
            command,
            tables: Vec::new(),
            metrics: BTreeMap::new(),
            tolerances: BTreeMap::from([("quadrature".to_string(), tol)]),
            passed: true,
            failure_code: EXIT_NUMERIC,
        }
    }

    fn metric(&mut self, key: &str, value: impl Into<Value>) {
        self.metrics.insert(key.to_string(), value.into());
    }
}

fn key_value(rows: Vec<(&str, Cell)>) -> Table {
    let mut t = Table::new(["quantity", "value"]);
    for (k, v) in rows {
        t.push(vec![k.into(), v]);
    }
    t
}

fn finite(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(x.to_string())
    }
}

pub fn dist_classify(s: &Scenario, tol: f64) -> CliResult<Outcome> {
    let mut out = Outcome::new("dist classify", tol);
    let d = s.distribution()?;
    let a1 = d.validate_assumption1();
    let mut rows = vec![("distribution", Cell::from(d.label())), ("assumption1", a1.passed.into())];
    match d.classify_h() {
        Ok(c) => {
            rows.push(("monotonicity", c.monotonicity.as_str().into()));
            rows.push(("curvature", c.curvature.as_str().into()));
            rows.push(("method", c.method.as_str().into()));
            rows.push(("flat", c.flat.into()));
            out.metric("monotonicity", c.monotonicity.as_str());
            out.metric("curvature", c.curvature.as_str());
            out.metric("method", c.method.as_str());
            out.metric("flat", c.flat);
        }
        Err(e) => rows.push(("classification", format!("unavailable: {e}").into())),
    }
    out.tables.push(("classification", key_value(rows)));
    let mut tail = Table::new(["theta", "density_times_cdf", "quantile_ratio"]);
    for t in &a1.tail_samples {
        tail.push(vec![t.theta.into(), t.density_times_cdf.into(), t.quantile_ratio.into()]);
    }
    out.tables.push(("assumption1", tail));
    out.metric("distribution", d.label());
    out.metric("assumption1", a1.passed);
    out.metric("decay_exponents", vec![finite(a1.decay_exponents.0), finite(a1.decay_exponents.1)]);
    out.passed = a1.passed;
    out.failure_code = EXIT_VALIDATION;
    Ok(out)
}

pub fn effort_lambdas(s: &Scenario, tol: f64) -> CliResult<Outcome> {
    let mut out = Outcome::new("effort lambdas", tol);
    let c = s.contest(tol)?;
    let l = c.marginal_effects()?;
    let mut t = Table::new(["rank", "lambda", "method"]);
    for (i, (&x, m)) in l.lambdas.iter().zip(&l.methods).enumerate() {
        t.push(vec![(i + 1).into(), x.into(), m.as_str().into()]);
    }
    out.tables.push(("lambdas", t));
    out.metric("distribution", c.distribution().label());
    out.metric("n", c.n());
    out.metric("lambdas", l.lambdas.clone());
    out.metric("sum", l.sum());
    Ok(out)
}

pub fn effort_curve(s: &Scenario, tol: f64) -> CliResult<Outcome> {
    let mut out = Outcome::new("effort curve", tol);
    let c = s.contest(tol)?;
    let v = s.prizes(&c)?;
    let w = s.config.compare_vector.as_ref().map(|_| s.compare_prizes()).transpose()?;
    let grid = EquilibriumCurve::uniform_grid(DEFAULT_THETA_MIN, CURVE_POINTS);
    let a = c.equilibrium_curve(&v, &grid)?;
    let b = w.as_ref().map(|w| c.equilibrium_curve(w, &grid)).transpose()?;
    let mut t = match b {
        Some(_) => Table::new(["theta", "effort", "effort_compare"]),
        None => Table::new(["theta", "effort"]),
    };
    for (k, (&x, &g)) in a.grid.iter().zip(&a.efforts).enumerate() {
        let mut row = vec![x.into(), g.into()];
        if let Some(b) = &b {
            row.push(b.efforts[k].into());
        }
        t.push(row);
    }
    out.tables.push(("curve", t));
    out.metric("prize_vector", v.values().to_vec());
    out.metric("expected_effort", c.expected_effort(&v)?);
    out.metric(
        "effort_monotone",
        v.is_constant() || a.efforts.windows(2).all(|p| p[1] < p[0]),
    );
    if let Some(b) = &b {
        let r = crossing_count(
            &SampledCurve::new(a.grid.clone(), a.efforts.clone())?,
            &SampledCurve::new(b.grid.clone(), b.efforts.clone())?,
        )?;
        out.metric("crossings", r.count);
        out.metric("crossing_locations", r.locations.iter().map(|l| l.estimate).collect::<Vec<_>>());
    }
    Ok(out)
}

pub fn effort_compare(s: &Scenario, tol: f64) -> CliResult<Outcome> {
    let mut out = Outcome::new("effort compare", tol);
    let c = s.contest(tol)?;
    let v = s.prizes(&c)?;
    let w = s.compare_prizes()?;
    let r = c.compare(&v, &w)?;
    out.tables.push((
        "comparison",
        key_value(vec![
            ("effort_v", r.effort_v.into()),
            ("effort_w", r.effort_w.into()),
            ("delta", r.delta.into()),
        ]),
    ));
    let mut t = Table::new(["corollary", "condition", "predicted_sign", "agrees"]);
    for k in &r.checks {
        let name = match k.corollary {
            Corollary::PrizeRaise { rank } => format!("prize_raise(rank={rank})"),
            Corollary::Competition => "competition".to_string(),
        };
        t.push(vec![name.into(), k.condition.as_str().into(), Cell::Int(k.predicted_sign.into()), k.agrees.into()]);
    }
    out.tables.push(("corollaries", t));
    out.metric("effort_v", r.effort_v);
    out.metric("effort_w", r.effort_w);
    out.metric("delta", r.delta);
    out.metric("majorizes", majorizes(&v, &w)?);
    out.metric("corollaries_agree", r.checks.iter().all(|k| k.agrees));
    Ok(out)
}

fn required_wage(s: &Scenario) -> CliResult<WageSpec> {
    s.wage()?.ok_or_else(|| CliError::Scenario("this command needs a [wage] section".into()))
}

pub fn grading_wages(s: &Scenario, tol: f64) -> CliResult<Outcome> {
    let mut out = Outcome::new("grading wages", tol);
    let d = s.distribution()?;
    let w = required_wage(s)?;
    let v = order_statistic_wages(&d, &w, s.n())?;
    let mut t = Table::new(["rank", "vstar"]);
    for (i, &x) in v.values().iter().enumerate() {
        t.push(vec![(i + 1).into(), x.into()]);
    }
    out.tables.push(("wages", t));
    out.metric("wage", w.label());
    out.metric("vstar", v.values().to_vec());
    Ok(out)
}

pub fn grading_optimize(s: &Scenario, tol: f64, mode: SearchMode) -> CliResult<Outcome> {
    let mut out = Outcome::new("grading optimize", tol);
    let c = s.contest(tol)?;
    let w = required_wage(s)?;
    let r = optimize_grading(&c, &w, mode)?;
    let mut t = Table::new(["cuts", "effort", "rank"]);
    for (k, (g, e)) in r.ranking.iter().enumerate() {
        t.push(vec![g.to_string().into(), (*e).into(), (k + 1).into()]);
    }
    t.note(format!("winner {}", r.best));
    out.tables.push(("ranking", t));
    out.tolerances.insert("tie".into(), contest_core::grading::TIE_TOL);
    out.metric("winner", r.best.to_string());
    out.metric("effort", r.best_effort);
    out.metric("mode", r.mode.as_str());
    out.metric("fell_back", r.fell_back);
    out.metric("vstar", r.vstar.values().to_vec());
    Ok(out)
}

pub fn grading_table1(s: &Scenario, tol: f64, ps: &[f64]) -> CliResult<Outcome> {
    let mut out = Outcome::new("grading table1", tol);
    let w = s.wage()?.unwrap_or(WageSpec::Linear);
    let ps = if ps.is_empty() { vec![0.75, 2.0] } else { ps.to_vec() };
    let mut dists = Vec::new();
    for &p in &ps {
        if p > 0.5 {
            dists.push(Distribution::power(p)?);
        }
        dists.push(Distribution::reflected_power(p)?);
    }
    let mut t = Table::new([
        "distribution",
        "h_shape",
        "order",
        "order_matches",
        "optimum",
        "optimum_effort",
        "structure",
        "structure_matches",
    ]);
    let mut all_match = true;
    for d in dists {
        let label = d.label();
        let c = Contest::new(d, s.n())?.with_tolerance(tol)?;
        let row = table1_row(&c, &w)?;
        let na = || Cell::from("n/a");
        all_match &= row.order_matches && row.structure_matches.unwrap_or(true);
        t.push(vec![
            label.into(),
            format!("{},{}", row.classification.monotonicity.as_str(), row.classification.curvature.as_str()).into(),
            row.observed_order.clone().into(),
            row.order_matches.into(),
            row.optimum.as_ref().map_or_else(na, |g| g.to_string().into()),
            row.optimum_effort.map_or_else(na, Cell::from),
            row.case.map_or_else(na, |c| c.structure().into()),
            row.structure_matches.map_or_else(na, Cell::from),
        ]);
    }
    out.tables.push(("table1", t));
    out.metric("wage", w.label());
    out.metric("p", ps);
    out.metric("all_rows_match", all_match);
    Ok(out)
}

pub fn budget_allocate(s: &Scenario, tol: f64, r: Option<f64>, budget: f64) -> CliResult<Outcome> {
    let mut out = Outcome::new("budget allocate", tol);
    let c = s.contest(tol)?;
    let rs: Vec<f64> = match r {
        Some(r) => vec![r],
        None => (1..=9).map(|k| k as f64 / 10.0).collect(),
    };
    let mut header = vec!["r".to_string()];
    header.extend((1..=s.n()).map(|i| format!("v{i}")));
    let mut t = Table::new(header);
    let mut cases = Vec::new();
    let mut local = true;
    for &r in &rs {
        let a = budget_allocation_power_utility(&c, budget, r)?;
        let mut row = vec![Cell::from(r)];
        row.extend(a.prizes.values().iter().map(|&x| Cell::from(x)));
        t.push(row);
        cases.push(a.case.as_str());
        local &= a.is_local_maximum();
        if rs.len() == 1 {
            out.metric("utility_effort", a.utility_effort);
            out.metric("max_perturbation_gain", a.max_perturbation_gain);
            out.metric("prizes", a.prizes.values().to_vec());
        }
    }
    out.tables.push(("allocation", t));
    out.metric("budget", budget);
    out.metric("cases", cases);
    out.metric("local_maximum", local);
    out.passed = local;
    Ok(out)
}

pub fn screening_sweep(s: &Scenario, tol: f64, p: Option<f64>) -> CliResult<Outcome> {
    let mut out = Outcome::new("screening sweep", tol);
    let p = match (p, &s.config.distribution) {
        (Some(p), _) => p,
        (None, Some(d)) if d.family == FamilyName::Power => d.p.expect("validated"),
        _ => return Err(CliError::Usage("screening sweep needs --p or a power distribution".into())),
    };
    let sweep = screening_optimize(p, s.n())?;
    let mut t = Table::new(["k", "objective"]);
    for r in &sweep.table {
        t.push(vec![r.k.into(), r.objective.into()]);
    }
    t.note(format!("k_star {}", sweep.k_star));
    out.tables.push(("screening", t));
    out.metric("p", p);
    out.metric("n", s.n());
    out.metric("k_star", sweep.k_star);
    Ok(out)
}

pub fn verify_equilibrium(s: &Scenario, tol: f64, seed: u64) -> CliResult<Outcome> {
    let mut out = Outcome::new("verify equilibrium", tol);
    let c = s.contest(tol)?;
    let v = s.prizes(&c)?;
    let (tg, dg) = default_regret_grids();
    let r = best_response_regret(&c, &v, &tg, &dg)?;
    let mc = monte_carlo_ranks(c.distribution(), c.n(), SIMULATION_TYPE, SIMULATION_SAMPLES, seed)?;
    out.tables.push((
        "regret",
        key_value(vec![
            ("max_regret", r.max_regret.into()),
            ("threshold", r.threshold.into()),
            ("worst_type", r.worst_type.into()),
            ("worst_deviation", r.worst_deviation.into()),
            ("type_points", r.type_points.into()),
            ("deviation_points", r.deviation_points.into()),
            ("effort_monotone", r.effort_monotone.into()),
        ]),
    ));
    let mut t = Table::new(["rank", "count", "empirical", "analytic"]);
    for i in 0..c.n() {
        t.push(vec![(i + 1).into(), Cell::Int(mc.counts[i] as i64), mc.empirical[i].into(), mc.analytic[i].into()]);
    }
    out.tables.push(("ranks", t));
    out.tables.push((
        "simulation",
        key_value(vec![
            ("theta", SIMULATION_TYPE.into()),
            ("samples", mc.samples.into()),
            ("seed", i64::try_from(seed).map_or_else(|_| Cell::from(seed.to_string()), Cell::Int)),
            ("chi_square", mc.chi_square.into()),
            ("critical_value", mc.critical_value.into()),
            ("degrees_of_freedom", mc.degrees_of_freedom.into()),
        ]),
    ));
    out.tolerances.insert("regret_fraction".into(), REGRET_FRACTION);
    out.metric("prize_vector", v.values().to_vec());
    out.metric("max_regret", r.max_regret);
    out.metric("regret_threshold", r.threshold);
    out.metric("regret_passed", r.passed());
    out.metric("seed", seed);
    out.metric("samples", mc.samples);
    out.metric("theta", SIMULATION_TYPE);
    out.metric("chi_square", mc.chi_square);
    out.metric("critical_value", mc.critical_value);
    out.metric("degrees_of_freedom", mc.degrees_of_freedom);
    out.metric("ranks_passed", mc.passed());
    out.passed = r.passed() && mc.passed();
    Ok(out)
}
