//! Command-line front end: loads a scenario, runs one analysis, prints a
//! fixed-precision table and optionally writes a reproduction bundle.

pub mod commands;
pub mod error;
pub mod output;
pub mod scenario;

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use contest_core::grading::SearchMode;

pub use commands::Outcome;
pub use error::{CliError, CliResult, EXIT_NUMERIC, EXIT_USAGE, EXIT_VALIDATION};
use scenario::Scenario;

#[derive(Debug, Parser)]
#[command(name = "contest", version, about = "Equilibria, prize effects and grading for rank-order contests")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Group,
}

#[derive(Debug, Subcommand)]
pub enum Group {
    /// Distribution diagnostics.
    #[command(subcommand)]
    Dist(DistCommand),
    /// Equilibrium effort and marginal prize effects.
    #[command(subcommand)]
    Effort(EffortCommand),
    /// Grading contests with signaling wages.
    #[command(subcommand)]
    Grading(GradingCommand),
    /// Budget split under concave prize utility.
    #[command(subcommand)]
    Budget(BudgetCommand),
    /// Number of equal prizes that best screens agents.
    #[command(subcommand)]
    Screening(ScreeningCommand),
    /// Independent equilibrium checks.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Debug, Subcommand)]
pub enum DistCommand {
    /// Shape of t/F⁻¹(t) and the tail conditions.
    Classify(Common),
}

#[derive(Debug, Subcommand)]
pub enum EffortCommand {
    /// Expected marginal effect of each prize.
    Lambdas(Common),
    /// Equilibrium effort on a grid of types.
    Curve(Common),
    /// Expected effort under prize_vector versus compare_vector.
    Compare(Common),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Brute,
    Structured,
}

#[derive(Debug, Subcommand)]
pub enum GradingCommand {
    /// Expected wage of each order statistic.
    Wages(Common),
    /// Effort-maximizing grading contest.
    Optimize {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "brute")]
        mode: ModeArg,
    },
    /// Shape, effect ordering and optimal grading for power and reflected power laws.
    Table1 {
        #[command(flatten)]
        common: Common,
        /// Exponents, comma separated (default 0.75,2).
        #[arg(long, value_delimiter = ',')]
        p: Vec<f64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum BudgetCommand {
    /// Optimal prizes for u(v) = v^r; sweeps r = 0.1..0.9 when --r is absent.
    Allocate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long = "B", default_value_t = 1.0)]
        budget: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum ScreeningCommand {
    /// Objective for every prize count k.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        p: Option<f64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Deviation regret and simulated rank frequencies.
    Equilibrium(Common),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Scenario file (TOML).
    pub scenario: PathBuf,
    /// Directory for full-precision tables and summary.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Quadrature tolerance override.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Seed for simulations.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Suppress terminal output.
    #[arg(long)]
    pub quiet: bool,
}

impl Group {
    fn common(&self) -> &Common {
        match self {
            Group::Dist(DistCommand::Classify(c))
            | Group::Effort(EffortCommand::Lambdas(c) | EffortCommand::Curve(c) | EffortCommand::Compare(c))
            | Group::Grading(GradingCommand::Wages(c))
            | Group::Verify(VerifyCommand::Equilibrium(c)) => c,
            Group::Grading(GradingCommand::Optimize { common, .. } | GradingCommand::Table1 { common, .. })
            | Group::Budget(BudgetCommand::Allocate { common, .. })
            | Group::Screening(ScreeningCommand::Sweep { common, .. }) => common,
        }
    }

    /// Arguments that affect results, in canonical form.
    fn arguments(&self, s: &Scenario) -> BTreeMap<String, String> {
        let c = self.common();
        let mut a = BTreeMap::new();
        if let Some(t) = c.tol {
            a.insert("tol".into(), format!("{t:?}"));
        }
        if let Some(seed) = c.seed.or(s.config.seed) {
            a.insert("seed".into(), seed.to_string());
        }
        match self {
            Group::Grading(GradingCommand::Optimize { mode, .. }) => {
                a.insert("mode".into(), format!("{mode:?}").to_lowercase());
            }
            Group::Grading(GradingCommand::Table1 { p, .. }) if !p.is_empty() => {
                a.insert("p".into(), format!("{p:?}"));
            }
            Group::Budget(BudgetCommand::Allocate { r, budget, .. }) => {
                if let Some(r) = r {
                    a.insert("r".into(), format!("{r:?}"));
                }
                a.insert("B".into(), format!("{budget:?}"));
            }
            Group::Screening(ScreeningCommand::Sweep { p: Some(p), .. }) => {
                a.insert("p".into(), format!("{p:?}"));
            }
            _ => {}
        }
        a
    }
}

/// What a finished command hands back to `main`.
#[derive(Debug)]
pub struct Run {
    pub outcome: Outcome,
    pub stdout: String,
}

impl Run {
    pub fn exit_code(&self) -> u8 {
        if self.outcome.passed {
            0
        } else {
            self.outcome.failure_code
        }
    }
}

pub fn run(cli: &Cli) -> CliResult<Run> {
    let common = cli.command.common();
    if let Some(t) = common.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::Usage(format!("--tol must be positive, got {t}")));
        }
    }
    let s = Scenario::load(&common.scenario)?;
    let tol = s.quadrature_tol(common.tol);
    let seed = common.seed.or(s.config.seed).unwrap_or(0);
    let outcome = match &cli.command {
        Group::Dist(DistCommand::Classify(_)) => commands::dist_classify(&s, tol)?,
        Group::Effort(EffortCommand::Lambdas(_)) => commands::effort_lambdas(&s, tol)?,
        Group::Effort(EffortCommand::Curve(_)) => commands::effort_curve(&s, tol)?,
        Group::Effort(EffortCommand::Compare(_)) => commands::effort_compare(&s, tol)?,
        Group::Grading(GradingCommand::Wages(_)) => commands::grading_wages(&s, tol)?,
        Group::Grading(GradingCommand::Optimize { mode, .. }) => {
            let mode = match mode {
                ModeArg::Brute => SearchMode::BruteForce,
                ModeArg::Structured => SearchMode::Structured,
            };
            commands::grading_optimize(&s, tol, mode)?
        }
        Group::Grading(GradingCommand::Table1 { p, .. }) => commands::grading_table1(&s, tol, p)?,
        Group::Budget(BudgetCommand::Allocate { r, budget, .. }) => commands::budget_allocate(&s, tol, *r, *budget)?,
        Group::Screening(ScreeningCommand::Sweep { p, .. }) => commands::screening_sweep(&s, tol, *p)?,
        Group::Verify(VerifyCommand::Equilibrium(_)) => commands::verify_equilibrium(&s, tol, seed)?,
    };
    if let Some(dir) = &common.out {
        output::write_bundle(dir, &outcome, &cli.command.arguments(&s), &s.inputs)?;
    }
    let stdout = if common.quiet { String::new() } else { output::render(&outcome) };
    Ok(Run { outcome, stdout })
}
