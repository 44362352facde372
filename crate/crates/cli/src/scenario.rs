//! Scenario files: TOML with a version field, unknown keys rejected.
//!
//! ```toml
//! version = 1
//! n = 3
//! seed = 7
//! prize_vector = [3.2, 1.6, 1.2]
//!
//! [distribution]
//! family = "power"   # power | reflected_power | tabulated
//! p = 2.0            # or: table = "cdf.csv"
//!
//! [wage]
//! kind = "inverse_productivity"   # inverse_productivity | linear | tabulated
//!
//! [tolerances]
//! quadrature = 1e-12
//! ```
//!
//! Table paths are resolved against the scenario file's directory.

use std::fs;
use std::path::{Path, PathBuf};

use contest_core::contest::{Contest, PrizeVector, CONTEST_TOL};
use contest_core::distributions::Distribution;
use contest_core::grading::{order_statistic_wages, WageSpec};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

pub const SCENARIO_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub version: u32,
    pub n: usize,
    pub seed: Option<u64>,
    pub distribution: Option<DistributionConfig>,
    pub wage: Option<WageConfig>,
    pub prize_vector: Option<Vec<f64>>,
    pub compare_vector: Option<Vec<f64>>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyName {
    Power,
    ReflectedPower,
    Tabulated,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionConfig {
    pub family: FamilyName,
    pub p: Option<f64>,
    pub table: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WageKind {
    InverseProductivity,
    Linear,
    Tabulated,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WageConfig {
    pub kind: WageKind,
    pub table: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub quadrature: Option<f64>,
}

/// A parsed scenario together with the raw bytes of every file it read.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    /// `(name, bytes)` for the scenario file and each referenced table.
    pub inputs: Vec<(String, Vec<u8>)>,
    base: PathBuf,
}

fn read(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::io(path, e))
}

fn text(bytes: &[u8], path: &Path) -> CliResult<String> {
    String::from_utf8(bytes.to_vec()).map_err(|_| CliError::Scenario(format!("{} is not UTF-8", path.display())))
}

impl Scenario {
    pub fn load(path: &Path) -> CliResult<Self> {
        let bytes = read(path)?;
        let config: ScenarioConfig = toml::from_str(&text(&bytes, path)?)
            .map_err(|e| CliError::Scenario(format!("{}: {}", path.display(), e.message())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let mut scenario = Self {
            config,
            inputs: vec![("scenario".into(), bytes)],
            base,
        };
        scenario.validate()?;
        let tables: Vec<PathBuf> = [
            scenario.config.distribution.as_ref().and_then(|d| d.table.clone()),
            scenario.config.wage.as_ref().and_then(|w| w.table.clone()),
        ]
        .into_iter()
        .flatten()
        .collect();
        for t in tables {
            let full = scenario.base.join(&t);
            scenario.inputs.push((t.display().to_string(), read(&full)?));
        }
        Ok(scenario)
    }

    fn validate(&self) -> CliResult<()> {
        let c = &self.config;
        if c.version != SCENARIO_VERSION {
            return Err(CliError::Scenario(format!(
                "unsupported version {} (expected {SCENARIO_VERSION})",
                c.version
            )));
        }
        if c.n < 2 {
            return Err(CliError::Scenario(format!("n must be at least 2, got {}", c.n)));
        }
        for (key, v) in [("prize_vector", &c.prize_vector), ("compare_vector", &c.compare_vector)] {
            if let Some(v) = v {
                if v.len() != c.n {
                    return Err(CliError::Scenario(format!("{key} has {} entries, n = {}", v.len(), c.n)));
                }
            }
        }
        if c.prize_vector.is_some() && c.wage.is_some() {
            return Err(CliError::Scenario("give either prize_vector or wage, not both".into()));
        }
        if let Some(d) = &c.distribution {
            match (d.family, d.p, &d.table) {
                (FamilyName::Tabulated, None, Some(_)) => {}
                (FamilyName::Tabulated, _, _) => {
                    return Err(CliError::Scenario("tabulated distribution needs `table` and no `p`".into()))
                }
                (_, Some(_), None) => {}
                _ => return Err(CliError::Scenario("parametric distribution needs `p` and no `table`".into())),
            }
        }
        if let Some(w) = &c.wage {
            if (w.kind == WageKind::Tabulated) != w.table.is_some() {
                return Err(CliError::Scenario("`table` is required for, and only for, a tabulated wage".into()));
            }
        }
        Ok(())
    }

    fn input_text(&self, path: &Path) -> CliResult<String> {
        let name = path.display().to_string();
        let (_, bytes) = self.inputs.iter().find(|(n, _)| *n == name).expect("tables are read at load");
        text(bytes, path)
    }

    pub fn n(&self) -> usize {
        self.config.n
    }

    pub fn distribution(&self) -> CliResult<Distribution> {
        let d = self
            .config
            .distribution
            .as_ref()
            .ok_or_else(|| CliError::Scenario("this command needs a [distribution] section".into()))?;
        Ok(match (d.family, d.p, &d.table) {
            (FamilyName::Power, Some(p), _) => Distribution::power(p)?,
            (FamilyName::ReflectedPower, Some(p), _) => Distribution::reflected_power(p)?,
            (_, _, Some(t)) => Distribution::from_table_text(&self.input_text(t)?)?,
            _ => unreachable!("validated at load"),
        })
    }

    pub fn wage(&self) -> CliResult<Option<WageSpec>> {
        let Some(w) = &self.config.wage else {
            return Ok(None);
        };
        Ok(Some(match (w.kind, &w.table) {
            (WageKind::InverseProductivity, _) => WageSpec::InverseProductivity,
            (WageKind::Linear, _) => WageSpec::Linear,
            (WageKind::Tabulated, Some(t)) => WageSpec::from_table_text(&self.input_text(t)?)?,
            (WageKind::Tabulated, None) => unreachable!("validated at load"),
        }))
    }

    pub fn quadrature_tol(&self, flag: Option<f64>) -> f64 {
        flag.or(self.config.tolerances.quadrature).unwrap_or(CONTEST_TOL)
    }

    pub fn contest(&self, tol: f64) -> CliResult<Contest> {
        Ok(Contest::new(self.distribution()?, self.n())?.with_tolerance(tol)?)
    }

    /// The scenario's prize vector, or the rank-revealing wages when a wage is given.
    pub fn prizes(&self, contest: &Contest) -> CliResult<PrizeVector> {
        match (&self.config.prize_vector, self.wage()?) {
            (Some(v), _) => Ok(PrizeVector::new(v.clone())?),
            (None, Some(w)) => {
                let vstar = order_statistic_wages(contest.distribution(), &w, self.n())?;
                Ok(PrizeVector::new(vstar.values().to_vec())?)
            }
            (None, None) => Err(CliError::Scenario("this command needs prize_vector or [wage]".into())),
        }
    }

    pub fn compare_prizes(&self) -> CliResult<PrizeVector> {
        let v = self
            .config
            .compare_vector
            .clone()
            .ok_or_else(|| CliError::Scenario("this command needs compare_vector".into()))?;
        Ok(PrizeVector::new(v)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<ScenarioConfig, toml::de::Error> {
        toml::from_str(s)
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(parse("version = 1\nn = 3\ncolour = 1\n").is_err());
        assert!(parse("version = 1\nn = 3\n[distribution]\nfamily = \"power\"\np = 2\nq = 1\n").is_err());
        assert!(parse("version = 1\nn = 3\n[distribution]\nfamily = \"lognormal\"\np = 2\n").is_err());
    }

    #[test]
    fn minimal_scenario() {
        let c = parse("version = 1\nn = 4\n").unwrap();
        assert_eq!(c.n, 4);
        assert!(c.distribution.is_none() && c.tolerances.quadrature.is_none());
    }
}
