//! Experiment configuration read from TOML.

use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use fewbound_core::symrep::spin_sector_to_partition;
use fewbound_core::{
    AngularChoice, Partition, PotentialSpec, PotentialTerm, SolverConfig, Statistics,
    SymmetrySector, SystemSpec,
};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Table1,
    Fig1,
    Qdot,
    Solve,
    Bound,
    Spectrum,
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Experiment::Table1 => "table1",
            Experiment::Fig1 => "fig1",
            Experiment::Qdot => "qdot",
            Experiment::Solve => "solve",
            Experiment::Bound => "bound",
            Experiment::Spectrum => "spectrum",
        };
        f.write_str(s)
    }
}

/// Named solver budgets. `Full` is the library default.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Budget {
    Quick,
    #[default]
    Standard,
    Full,
}

impl Budget {
    pub fn solver(self) -> SolverConfig {
        let full = SolverConfig::default();
        match self {
            Budget::Quick => SolverConfig {
                candidates: 16,
                refinements: 0,
                max_basis: 40,
                max_basis_four: 80,
                scan_basis: 12,
                stall_tolerance: 1e-6,
                ..full
            },
            Budget::Standard => SolverConfig {
                refinements: 1,
                max_basis: 80,
                max_basis_four: 150,
                stall_tolerance: 1e-6,
                ..full
            },
            Budget::Full => full,
        }
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Budget::Quick => "quick",
            Budget::Standard => "standard",
            Budget::Full => "full",
        };
        f.write_str(s)
    }
}

/// A physical system as written in a config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub n: usize,
    pub statistics: Statistics,
    /// `2S` for spin-1/2 fermions.
    #[serde(default)]
    pub two_s: Option<usize>,
    /// Orbital partition; alternative to `two_s`.
    #[serde(default)]
    pub orbital: Option<Vec<usize>>,
    #[serde(default = "one")]
    pub mass: f64,
    pub potential: Vec<PotentialTerm>,
    #[serde(default = "scan")]
    pub angular: AngularChoice,
}

fn one() -> f64 {
    1.0
}

fn scan() -> AngularChoice {
    AngularChoice::Scan
}

impl SystemConfig {
    pub fn sector(&self) -> Result<SymmetrySector> {
        let sector = match (self.statistics, self.two_s, &self.orbital) {
            (_, Some(_), Some(_)) => bail!("give either two_s or orbital, not both"),
            (Statistics::Fermion, Some(two_s), None) => {
                SymmetrySector::spin_half_fermions(self.n, two_s)?
            }
            (Statistics::Boson, Some(_), None) => bail!("two_s applies to spin-1/2 fermions only"),
            (Statistics::Boson, None, None) => SymmetrySector::spinless_bosons(self.n),
            (Statistics::Fermion, None, None) => {
                // ground spin sector
                SymmetrySector::spin_half_fermions(self.n, self.n % 2)?
            }
            (stats, None, Some(rows)) => {
                SymmetrySector::for_orbital(stats, Partition::new(rows.clone())?)
            }
        };
        if sector.n() != self.n {
            bail!("sector describes {} particles, n = {}", sector.n(), self.n);
        }
        Ok(sector)
    }

    pub fn system(&self) -> Result<SystemSpec> {
        let potential = PotentialSpec::new(self.potential.clone())?;
        Ok(SystemSpec::new(
            self.mass,
            potential,
            self.sector()?,
            self.angular,
        )?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CouplingReading {
    /// Every column uses the listed coupling.
    Literal,
    /// Four-body columns use `3g/4`, so their three-body ingredients run at `g`.
    ThreeBody,
}

/// Bound compared against for the boson columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BosonBound {
    /// `N/(N−2) E_{N−1}((N−1)m/(N−2))`.
    Naive,
    /// `N/(N−2) E_{N−1}(Nm/(N−1))`.
    TranslationInvariant,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Table1Config {
    pub coupling_reading: CouplingReading,
    pub boson_bound: BosonBound,
    /// Restrict to these potential labels (`Y`, `G`, `E`); empty means all.
    pub potentials: Vec<String>,
    /// Restrict to these columns, written `3B0`, `3F1/2`, …; empty means all.
    pub columns: Vec<String>,
}

impl Default for Table1Config {
    fn default() -> Self {
        Table1Config {
            coupling_reading: CouplingReading::ThreeBody,
            boson_bound: BosonBound::TranslationInvariant,
            potentials: Vec::new(),
            columns: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig1Config {
    pub q_min: f64,
    pub q_max: f64,
    pub points: usize,
    /// Explicit q values; overrides the uniform grid when non-empty.
    pub q_values: Vec<f64>,
    /// `(N, 2S)` panels.
    pub panels: Vec<(usize, usize)>,
}

impl Default for Fig1Config {
    fn default() -> Self {
        Fig1Config {
            q_min: 1.0,
            q_max: 3.0,
            points: 21,
            q_values: Vec::new(),
            panels: vec![(3, 1), (3, 3), (4, 0), (4, 4)],
        }
    }
}

impl Fig1Config {
    pub fn grid(&self) -> Vec<f64> {
        if !self.q_values.is_empty() {
            return self.q_values.clone();
        }
        if self.points <= 1 {
            return vec![self.q_min];
        }
        let step = (self.q_max - self.q_min) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| self.q_min + step * i as f64)
            .collect()
    }
}

/// A quantum dot: `N` electrons in a harmonic trap with Coulomb repulsion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QdotSpec {
    pub n: usize,
    #[serde(default = "one")]
    pub mass: f64,
    pub omega: f64,
    #[serde(default = "one")]
    pub charge: f64,
    pub two_s: usize,
    #[serde(default = "scan")]
    pub angular: AngularChoice,
}

impl QdotSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.mass > 0.0 && self.omega > 0.0 && self.charge >= 0.0) {
            bail!("quantum dot needs positive mass and frequency and a non-negative charge");
        }
        spin_sector_to_partition(self.n, self.two_s)?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QdotConfig {
    pub cases: Vec<QdotSpec>,
}

impl Default for QdotConfig {
    fn default() -> Self {
        let case = |n, omega, two_s, angular: &str| QdotSpec {
            n,
            mass: 1.0,
            omega,
            charge: 1.0,
            two_s,
            angular: AngularChoice::try_from(angular.to_string()).expect("valid sector"),
        };
        QdotConfig {
            cases: vec![
                case(3, 0.01, 3, "1+"),
                case(3, 10.0, 3, "1+"),
                case(4, 0.01, 4, "0-"),
                case(4, 10.0, 4, "0-"),
            ],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumConfig {
    pub mass: f64,
    pub potential: Vec<PotentialTerm>,
    pub max_l: usize,
    pub levels: usize,
    /// Particle numbers for the cumulated energies.
    pub fillings: Vec<usize>,
    pub omega: usize,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        SpectrumConfig {
            mass: 1.0,
            potential: vec![PotentialTerm::harmonic(1.0)],
            max_l: 3,
            levels: 3,
            fillings: vec![2, 3, 4],
            omega: 2,
        }
    }
}

fn default_seed() -> u64 {
    1
}

fn default_out() -> PathBuf {
    PathBuf::from("results")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    #[serde(default)]
    pub budget: Budget,
    /// Overrides applied on top of the budget preset.
    #[serde(default)]
    pub solver: toml::Table,
    #[serde(default)]
    pub system: Option<SystemConfig>,
    #[serde(default)]
    pub table1: Table1Config,
    #[serde(default)]
    pub fig1: Fig1Config,
    #[serde(default)]
    pub qdot: QdotConfig,
    #[serde(default)]
    pub spectrum: SpectrumConfig,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        ExperimentConfig {
            experiment,
            seed: default_seed(),
            out: default_out(),
            budget: Budget::default(),
            solver: toml::Table::new(),
            system: None,
            table1: Table1Config::default(),
            fig1: Fig1Config::default(),
            qdot: QdotConfig::default(),
            spectrum: SpectrumConfig::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Budget preset with the file's overrides and the run seed applied.
    pub fn solver_config(&self) -> Result<SolverConfig> {
        let serde_json::Value::Object(mut map) = serde_json::to_value(self.budget.solver())? else {
            unreachable!("solver settings serialize to a map")
        };
        for (k, v) in &self.solver {
            if !map.contains_key(k) {
                bail!("unknown solver setting `{k}`");
            }
            map.insert(k.clone(), serde_json::to_value(v)?);
        }
        map.insert("seed".into(), self.seed.into());
        let config: SolverConfig = serde_json::from_value(serde_json::Value::Object(map))?;
        config.validate()?;
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_file() {
        let text = r#"
            experiment = "solve"
            seed = 42
            budget = "quick"
            [solver]
            candidates = 7
            [system]
            n = 3
            statistics = "fermion"
            two_s = 1
            potential = [{ kind = "gaussian", coupling = -10.0 }]
            angular = "1-"
        "#;
        let c = ExperimentConfig::from_toml(text).unwrap();
        let s = c.solver_config().unwrap();
        assert_eq!(s.candidates, 7);
        assert_eq!(s.seed, 42);
        assert_eq!(s.max_basis, Budget::Quick.solver().max_basis);
        let sys = c.system.unwrap().system().unwrap();
        assert_eq!(sys.sector.orbital, Partition::new(vec![2, 1]).unwrap());
        assert_eq!(sys.angular.to_string(), "1-");
    }

    #[test]
    fn rejects_unknown_solver_keys() {
        let c = ExperimentConfig::from_toml("experiment = \"fig1\"\n[solver]\ncandidate = 3\n")
            .unwrap();
        assert!(c.solver_config().is_err());
    }

    #[test]
    fn fig1_grid() {
        let g = Fig1Config::default().grid();
        assert_eq!(g.len(), 21);
        assert_eq!(g[0], 1.0);
        assert!((g[10] - 2.0).abs() < 1e-15);
        assert!((g[20] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn default_config_round_trips() {
        let c = ExperimentConfig::new(Experiment::Qdot);
        let text = toml::to_string(&c).unwrap();
        assert_eq!(ExperimentConfig::from_toml(&text).unwrap(), c);
    }
}
