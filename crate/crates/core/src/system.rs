//! Specification of an N-body system.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fewbody::AngularSector;
use crate::potentials::PotentialSpec;
use crate::symrep::SymmetrySector;

/// Requested orbital angular momentum and parity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum AngularChoice {
    Fixed(AngularSector),
    /// Search the supported sectors and keep the lowest.
    Scan,
}

impl TryFrom<String> for AngularChoice {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("scan") {
            Ok(AngularChoice::Scan)
        } else {
            Ok(AngularChoice::Fixed(s.parse()?))
        }
    }
}

impl From<AngularChoice> for String {
    fn from(a: AngularChoice) -> String {
        a.to_string()
    }
}

impl fmt::Display for AngularChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AngularChoice::Fixed(s) => s.fmt(f),
            AngularChoice::Scan => f.write_str("scan"),
        }
    }
}

/// `H = Σ p²/2m + Σ_{i<j} V(r_ij)` for `N` identical particles in a given
/// symmetry sector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub n: usize,
    pub mass: f64,
    pub potential: PotentialSpec,
    pub sector: SymmetrySector,
    pub angular: AngularChoice,
}

impl SystemSpec {
    pub fn new(
        mass: f64,
        potential: PotentialSpec,
        sector: SymmetrySector,
        angular: AngularChoice,
    ) -> Result<Self> {
        let s = SystemSpec {
            n: sector.n(),
            mass,
            potential,
            sector,
            angular,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::TooFewParticles { n: self.n, min: 2 });
        }
        if self.n > 4 {
            return Err(Error::InvalidArgument(format!(
                "the few-body solver handles at most 4 particles, got {}",
                self.n
            )));
        }
        if !(self.mass > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "mass must be positive, got {}",
                self.mass
            )));
        }
        if self.sector.n() != self.n {
            return Err(Error::InvalidSector(format!(
                "sector {} does not describe {} particles",
                self.sector, self.n
            )));
        }
        self.sector.validate()?;
        self.potential.validate()
    }

    pub fn with_angular(&self, angular: AngularChoice) -> Self {
        SystemSpec {
            angular,
            ..self.clone()
        }
    }
}
