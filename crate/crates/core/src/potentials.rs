//! Central pair potentials and their Gaussian radial moments.
//!
//! Every term is `coupling · f(r / range)` with a positive shape `f`:
//!
//! | kind          | f(x)        |
//! |---------------|-------------|
//! | `Yukawa`      | e^{−x} / x  |
//! | `Gaussian`    | e^{−x²}     |
//! | `Exponential` | e^{−x}      |
//! | `PowerLaw(q)` | x^q         |
//! | `Coulomb`     | 1 / x       |
//! | `HarmonicPair`| x²          |
//!
//! so an attractive short-range well has a negative coupling.

use std::f64::consts::PI;
use std::fmt;

use libm::tgamma as gamma;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::integrate_half_line;
use crate::special::gauss_exp_moments_into;

/// Largest number of radial moments `K_0 … K_{j_max}` served in closed form.
pub const MAX_MOMENTS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PotentialKind {
    Yukawa,
    Gaussian,
    Exponential,
    #[serde(rename = "powerlaw")]
    PowerLaw {
        q: f64,
    },
    Coulomb,
    #[serde(rename = "harmonic")]
    HarmonicPair,
}

impl PotentialKind {
    pub fn is_short_range(self) -> bool {
        matches!(
            self,
            PotentialKind::Yukawa | PotentialKind::Gaussian | PotentialKind::Exponential
        )
    }

    /// Exponent of the power-law shape, if the term is one.
    pub fn power(self) -> Option<f64> {
        match self {
            PotentialKind::PowerLaw { q } => Some(q),
            PotentialKind::HarmonicPair => Some(2.0),
            PotentialKind::Coulomb => Some(-1.0),
            _ => None,
        }
    }

    pub fn label(self) -> String {
        match self {
            PotentialKind::Yukawa => "yukawa".into(),
            PotentialKind::Gaussian => "gaussian".into(),
            PotentialKind::Exponential => "exponential".into(),
            PotentialKind::PowerLaw { q } => format!("powerlaw({q})"),
            PotentialKind::Coulomb => "coulomb".into(),
            PotentialKind::HarmonicPair => "harmonic".into(),
        }
    }
}

fn default_range() -> f64 {
    1.0
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialTerm {
    #[serde(flatten)]
    pub kind: PotentialKind,
    pub coupling: f64,
    #[serde(default = "default_range")]
    pub range: f64,
}

impl PotentialTerm {
    pub fn new(kind: PotentialKind, coupling: f64) -> Self {
        PotentialTerm {
            kind,
            coupling,
            range: 1.0,
        }
    }

    pub fn with_range(mut self, range: f64) -> Self {
        self.range = range;
        self
    }

    pub fn yukawa(coupling: f64) -> Self {
        Self::new(PotentialKind::Yukawa, coupling)
    }

    pub fn gaussian(coupling: f64) -> Self {
        Self::new(PotentialKind::Gaussian, coupling)
    }

    pub fn exponential(coupling: f64) -> Self {
        Self::new(PotentialKind::Exponential, coupling)
    }

    pub fn power_law(q: f64, coupling: f64) -> Self {
        Self::new(PotentialKind::PowerLaw { q }, coupling)
    }

    pub fn coulomb(coupling: f64) -> Self {
        Self::new(PotentialKind::Coulomb, coupling)
    }

    pub fn harmonic(coupling: f64) -> Self {
        Self::new(PotentialKind::HarmonicPair, coupling)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.range > 0.0) || !self.range.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "range must be positive, got {}",
                self.range
            )));
        }
        if !self.coupling.is_finite() {
            return Err(Error::InvalidArgument("coupling must be finite".into()));
        }
        if let PotentialKind::PowerLaw { q } = self.kind {
            if !(q >= 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "power-law exponent must be >= 1, got {q}"
                )));
            }
        }
        Ok(())
    }

    fn shape(&self, x: f64) -> f64 {
        match self.kind {
            PotentialKind::Yukawa => (-x).exp() / x,
            PotentialKind::Gaussian => (-x * x).exp(),
            PotentialKind::Exponential => (-x).exp(),
            PotentialKind::PowerLaw { q } => x.powf(q),
            PotentialKind::Coulomb => 1.0 / x,
            PotentialKind::HarmonicPair => x * x,
        }
    }

    /// Value of the term at separation `r > 0`.
    pub fn evaluate(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "separation must be positive, got {r}"
            )));
        }
        Ok(self.value(r))
    }

    pub(crate) fn value(&self, r: f64) -> f64 {
        self.coupling * self.shape(r / self.range)
    }

    /// `∫_0^∞ V(r) r² e^{−c r²} dr`.
    pub fn reduced_radial_integral(&self, c: f64) -> Result<f64> {
        if !(c > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "Gaussian exponent must be positive, got {c}"
            )));
        }
        Ok(self.radial_moments(c, 0)[0])
    }

    /// Moments `K_j = ∫_0^∞ V(r) r^{2+2j} e^{−c r²} dr` for `j = 0..=j_max`,
    /// in closed form.
    pub fn radial_moments(&self, c: f64, j_max: usize) -> Vec<f64> {
        let mut out = vec![0.0; j_max + 1];
        self.add_radial_moments(c, &mut out);
        out
    }

    /// Adds `K_j` to `out[j]` for `j < out.len() <= MAX_MOMENTS`.
    pub(crate) fn add_radial_moments(&self, c: f64, out: &mut [f64]) {
        assert!(
            out.len() <= MAX_MOMENTS,
            "at most {MAX_MOMENTS} radial moments"
        );
        let rho = self.range;
        let g = self.coupling;
        let mut buf = [0.0; 2 * MAX_MOMENTS + 1];
        match self.kind {
            PotentialKind::Gaussian => {
                let cc = c + 1.0 / (rho * rho);
                for (j, o) in out.iter_mut().enumerate() {
                    *o += g * gamma(j as f64 + 1.5) / (2.0 * cc.powf(j as f64 + 1.5));
                }
            }
            PotentialKind::Exponential => {
                let m = &mut buf[..2 * out.len() + 1];
                gauss_exp_moments_into(c, 1.0 / rho, m);
                for (j, o) in out.iter_mut().enumerate() {
                    *o += g * m[2 + 2 * j];
                }
            }
            PotentialKind::Yukawa => {
                let m = &mut buf[..2 * out.len()];
                gauss_exp_moments_into(c, 1.0 / rho, m);
                for (j, o) in out.iter_mut().enumerate() {
                    *o += g * rho * m[1 + 2 * j];
                }
            }
            PotentialKind::Coulomb => {
                let mut fact = 1.0;
                for (j, o) in out.iter_mut().enumerate() {
                    if j > 0 {
                        fact *= j as f64;
                    }
                    *o += g * rho * fact / (2.0 * c.powi(j as i32 + 1));
                }
            }
            PotentialKind::PowerLaw { .. } | PotentialKind::HarmonicPair => {
                let q = self.kind.power().expect("power-law");
                for (j, o) in out.iter_mut().enumerate() {
                    let a = 0.5 * (3.0 + 2.0 * j as f64 + q);
                    *o += g * rho.powf(-q) * gamma(a) / (2.0 * c.powf(a));
                }
            }
        }
    }

    /// The same moment by adaptive quadrature; independent of the closed forms.
    pub fn radial_moment_quadrature(&self, c: f64, j: usize) -> Result<f64> {
        if !(c > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "Gaussian exponent must be positive, got {c}"
            )));
        }
        let power = 2 + 2 * j as i32;
        let f = |r: f64| {
            if r > 0.0 {
                self.value(r) * r.powi(power) * (-c * r * r).exp()
            } else {
                0.0
            }
        };
        let scale = (((j as f64) + 1.0) / c)
            .sqrt()
            .min(10.0 * self.range.max(1.0 / c.sqrt()));
        integrate_half_line(f, scale, 1e-12, 1e-300)
    }
}

impl fmt::Display for PotentialTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*{}", self.coupling, self.kind.label())?;
        if self.range != 1.0 {
            write!(f, "(r/{})", self.range)?;
        }
        Ok(())
    }
}

/// Sum of pair-potential terms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub terms: Vec<PotentialTerm>,
}

impl PotentialSpec {
    pub fn new(terms: Vec<PotentialTerm>) -> Result<Self> {
        let spec = PotentialSpec { terms };
        spec.validate()?;
        Ok(spec)
    }

    pub fn single(term: PotentialTerm) -> Self {
        PotentialSpec { terms: vec![term] }
    }

    pub fn validate(&self) -> Result<()> {
        if self.terms.is_empty() {
            return Err(Error::InvalidArgument(
                "potential needs at least one term".into(),
            ));
        }
        self.terms.iter().try_for_each(PotentialTerm::validate)
    }

    pub fn evaluate(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "separation must be positive, got {r}"
            )));
        }
        Ok(self.value(r))
    }

    pub(crate) fn value(&self, r: f64) -> f64 {
        self.terms.iter().map(|t| t.value(r)).sum()
    }

    /// All couplings multiplied by `alpha`.
    pub fn scaled(&self, alpha: f64) -> Self {
        PotentialSpec {
            terms: self
                .terms
                .iter()
                .map(|t| PotentialTerm {
                    coupling: t.coupling * alpha,
                    ..*t
                })
                .collect(),
        }
    }

    pub fn reduced_radial_integral(&self, c: f64) -> Result<f64> {
        self.terms
            .iter()
            .map(|t| t.reduced_radial_integral(c))
            .sum()
    }

    pub fn radial_moments(&self, c: f64, j_max: usize) -> Vec<f64> {
        let mut acc = vec![0.0; j_max + 1];
        self.add_radial_moments(c, &mut acc);
        acc
    }

    pub(crate) fn add_radial_moments(&self, c: f64, out: &mut [f64]) {
        for t in &self.terms {
            t.add_radial_moments(c, out);
        }
    }

    /// Whether some term grows without bound at large separation.
    pub fn is_confining(&self) -> bool {
        self.terms
            .iter()
            .any(|t| t.coupling > 0.0 && t.kind.power().is_some_and(|q| q > 0.0))
    }

    pub fn is_short_range(&self) -> bool {
        self.terms.iter().all(|t| t.kind.is_short_range())
    }

    /// If the potential is a single power law `g r^q` (with unit range), `(q, g)`.
    pub fn as_power_law(&self) -> Option<(f64, f64)> {
        match self.terms.as_slice() {
            [t] if t.kind.power().is_some_and(|q| q >= 1.0) => {
                let q = t.kind.power()?;
                Some((q, t.coupling * t.range.powf(-q)))
            }
            _ => None,
        }
    }

    /// Stable identifier used in report headers and cache keys.
    pub fn identifier(&self) -> String {
        self.terms
            .iter()
            .map(|t| t.to_string())
            .collect::<Vec<_>>()
            .join("+")
    }
}

impl fmt::Display for PotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.identifier())
    }
}

/// Converts an energy needed at mass `alpha · m` into one computed at mass
/// `m` with all couplings multiplied by `alpha`: `E(αm, g) = E(m, αg) / α`.
pub fn scale_coupling<F>(potential: &PotentialSpec, mass: f64, alpha: f64, energy: F) -> Result<f64>
where
    F: FnOnce(f64, &PotentialSpec) -> Result<f64>,
{
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "mass multiplier must be positive, got {alpha}"
        )));
    }
    Ok(energy(mass, &potential.scaled(alpha))? / alpha)
}

/// `4π (2πσ²)^{-3/2}`: normalization turning radial moments into expectation
/// values over an isotropic Gaussian of variance `σ²` per component.
pub(crate) fn isotropic_density_prefactor(sigma2: f64) -> f64 {
    4.0 * PI * (2.0 * PI * sigma2).powf(-1.5)
}
