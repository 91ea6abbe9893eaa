//! Harmonic quantum dots rewritten as translation-invariant pair systems.

use anyhow::Result;
use fewbound_core::{PotentialSpec, PotentialTerm, SymmetrySector, SystemSpec};

use crate::config::QdotSpec;

/// Internal pair system of a dot and the energy of its centre-of-mass
/// oscillator. `m ω²/2 Σ r_i² = m ω²/2 (N R² + Σ_{i<j} r_ij²/N)`, so the
/// relative motion sees `m ω²/(2N) r² + e²/r` between every pair.
pub fn reduce_quantum_dot(spec: &QdotSpec) -> Result<(SystemSpec, f64)> {
    spec.validate()?;
    let n = spec.n as f64;
    let mut terms = vec![PotentialTerm::harmonic(
        spec.mass * spec.omega * spec.omega / (2.0 * n),
    )];
    if spec.charge > 0.0 {
        terms.push(PotentialTerm::coulomb(spec.charge * spec.charge));
    }
    let sector = SymmetrySector::spin_half_fermions(spec.n, spec.two_s)?;
    let system = SystemSpec::new(spec.mass, PotentialSpec::new(terms)?, sector, spec.angular)?;
    Ok((system, 1.5 * spec.omega))
}

#[cfg(test)]
mod tests {
    use super::*;
    use fewbound_core::fewbody::ho_exact_energy;
    use fewbound_core::AngularChoice;

    #[test]
    fn free_dot_is_three_oscillators() {
        let spec = QdotSpec {
            n: 3,
            mass: 1.0,
            omega: 1.0,
            charge: 0.0,
            two_s: 3,
            angular: AngularChoice::Scan,
        };
        let (sys, cm) = reduce_quantum_dot(&spec).unwrap();
        assert_eq!(sys.potential.terms.len(), 1);
        let g = sys.potential.terms[0].coupling;
        assert!((g - 1.0 / 6.0).abs() < 1e-15);
        // bosonic ground sector: 3 + 3/2 = three oscillators at 3/2 each
        let e = ho_exact_energy(3, &fewbound_core::Partition::symmetric(3), g, 1.0).unwrap();
        assert!((e + cm - 4.5).abs() < 1e-12);
    }

    #[test]
    fn charged_dot_adds_coulomb() {
        let spec = QdotSpec {
            n: 4,
            mass: 2.0,
            omega: 0.5,
            charge: 2.0,
            two_s: 2,
            angular: AngularChoice::Scan,
        };
        let (sys, cm) = reduce_quantum_dot(&spec).unwrap();
        assert_eq!(sys.potential.terms[1], PotentialTerm::coulomb(4.0));
        assert!((sys.potential.terms[0].coupling - 2.0 * 0.25 / 8.0).abs() < 1e-15);
        assert_eq!(cm, 0.75);
        assert_eq!(sys.sector.orbital.rows(), &[2, 1, 1]);
    }
}
