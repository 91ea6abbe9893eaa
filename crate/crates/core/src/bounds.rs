//! Lower bounds on N-body ground-state energies from (N−1)-body energies,
//! plus the independent-particle bounds they are compared with.
//!
//! Every bound is `prefactor · Σ weight_k · E_k`. Coefficients that are
//! rational are carried exactly and converted to floating point once, when
//! the report is assembled.

use std::fmt;

use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potentials::PotentialSpec;
use crate::symrep::{
    branching, conjugate, ground_partition, spin_sector_to_partition, Partition, Statistics,
    SymmetrySector,
};

pub type Rational = Ratio<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum BoundKind {
    Naive,
    TranslationInvariant,
    SymmetryResolved,
    SpinHalf,
    OmegaGeneral,
    LevyLeblond,
    BasdevantMartinLower,
    BasdevantMartinUpper,
}

impl BoundKind {
    /// Whether the bound is built from a positive combination of subsystem energies.
    pub fn is_decomposition(self) -> bool {
        !matches!(
            self,
            BoundKind::BasdevantMartinLower | BoundKind::BasdevantMartinUpper
        )
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BoundKind::Naive => "naive",
            BoundKind::TranslationInvariant => "translation-invariant",
            BoundKind::SymmetryResolved => "symmetry-resolved",
            BoundKind::SpinHalf => "spin-half",
            BoundKind::OmegaGeneral => "omega-general",
            BoundKind::LevyLeblond => "levy-leblond",
            BoundKind::BasdevantMartinLower => "basdevant-martin-lower",
            BoundKind::BasdevantMartinUpper => "basdevant-martin-upper",
        };
        f.write_str(s)
    }
}

/// One subsystem energy entering a bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Ingredient {
    pub description: String,
    /// Symmetry label of the subsystem, e.g. `[2,1]` or `S=1/2`.
    pub sector: String,
    pub particles: usize,
    pub mass: f64,
    /// Multiplier applied to every coupling of the pair potential.
    pub coupling_scale: f64,
    pub energy: f64,
    pub weight: f64,
    /// Exact form of `weight`, when rational.
    pub exact_weight: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundReport {
    pub kind: BoundKind,
    pub value: f64,
    pub prefactor: f64,
    pub exact_prefactor: Option<Rational>,
    pub ingredients: Vec<Ingredient>,
}

impl BoundReport {
    fn assemble(kind: BoundKind, prefactor: Rational, ingredients: Vec<Ingredient>) -> Self {
        let p = to_f64(prefactor);
        let mut r = BoundReport {
            kind,
            value: 0.0,
            prefactor: p,
            exact_prefactor: Some(prefactor),
            ingredients,
        };
        r.value = r.recompute();
        r
    }

    /// `prefactor · Σ weight · energy`, using the exact coefficients where present.
    pub fn recompute(&self) -> f64 {
        let p = self.exact_prefactor.map(to_f64).unwrap_or(self.prefactor);
        let sum: f64 = self
            .ingredients
            .iter()
            .map(|i| i.exact_weight.map(to_f64).unwrap_or(i.weight) * i.energy)
            .sum();
        p * sum
    }

    /// Exact rational coefficient multiplying each ingredient energy.
    pub fn exact_coefficients(&self) -> Option<Vec<Rational>> {
        let p = self.exact_prefactor?;
        self.ingredients
            .iter()
            .map(|i| i.exact_weight.map(|w| p * w))
            .collect()
    }
}

fn to_f64(r: Rational) -> f64 {
    r.to_f64().expect("finite rational")
}

fn rational(num: usize, den: usize) -> Rational {
    Ratio::new(num as i64, den as i64)
}

fn require_three(n: usize) -> Result<()> {
    if n < 3 {
        Err(Error::TooFewParticles { n, min: 3 })
    } else {
        Ok(())
    }
}

fn spin_label(two_s: usize) -> String {
    if two_s.is_multiple_of(2) {
        format!("S={}", two_s / 2)
    } else {
        format!("S={two_s}/2")
    }
}

fn ingredient(
    description: String,
    sector: String,
    particles: usize,
    mass: f64,
    coupling_scale: f64,
    energy: f64,
    weight: Rational,
) -> Ingredient {
    Ingredient {
        description,
        sector,
        particles,
        mass,
        coupling_scale,
        energy,
        weight: to_f64(weight),
        exact_weight: Some(weight),
    }
}

/// `E_N(m) ≥ N/(N−2) · E_{N−1}((N−1)m/(N−2))`, with the mass shift traded for
/// a coupling shift. `energy(mass, potential)` returns the (N−1)-body energy.
pub fn bound_naive<F>(
    n: usize,
    mass: f64,
    potential: &PotentialSpec,
    mut energy: F,
) -> Result<BoundReport>
where
    F: FnMut(f64, &PotentialSpec) -> Result<f64>,
{
    require_three(n)?;
    let alpha = rational(n - 1, n - 2);
    let e = energy(mass, &potential.scaled(to_f64(alpha)))?;
    // E(αm, g) = E(m, αg) / α
    let weight = rational(n, n - 2) / alpha;
    let ing = ingredient(
        format!("{}-body ground state", n - 1),
        "ground".into(),
        n - 1,
        mass,
        to_f64(alpha),
        e,
        weight,
    );
    Ok(BoundReport::assemble(
        BoundKind::Naive,
        Ratio::from_integer(1),
        vec![ing],
    ))
}

/// `E_N(m) ≥ N/(N−2) · E_{N−1}(Nm/(N−1))`.
pub fn bound_translation_invariant<F>(
    n: usize,
    mass: f64,
    potential: &PotentialSpec,
    mut energy: F,
) -> Result<BoundReport>
where
    F: FnMut(f64, &PotentialSpec) -> Result<f64>,
{
    require_three(n)?;
    let alpha = rational(n, n - 1);
    let e = energy(mass, &potential.scaled(to_f64(alpha)))?;
    let ing = ingredient(
        format!("{}-body ground state", n - 1),
        "ground".into(),
        n - 1,
        mass,
        to_f64(alpha),
        e,
        rational(n - 1, n - 2),
    );
    Ok(BoundReport::assemble(
        BoundKind::TranslationInvariant,
        Ratio::from_integer(1),
        vec![ing],
    ))
}

/// Branching-weighted sum over the (N−1)-body children of the orbital
/// partition. `energy(child, mass, potential)` is the lowest energy of the
/// child symmetry.
pub fn bound_symmetry_resolved<F>(
    orbital: &Partition,
    mass: f64,
    potential: &PotentialSpec,
    mut energy: F,
) -> Result<BoundReport>
where
    F: FnMut(&Partition, f64, &PotentialSpec) -> Result<f64>,
{
    let n = orbital.n();
    require_three(n)?;
    let alpha = rational(n, n - 1);
    let scaled = potential.scaled(to_f64(alpha));
    let table = branching(orbital)?;
    let mut ingredients = Vec::with_capacity(table.children.len());
    for b in &table.children {
        let w = Ratio::new(*b.weight.numer() as i64, *b.weight.denom() as i64);
        let e = energy(&b.child, mass, &scaled)?;
        ingredients.push(ingredient(
            format!("{}-body, orbital symmetry {}", n - 1, b.child),
            b.child.to_string(),
            n - 1,
            mass,
            to_f64(alpha),
            e,
            w,
        ));
    }
    Ok(BoundReport::assemble(
        BoundKind::SymmetryResolved,
        rational(n - 1, n - 2),
        ingredients,
    ))
}

/// The symmetry-resolved bound for spin-1/2 fermions written with the
/// neighbouring (N−1)-body spins `S ± 1/2`. `energy(two_s_child, mass, potential)`.
pub fn bound_spin_half<F>(
    n: usize,
    two_s: usize,
    mass: f64,
    potential: &PotentialSpec,
    mut energy: F,
) -> Result<BoundReport>
where
    F: FnMut(usize, f64, &PotentialSpec) -> Result<f64>,
{
    require_three(n)?;
    spin_sector_to_partition(n, two_s)?;
    let alpha = rational(n, n - 1);
    let scaled = potential.scaled(to_f64(alpha));
    // S(N+2S+2) and (S+1)(N−2S), in units of 1/2
    let minus = rational(two_s * (n + two_s + 2), 2);
    let plus = rational((two_s + 2) * (n - two_s), 2);
    let prefactor = rational(n - 1, n * (n - 2) * (two_s + 1));
    let mut ingredients = Vec::new();
    for (coef, child) in [(minus, two_s.checked_sub(1)), (plus, Some(two_s + 1))] {
        let exists = child.is_some_and(|c| c < n);
        if !exists {
            if coef != Ratio::from_integer(0) {
                return Err(Error::Numerical(format!(
                    "non-zero weight {coef} on a missing spin sector"
                )));
            }
            continue;
        }
        let c = child.expect("checked above");
        let e = energy(c, mass, &scaled)?;
        ingredients.push(ingredient(
            format!("{}-body, spin {}", n - 1, spin_label(c)),
            spin_label(c),
            n - 1,
            mass,
            to_f64(alpha),
            e,
            coef,
        ));
    }
    Ok(BoundReport::assemble(
        BoundKind::SpinHalf,
        prefactor,
        ingredients,
    ))
}

/// The bound for `Ω` internal states in the favoured partition
/// `[Ω^ν, N − νΩ]`, from the energies of its two possible children
/// `[Ω^ν, N − νΩ − 1]` (`e0`) and `[Ω^{ν−1}, Ω − 1, N − νΩ]` (`e1`), both
/// evaluated at coupling `N g/(N−1)`. A child that does not exist gets
/// weight zero and its energy is ignored.
pub fn bound_omega_general(n: usize, omega: usize, e0: f64, e1: f64) -> Result<BoundReport> {
    require_three(n)?;
    if omega == 0 {
        return Err(Error::InvalidArgument("omega must be positive".into()));
    }
    let nu = n / omega;
    let rest = n - nu * omega;
    let den = 1 + omega + nu * omega - n;
    assert!(den > 0, "degenerate omega-general prefactor");
    let prefactor = rational(n - 1, n * (n - 2) * den);
    let w0 = Ratio::from_integer((rest * (1 + omega + nu + nu * omega - n)) as i64);
    let w1 = Ratio::from_integer((nu * (omega + 1) * (omega + nu * omega - n)) as i64);
    let alpha = n as f64 / (n - 1) as f64;
    let mut ingredients = Vec::new();
    let parent = ground_partition(n, omega)?;
    for (w, e, k) in [(w0, e0, 0), (w1, e1, 1)] {
        if w == Ratio::from_integer(0) {
            continue;
        }
        let mut rows = parent.rows().to_vec();
        if k == 0 {
            *rows.last_mut().expect("non-empty") -= 1;
        } else {
            rows[nu - 1] -= 1;
        }
        let child = Partition::new(rows)?;
        ingredients.push(ingredient(
            format!("{}-body, orbital symmetry {child}", n - 1),
            child.to_string(),
            n - 1,
            f64::NAN,
            alpha,
            e,
            w,
        ));
    }
    Ok(BoundReport::assemble(
        BoundKind::OmegaGeneral,
        prefactor,
        ingredients,
    ))
}

/// Label counts of the highest-weight internal state of a sector: one entry
/// per internal state, `None` for bosons (no exclusion).
fn internal_occupations(sector: &SymmetrySector) -> Option<Vec<usize>> {
    match sector.statistics {
        Statistics::Boson => None,
        Statistics::Fermion => Some(conjugate(&sector.orbital).rows().to_vec()),
    }
}

/// Lévy-Leblond: `E_N ≥ (N/2) f_{N−1}`, the cumulated energy of `N−1`
/// independent particles of mass `(N−1)m/2` in the pair potential.
/// `cumulated(mass, potential, particles, omega)` is the independent-particle
/// energy with `omega` states per level. For fermions the spins of the
/// `N−1` spectators follow from removing one particle from the
/// highest-weight state, and the lowest such filling is used.
pub fn bound_levy_leblond<F>(
    sector: &SymmetrySector,
    mass: f64,
    potential: &PotentialSpec,
    mut cumulated: F,
) -> Result<BoundReport>
where
    F: FnMut(f64, &PotentialSpec, usize, usize) -> Result<f64>,
{
    let n = sector.n();
    if n < 2 {
        return Err(Error::TooFewParticles { n, min: 2 });
    }
    let m_eff = 0.5 * (n - 1) as f64 * mass;
    let (f, label) = match internal_occupations(sector) {
        None => (
            cumulated(m_eff, potential, n - 1, n - 1)?,
            "bosons".to_string(),
        ),
        Some(counts) => {
            let mut best: Option<(f64, Vec<usize>)> = None;
            for k in 0..counts.len() {
                let mut c = counts.clone();
                c[k] -= 1;
                let mut f = 0.0;
                for &x in c.iter().filter(|&&x| x > 0) {
                    f += cumulated(m_eff, potential, x, 1)?;
                }
                if best.as_ref().is_none_or(|b| f < b.0) {
                    best = Some((f, c));
                }
            }
            let (f, c) = best.expect("at least one internal state");
            (f, format!("occupations {c:?}"))
        }
    };
    let ing = ingredient(
        format!("{} independent particles", n - 1),
        label,
        n - 1,
        m_eff,
        1.0,
        f,
        rational(n, 2),
    );
    Ok(BoundReport::assemble(
        BoundKind::LevyLeblond,
        Ratio::from_integer(1),
        vec![ing],
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

/// Basdevant–Martin bounds for `g Σ r_ij^q`, in reduced units where the
/// N-body Hamiltonian is `Σ p_i²/2 + Σ r_ij^q`. `f_n` is the cumulated
/// energy and `e2` the ground energy of the one-body `p² + r^q`.
pub fn bound_basdevant_martin(
    n: usize,
    q: f64,
    f_n: f64,
    e2: f64,
    side: Side,
) -> Result<BoundReport> {
    if !(q >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "the Basdevant-Martin bounds need q >= 1, got {q}"
        )));
    }
    if n < 2 {
        return Err(Error::TooFewParticles { n, min: 2 });
    }
    let nf = n as f64;
    let d = q + 2.0;
    let first = nf.powf(2.0 / d);
    // (prefactor, weight on E2) of the two inequalities for q ≤ 2
    let below = (2f64.powf((q - 4.0) / d), nf.powf((4.0 - q) / d));
    let above = (2f64.powf(-q / d), nf.powf(q / d));
    let lower_side = matches!(side, Side::Lower);
    let (pre, w2) = if lower_side == (q <= 2.0) {
        below
    } else {
        above
    };
    let kind = if lower_side {
        BoundKind::BasdevantMartinLower
    } else {
        BoundKind::BasdevantMartinUpper
    };
    let ingredients = vec![
        Ingredient {
            description: format!("{n} independent particles in r^{q}"),
            sector: "cumulated".into(),
            particles: n,
            mass: 0.5,
            coupling_scale: 1.0,
            energy: f_n,
            weight: first,
            exact_weight: None,
        },
        Ingredient {
            description: format!("one particle in r^{q}"),
            sector: "ground".into(),
            particles: 1,
            mass: 0.5,
            coupling_scale: 1.0,
            energy: e2,
            weight: -w2,
            exact_weight: None,
        },
    ];
    let mut r = BoundReport {
        kind,
        value: 0.0,
        prefactor: pre,
        exact_prefactor: None,
        ingredients,
    };
    r.value = r.recompute();
    Ok(r)
}

/// Energy unit converting the reduced Basdevant–Martin convention to
/// `Σ p²/2m + g Σ r_ij^q`.
pub fn power_law_energy_unit(q: f64, mass: f64, g: f64) -> f64 {
    mass.powf(-q / (q + 2.0)) * g.powf(2.0 / (q + 2.0))
}

/// Cumulated energy in the reduced Basdevant–Martin convention for the
/// lowest filling compatible with the sector.
pub fn basdevant_martin_filling<F>(sector: &SymmetrySector, mut cumulated: F) -> Result<f64>
where
    F: FnMut(usize, usize) -> Result<f64>,
{
    match internal_occupations(sector) {
        None => cumulated(sector.n(), sector.n()),
        Some(counts) => counts.iter().map(|&c| cumulated(c, 1)).sum(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fewbody::ho_exact_energy;
    use crate::potentials::PotentialTerm;

    fn harmonic(g: f64) -> PotentialSpec {
        PotentialSpec::single(PotentialTerm::harmonic(g))
    }

    /// Oscillator ground energy of the lowest state with the given orbital symmetry.
    fn ho(p: &Partition, mass: f64, pot: &PotentialSpec) -> Result<f64> {
        ho_exact_energy(p.n(), p, pot.terms[0].coupling, mass)
    }

    fn ho_spin(n: usize, two_s: usize, mass: f64, pot: &PotentialSpec) -> Result<f64> {
        ho(&spin_sector_to_partition(n, two_s)?, mass, pot)
    }

    #[test]
    fn three_fermion_oscillator_is_saturated() {
        let (g, m) = (0.7, 1.3);
        for two_s in [1, 3] {
            let b = bound_spin_half(3, two_s, m, &harmonic(g), |c, mm, p| ho_spin(2, c, mm, p))
                .unwrap();
            let exact = ho(
                &spin_sector_to_partition(3, two_s).unwrap(),
                m,
                &harmonic(g),
            )
            .unwrap();
            assert!(
                (b.value - exact).abs() < 1e-10 * exact,
                "{two_s}: {} vs {exact}",
                b.value
            );
        }
        let b = bound_spin_half(3, 3, m, &harmonic(g), |c, mm, p| ho_spin(2, c, mm, p)).unwrap();
        assert_eq!(b.ingredients.len(), 1);
        assert_eq!(
            b.exact_coefficients().unwrap(),
            vec![Ratio::from_integer(2)]
        );
    }

    #[test]
    fn spin_half_coefficients() {
        let b = bound_spin_half(3, 1, 1.0, &harmonic(1.0), |_, _, _| Ok(1.0)).unwrap();
        assert_eq!(
            b.exact_coefficients().unwrap(),
            vec![Ratio::from_integer(1), Ratio::from_integer(1)]
        );
        let b = bound_spin_half(4, 0, 1.0, &harmonic(1.0), |_, _, _| Ok(1.0)).unwrap();
        assert_eq!(b.exact_coefficients().unwrap(), vec![Ratio::new(3, 2)]);
        assert_eq!(b.ingredients[0].sector, "S=1/2");
        assert!((b.ingredients[0].coupling_scale - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn four_fermions() {
        let pot = harmonic(1.0);
        let exact = |s| ho(&spin_sector_to_partition(4, s).unwrap(), 1.0, &pot).unwrap();
        let b2 = bound_spin_half(4, 4, 1.0, &pot, |c, m, p| ho_spin(3, c, m, p)).unwrap();
        assert!((b2.value - exact(4)).abs() < 1e-10 * exact(4));
        let b0 = bound_spin_half(4, 0, 1.0, &pot, |c, m, p| ho_spin(3, c, m, p)).unwrap();
        assert!(exact(0) / b0.value > 1.05, "{} vs {}", exact(0), b0.value);
    }

    #[test]
    fn boson_oscillator_saturates_the_translation_invariant_bound() {
        for n in [3, 4, 5] {
            let pot = harmonic(0.9);
            let b = bound_translation_invariant(n, 1.1, &pot, |m, p| {
                ho(&Partition::symmetric(n - 1), m, p)
            })
            .unwrap();
            let exact = ho(&Partition::symmetric(n), 1.1, &pot).unwrap();
            assert!((b.value - exact).abs() < 1e-10 * exact);
            let naive =
                bound_naive(n, 1.1, &pot, |m, p| ho(&Partition::symmetric(n - 1), m, p)).unwrap();
            assert!(naive.value < b.value);
        }
    }

    #[test]
    fn naive_bound_on_three_bosons() {
        let g: f64 = 2.0;
        let b = bound_naive(3, 1.0, &harmonic(g), |m, p| {
            ho(&Partition::symmetric(2), m, p)
        })
        .unwrap();
        // 3 E_2(2m, g) with E_2(m, g) = 3√(g/m)
        assert!((b.value - 9.0 * (g / 2.0).sqrt()).abs() < 1e-12);
        assert!(
            bound_naive(3, 1.0, &harmonic(g), |_, _| Ok(0.0))
                .unwrap()
                .value
                == 0.0
        );
        assert!(matches!(
            bound_naive(2, 1.0, &harmonic(g), |_, _| Ok(0.0)),
            Err(Error::TooFewParticles { .. })
        ));
    }

    #[test]
    fn symmetry_resolved_reductions() {
        let pot = harmonic(1.0);
        let b =
            bound_symmetry_resolved(&Partition::new(vec![2, 1]).unwrap(), 1.0, &pot, ho).unwrap();
        assert!((b.value - 4.0 * 6f64.sqrt()).abs() < 1e-12);
        let b = bound_symmetry_resolved(&Partition::new(vec![1, 1, 1]).unwrap(), 1.0, &pot, ho)
            .unwrap();
        assert!((b.value - 5.0 * 6f64.sqrt()).abs() < 1e-12);
        let b = bound_symmetry_resolved(
            &Partition::new(vec![2, 2]).unwrap(),
            1.0,
            &pot,
            |_, _, _| Ok(1.0),
        )
        .unwrap();
        assert_eq!(b.exact_coefficients().unwrap(), vec![Ratio::new(3, 2)]);
        assert_eq!(b.ingredients[0].sector, "[2,1]");
    }

    #[test]
    fn omega_general_special_cases() {
        let b = bound_omega_general(4, 2, 7.0, 1.0).unwrap();
        assert_eq!(b.exact_coefficients().unwrap(), vec![Ratio::new(3, 2)]);
        let b = bound_omega_general(5, 7, 1.0, 9.0).unwrap();
        assert_eq!(b.exact_coefficients().unwrap(), vec![Ratio::new(4, 3)]);
        assert_eq!(b.ingredients[0].sector, "[4]");
        let b = bound_omega_general(4, 1, 9.0, 1.0).unwrap();
        assert_eq!(b.exact_coefficients().unwrap(), vec![Ratio::new(3, 2)]);
        assert_eq!(b.ingredients[0].sector, "[1,1,1]");
    }

    #[test]
    fn levy_leblond_oscillator() {
        let pot = harmonic(1.0);
        let cum = |m: f64, p: &PotentialSpec, k: usize, om: usize| {
            crate::onebody::cumulated_energy(p, m, k, om).map(|c| c.value)
        };
        // two particles: the bound is the exact relative energy
        let b = bound_levy_leblond(&SymmetrySector::spinless_bosons(2), 1.0, &pot, cum).unwrap();
        assert!((b.value - 3.0).abs() < 1e-8);
        // three fermions, S=1/2: (3/2)·f_2 at mass m with ω = √2
        let sector = SymmetrySector::spin_half_fermions(3, 1).unwrap();
        let b = bound_levy_leblond(&sector, 1.0, &pot, cum).unwrap();
        assert!(
            (b.value - 1.5 * 3.0 * 2f64.sqrt()).abs() < 1e-7,
            "{}",
            b.value
        );
        assert!(b.value < ho(&sector.orbital, 1.0, &pot).unwrap());
        // polarized: the spectators fill s and p
        let sector = SymmetrySector::spin_half_fermions(3, 3).unwrap();
        let b = bound_levy_leblond(&sector, 1.0, &pot, cum).unwrap();
        assert!(
            (b.value - 1.5 * 4.0 * 2f64.sqrt()).abs() < 1e-7,
            "{}",
            b.value
        );
    }

    #[test]
    fn basdevant_martin_is_exact_for_the_oscillator() {
        for (n, two_s) in [(3, 1), (3, 3), (4, 0), (4, 2), (4, 4)] {
            let sector = SymmetrySector::spin_half_fermions(n, two_s).unwrap();
            let f = basdevant_martin_filling(&sector, |k, om| {
                crate::onebody::cumulated_energy(&harmonic(1.0), 0.5, k, om).map(|c| c.value)
            })
            .unwrap();
            let lo = bound_basdevant_martin(n, 2.0, f, 3.0, Side::Lower).unwrap();
            let hi = bound_basdevant_martin(n, 2.0, f, 3.0, Side::Upper).unwrap();
            let exact = ho(&sector.orbital, 1.0, &harmonic(1.0)).unwrap();
            assert!(
                (lo.value - exact).abs() < 1e-7 * exact,
                "{n} {two_s}: {} vs {exact}",
                lo.value
            );
            assert!((hi.value - lo.value).abs() < 1e-12 * exact);
        }
        // Σp² + Σr² convention: m = 1/2, three fermions with S = 1/2
        let e = 8.0 * 3f64.sqrt();
        let unit = power_law_energy_unit(2.0, 0.5, 1.0);
        let f = 2.0 * (1.5 + 1.5 + 2.5);
        let lo = bound_basdevant_martin(3, 2.0, f, 3.0, Side::Lower).unwrap();
        assert!((unit * lo.value - e).abs() < 1e-12);
        assert!(bound_basdevant_martin(3, 0.5, f, 3.0, Side::Lower).is_err());
    }

    #[test]
    fn basdevant_martin_sides_swap_above_two() {
        let lo = bound_basdevant_martin(3, 3.0, 20.0, 4.0, Side::Lower).unwrap();
        let hi = bound_basdevant_martin(3, 3.0, 20.0, 4.0, Side::Upper).unwrap();
        assert!((lo.prefactor - 2f64.powf(-0.6)).abs() < 1e-15);
        assert!((hi.prefactor - 2f64.powf(-0.2)).abs() < 1e-15);
        let lo = bound_basdevant_martin(3, 1.5, 20.0, 4.0, Side::Lower).unwrap();
        assert!((lo.prefactor - 2f64.powf(-2.5 / 3.5)).abs() < 1e-15);
    }

    #[test]
    fn reports_recompute_and_serialize() {
        let b =
            bound_spin_half(5, 1, 1.0, &harmonic(1.0), |c, _, _| Ok(-(c as f64) - 1.5)).unwrap();
        assert!((b.recompute() - b.value).abs() < 1e-12 * b.value.abs());
        let json = serde_json::to_string(&b).unwrap();
        let back: BoundReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, b);
    }
}
