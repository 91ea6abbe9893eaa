//! Stochastic variational solver on (anti)symmetrized correlated Gaussians.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fewbody::gaussian::{GaussianBasisElement, Integrator, Primitive};
use crate::fewbody::intrinsic::symmetrizer_weights;
use crate::fewbody::jacobi::{JacobiFrame, PermutationAction};
use crate::fewbody::prefactor::{AngularSector, Prefactor};
use crate::onebody::{radial_state, relative_two_body_energy};
use crate::potentials::PotentialKind;
use crate::symrep::{branching, SymmetrySector};
use crate::system::{AngularChoice, SystemSpec};

/// Budget and sampling controls of the stochastic basis optimization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Candidates sampled per growth or refinement step.
    pub candidates: usize,
    /// Refinement sweeps over the grown basis.
    pub refinements: usize,
    /// Basis size cap for N ≤ 3.
    pub max_basis: usize,
    /// Basis size cap for N = 4.
    pub max_basis_four: usize,
    /// Pair widths are sampled log-uniformly in this range, in units of the
    /// inverse squared two-body length scale.
    pub alpha_min: f64,
    pub alpha_max: f64,
    /// Overrides the length scale taken from the two-body ground state.
    pub length_scale: Option<f64>,
    /// Candidates whose overlap pivot falls below this fraction are rejected.
    pub pivot_tolerance: f64,
    /// Growth stops once the energy gained over `stall_window` additions is
    /// below this fraction of the energy.
    pub stall_tolerance: f64,
    pub stall_window: usize,
    /// Basis size of the exploratory solves of an angular scan.
    pub scan_basis: usize,
    /// Sectors whose exploratory energy lies within this relative margin of
    /// the best are solved in full.
    pub scan_margin: f64,
    /// Compare short-range systems against their break-up threshold.
    pub threshold_check: bool,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            candidates: 30,
            refinements: 2,
            max_basis: 100,
            max_basis_four: 400,
            alpha_min: 1e-3,
            alpha_max: 1e3,
            length_scale: None,
            pivot_tolerance: 1e-10,
            stall_tolerance: 1e-7,
            stall_window: 10,
            scan_basis: 20,
            scan_margin: 0.05,
            threshold_check: true,
            seed: 1,
        }
    }
}

impl SolverConfig {
    pub fn basis_cap(&self, n: usize) -> usize {
        if n <= 3 {
            self.max_basis
        } else {
            self.max_basis_four
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.into()));
        if self.candidates == 0 {
            return bad("at least one candidate per step is required");
        }
        if !(self.alpha_min > 0.0 && self.alpha_max >= self.alpha_min) {
            return bad("pair-width range must satisfy 0 < alpha_min <= alpha_max");
        }
        if self.max_basis == 0 || self.max_basis_four == 0 || self.scan_basis == 0 {
            return bad("basis caps must be positive");
        }
        if self.length_scale.is_some_and(|l| !(l > 0.0)) {
            return bad("length scale must be positive");
        }
        Ok(())
    }
}

/// Angular sector tried during a scan, with its exploratory energy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub angular: AngularSector,
    pub energy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub energy: f64,
    pub basis_size: usize,
    pub sector: SymmetrySector,
    pub angular: AngularSector,
    /// `(basis size, energy)` after every growth step and refinement sweep.
    pub trace: Vec<(usize, f64)>,
    pub seed: u64,
    pub basis: Vec<GaussianBasisElement>,
    /// Break-up threshold, when it was determined.
    pub threshold: Option<f64>,
    pub scanned: Vec<ScanEntry>,
}

/// Overlap, kinetic and potential matrix elements.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MatrixElements {
    pub overlap: f64,
    pub kinetic: f64,
    pub potential: f64,
}

/// `⟨bra| Σ_P ε^P P |ket⟩` for the identity, the internal kinetic energy and
/// the pair potential, with the intrinsic state of the system's sector
/// carried along (normalized so the identity term has unit intrinsic weight).
pub fn antisymmetrized_matrix_elements(
    bra: &GaussianBasisElement,
    ket: &GaussianBasisElement,
    system: &SystemSpec,
    angular: AngularSector,
) -> Result<MatrixElements> {
    let problem = Problem::new(system, angular)?;
    for e in [bra, ket] {
        problem.check_element(e)?;
    }
    let b = Primitive::from_element(&problem.integrator.frame, bra);
    let k = Primitive::from_element(&problem.integrator.frame, ket);
    let mut acc = MatrixElements::default();
    for (w, perm) in &problem.perms {
        let el = problem.integrator.elements(&b, &k.permuted(perm));
        acc.overlap += w * el.overlap;
        acc.kinetic += w * el.kinetic * problem.inv_2m;
        acc.potential += w * el.potential;
    }
    Ok(acc)
}

pub(crate) struct Problem {
    pub integrator: Integrator,
    /// Permutations with non-zero symmetrizer weight.
    pub perms: Vec<(f64, PermutationAction)>,
    pub inv_2m: f64,
    pub n: usize,
}

impl Problem {
    pub fn new(system: &SystemSpec, angular: AngularSector) -> Result<Self> {
        system.validate()?;
        let kind = Prefactor::for_sector(angular, system.n)?;
        let frame = JacobiFrame::new(system.n);
        let weights = symmetrizer_weights(
            system.sector.statistics,
            &system.sector.intrinsic_partition(),
        );
        let perms = frame
            .permutations()
            .into_iter()
            .zip(weights)
            .filter(|(_, w)| w.abs() > 1e-14)
            .map(|(p, w)| (w, p))
            .collect();
        Ok(Problem {
            integrator: Integrator::new(frame, kind, system.potential.clone()),
            perms,
            inv_2m: 0.5 / system.mass,
            n: system.n,
        })
    }

    fn check_element(&self, e: &GaussianBasisElement) -> Result<()> {
        let pairs = self.n * (self.n - 1) / 2;
        if e.pair_widths.len() != pairs || e.pair_widths.iter().any(|a| !(*a > 0.0)) {
            return Err(Error::InvalidArgument(format!(
                "a basis element needs {pairs} positive pair widths"
            )));
        }
        let k = self.integrator.kind.vectors();
        if e.vectors.len() != k || e.vectors.iter().any(|v| v.len() != self.n - 1) {
            return Err(Error::InvalidArgument(format!(
                "the prefactor needs {k} vectors of length {}",
                self.n - 1
            )));
        }
        Ok(())
    }

    fn prepare(&self, element: GaussianBasisElement) -> Option<Member> {
        let prim = Primitive::from_element(&self.integrator.frame, &element);
        let self_overlap = self.integrator.overlap(&prim, &prim);
        if !(self_overlap > 0.0) || !self_overlap.is_finite() {
            return None;
        }
        let variants = self.perms.iter().map(|(_, p)| prim.permuted(p)).collect();
        Some(Member {
            element,
            prim,
            scale: 1.0 / self_overlap.sqrt(),
            variants,
        })
    }

    /// `(⟨bra|H A|ket⟩, ⟨bra|A|ket⟩)` for normalized primitives.
    fn pair(&self, bra: &Member, ket: &Member) -> (f64, f64) {
        let mut h = 0.0;
        let mut s = 0.0;
        for ((w, _), variant) in self.perms.iter().zip(&ket.variants) {
            let el = self.integrator.elements(&bra.prim, variant);
            h += w * (el.kinetic * self.inv_2m + el.potential);
            s += w * el.overlap;
        }
        let f = bra.scale * ket.scale;
        (h * f, s * f)
    }
}

#[derive(Clone, Debug)]
struct Member {
    element: GaussianBasisElement,
    prim: Primitive,
    scale: f64,
    variants: Vec<Primitive>,
}

/// Matrix rows of a candidate against a set of basis members.
struct Row {
    h: Vec<f64>,
    s: Vec<f64>,
    hdd: f64,
    sdd: f64,
}

/// Generalized eigen-decomposition with `S`-orthonormal eigenvectors.
struct Decomposition {
    energies: DVector<f64>,
    vectors: DMatrix<f64>,
    /// Largest Cholesky pivot of the overlap matrix.
    max_pivot: f64,
    min_pivot: f64,
}

fn decompose(h: &DMatrix<f64>, s: &DMatrix<f64>) -> Result<Decomposition> {
    let n = h.nrows();
    if n == 0 {
        return Ok(Decomposition {
            energies: DVector::zeros(0),
            vectors: DMatrix::zeros(0, 0),
            max_pivot: 0.0,
            min_pivot: 0.0,
        });
    }
    let chol = Cholesky::new(s.clone())
        .ok_or_else(|| Error::Numerical("overlap matrix is not positive definite".into()))?;
    let l = chol.l();
    let pivots = l.diagonal().map(|x| x * x);
    let y = l
        .solve_lower_triangular(h)
        .ok_or_else(|| Error::Numerical("singular Cholesky factor".into()))?;
    let reduced = l
        .solve_lower_triangular(&y.transpose())
        .ok_or_else(|| Error::Numerical("singular Cholesky factor".into()))?;
    let sym = 0.5 * (&reduced + reduced.transpose());
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let energies = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut v = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        v.set_column(col, &eig.eigenvectors.column(i));
    }
    let vectors = l
        .transpose()
        .solve_upper_triangular(&v)
        .ok_or_else(|| Error::Numerical("singular Cholesky factor".into()))?;
    Ok(Decomposition {
        energies,
        vectors,
        max_pivot: pivots.max(),
        min_pivot: pivots.min(),
    })
}

/// Lowest eigenvalue after adding one function, from the arrowhead form of
/// the enlarged problem; `None` when the function is numerically dependent.
fn trial_energy(d: &Decomposition, row: &Row, pivot_tolerance: f64) -> Option<f64> {
    if !(row.sdd > 0.0) {
        return None;
    }
    let inv = 1.0 / row.sdd.sqrt();
    let hdd = row.hdd / row.sdd;
    let n = d.energies.len();
    if n == 0 {
        return Some(hdd);
    }
    let s = DVector::from_iterator(n, row.s.iter().map(|x| x * inv));
    let h = DVector::from_iterator(n, row.h.iter().map(|x| x * inv));
    let o = d.vectors.tr_mul(&s);
    let q = d.vectors.tr_mul(&h);
    let pivot = 1.0 - o.norm_squared();
    if !(pivot * row.sdd > pivot_tolerance * d.max_pivot.max(row.sdd)) {
        return None;
    }
    let norm = pivot.sqrt();
    let mut diag = hdd - 2.0 * o.dot(&q);
    let mut b = Vec::with_capacity(n);
    for k in 0..n {
        diag += d.energies[k] * o[k] * o[k];
        b.push((q[k] - d.energies[k] * o[k]) / norm);
    }
    diag /= pivot;
    lowest_arrowhead_root(d.energies.as_slice(), &b, diag)
}

// Smallest eigenvalue of [[diag(e), b], [bᵀ, d]]; it lies below e[0] and
// solves d − λ − Σ b_k² / (e_k − λ) = 0.
fn lowest_arrowhead_root(e: &[f64], b: &[f64], d: f64) -> Option<f64> {
    let e0 = e[0];
    let bnorm = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    let secular = |lambda: f64| {
        d - lambda
            - e.iter()
                .zip(b)
                .map(|(ek, bk)| bk * bk / (ek - lambda))
                .sum::<f64>()
    };
    let scale = e0.abs().max(d.abs()).max(bnorm).max(1e-300);
    let mut lo = e0.min(d) - bnorm - 1e-12 * scale;
    let mut hi = e0;
    if !(lo.is_finite() && hi.is_finite()) {
        return None;
    }
    if b[0].abs() < 1e-300 && secular(hi - 1e-15 * scale) > 0.0 {
        // decoupled from the current ground state: the root may sit at e0
        return Some(e0.min(d));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if secular(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

const SHARED_SPREAD: f64 = std::f64::consts::LN_2 * 2.0;

struct Run<'a> {
    problem: &'a Problem,
    config: &'a SolverConfig,
    rng: ChaCha8Rng,
    alpha_lo: f64,
    alpha_hi: f64,
    members: Vec<Member>,
    h: DMatrix<f64>,
    s: DMatrix<f64>,
    decomposition: Decomposition,
}

impl<'a> Run<'a> {
    fn sample(&mut self) -> GaussianBasisElement {
        let pairs = self.problem.n * (self.problem.n - 1) / 2;
        let dim = self.problem.n - 1;
        let (lo, hi) = (self.alpha_lo.ln(), self.alpha_hi.ln());
        // Half of the proposals share one scale across all pairs, up to a
        // factor of 4; near-isotropic shapes are otherwise hard to hit when
        // every width is drawn independently over several decades.
        let shared = self.rng.random::<f64>() < 0.5;
        let base = lo + (hi - lo) * self.rng.random::<f64>();
        let pair_widths = (0..pairs)
            .map(|_| {
                let u = self.rng.random::<f64>();
                if shared {
                    (base + SHARED_SPREAD * (2.0 * u - 1.0)).exp()
                } else {
                    (lo + (hi - lo) * u).exp()
                }
            })
            .collect();
        let vectors = (0..self.problem.integrator.kind.vectors())
            .map(|_| loop {
                let v: Vec<f64> = (0..dim)
                    .map(|_| 2.0 * self.rng.random::<f64>() - 1.0)
                    .collect();
                let r2: f64 = v.iter().map(|x| x * x).sum();
                if r2 > 1e-4 && r2 <= 1.0 {
                    let r = r2.sqrt();
                    break v.into_iter().map(|x| x / r).collect();
                }
            })
            .collect();
        GaussianBasisElement {
            pair_widths,
            vectors,
        }
    }

    fn row(&self, candidate: &Member, skip: Option<usize>) -> Row {
        let (hdd, sdd) = self.problem.pair(candidate, candidate);
        let mut h = Vec::with_capacity(self.members.len());
        let mut s = Vec::with_capacity(self.members.len());
        for (j, m) in self.members.iter().enumerate() {
            if Some(j) == skip {
                continue;
            }
            let (hj, sj) = self.problem.pair(m, candidate);
            h.push(hj);
            s.push(sj);
        }
        Row { h, s, hdd, sdd }
    }

    /// Evaluates candidates in parallel and returns the best by energy,
    /// earliest index on ties.
    fn best_candidate(
        &self,
        candidates: Vec<GaussianBasisElement>,
        d: &Decomposition,
        skip: Option<usize>,
    ) -> Option<(f64, Member, Row)> {
        let evaluated: Vec<Option<(f64, Member, Row)>> = candidates
            .into_par_iter()
            .map(|e| {
                let m = self.problem.prepare(e)?;
                let row = self.row(&m, skip);
                // symmetrization must leave a sizeable part of the function
                if !(row.sdd > 1e-6) {
                    return None;
                }
                let energy = trial_energy(d, &row, self.config.pivot_tolerance)?;
                energy.is_finite().then_some((energy, m, row))
            })
            .collect();
        let mut best: Option<(f64, Member, Row)> = None;
        for c in evaluated.into_iter().flatten() {
            if best.as_ref().is_none_or(|b| c.0 < b.0) {
                best = Some(c);
            }
        }
        best
    }

    fn ground(&self) -> f64 {
        self.decomposition.energies[0]
    }

    fn append(&mut self, m: Member, row: Row) -> Result<()> {
        let n = self.members.len();
        let mut h = self.h.clone().resize(n + 1, n + 1, 0.0);
        let mut s = self.s.clone().resize(n + 1, n + 1, 0.0);
        for j in 0..n {
            h[(j, n)] = row.h[j];
            h[(n, j)] = row.h[j];
            s[(j, n)] = row.s[j];
            s[(n, j)] = row.s[j];
        }
        h[(n, n)] = row.hdd;
        s[(n, n)] = row.sdd;
        let d = decompose(&h, &s)?;
        self.members.push(m);
        self.h = h;
        self.s = s;
        self.decomposition = d;
        Ok(())
    }

    fn grow(&mut self, cap: usize, trace: &mut Vec<(usize, f64)>) -> Result<()> {
        let mut failures = 0;
        while self.members.len() < cap {
            let candidates: Vec<_> = (0..self.config.candidates).map(|_| self.sample()).collect();
            let best = self.best_candidate(candidates, &self.decomposition, None);
            let Some((_, m, row)) = best else {
                failures += 1;
                if failures >= 20 {
                    break;
                }
                continue;
            };
            failures = 0;
            if let Err(e) = self.append(m, row) {
                // numerically unusable; drop and keep growing
                if self.members.is_empty() {
                    return Err(e);
                }
                continue;
            }
            let energy = self.ground();
            trace.push((self.members.len(), energy));
            let w = self.config.stall_window;
            if w > 0 && trace.len() > w {
                let before = trace[trace.len() - 1 - w].1;
                if before - energy <= self.config.stall_tolerance * energy.abs() {
                    break;
                }
            }
        }
        Ok(())
    }

    fn refine(&mut self) -> Result<()> {
        let n = self.members.len();
        if n < 2 {
            return Ok(());
        }
        for i in 0..n {
            let keep: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            let h = self.h.select_rows(&keep).select_columns(&keep);
            let s = self.s.select_rows(&keep).select_columns(&keep);
            let d = decompose(&h, &s)?;
            let current = Row {
                h: keep.iter().map(|&j| self.h[(j, i)]).collect(),
                s: keep.iter().map(|&j| self.s[(j, i)]).collect(),
                hdd: self.h[(i, i)],
                sdd: self.s[(i, i)],
            };
            let Some(e_current) = trial_energy(&d, &current, 0.0) else {
                continue;
            };
            let candidates: Vec<_> = (0..self.config.candidates).map(|_| self.sample()).collect();
            let Some((e_new, m, row)) = self.best_candidate(candidates, &d, Some(i)) else {
                continue;
            };
            if !(e_new < e_current - 1e-13 * e_current.abs()) {
                continue;
            }
            let mut h2 = self.h.clone();
            let mut s2 = self.s.clone();
            for (idx, &j) in keep.iter().enumerate() {
                h2[(i, j)] = row.h[idx];
                h2[(j, i)] = row.h[idx];
                s2[(i, j)] = row.s[idx];
                s2[(j, i)] = row.s[idx];
            }
            h2[(i, i)] = row.hdd;
            s2[(i, i)] = row.sdd;
            let Ok(d2) = decompose(&h2, &s2) else {
                continue;
            };
            if d2.energies[0] > self.ground()
                || !(d2.min_pivot > self.config.pivot_tolerance * d2.max_pivot)
            {
                continue;
            }
            self.members[i] = m;
            self.h = h2;
            self.s = s2;
            self.decomposition = d2;
        }
        Ok(())
    }
}

/// Two-body length scale: rms separation in the two-body ground state, or
/// the potential range if two particles do not bind.
pub(crate) fn length_scale(system: &SystemSpec) -> f64 {
    if let Ok(Some(state)) = radial_state(&system.potential, 0.5 * system.mass, 0, 0) {
        let r2 = state.mean_square_radius();
        if r2 > 0.0 && r2.is_finite() {
            return r2.sqrt();
        }
    }
    system
        .potential
        .terms
        .iter()
        .filter(|t| {
            matches!(
                t.kind,
                PotentialKind::Yukawa | PotentialKind::Gaussian | PotentialKind::Exponential
            )
        })
        .map(|t| t.range)
        .fold(1.0f64, f64::max)
}

fn solve_fixed(
    system: &SystemSpec,
    angular: AngularSector,
    config: &SolverConfig,
    cap: usize,
    refinements: usize,
) -> Result<SolveResult> {
    let problem = Problem::new(system, angular)?;
    let ell = config.length_scale.unwrap_or_else(|| length_scale(system));
    let inv = 1.0 / (ell * ell);
    let mut run = Run {
        problem: &problem,
        config,
        rng: ChaCha8Rng::seed_from_u64(config.seed),
        alpha_lo: config.alpha_min * inv,
        alpha_hi: config.alpha_max * inv,
        members: Vec::new(),
        h: DMatrix::zeros(0, 0),
        s: DMatrix::zeros(0, 0),
        decomposition: Decomposition {
            energies: DVector::zeros(0),
            vectors: DMatrix::zeros(0, 0),
            max_pivot: 0.0,
            min_pivot: 0.0,
        },
    };
    let mut trace = Vec::new();
    run.grow(cap, &mut trace)?;
    if run.members.is_empty() {
        return Err(Error::InvalidSector(format!(
            "{} with L^P = {angular} admits no state in the {:?} prefactor family",
            system.sector, problem.integrator.kind
        )));
    }
    for _ in 0..refinements {
        run.refine()?;
        trace.push((run.members.len(), run.ground()));
    }
    Ok(SolveResult {
        energy: run.ground(),
        basis_size: run.members.len(),
        sector: system.sector.clone(),
        angular,
        trace,
        seed: config.seed,
        basis: run.members.into_iter().map(|m| m.element).collect(),
        threshold: None,
        scanned: Vec::new(),
    })
}

fn solve_scan(system: &SystemSpec, config: &SolverConfig) -> Result<SolveResult> {
    let cap = config.basis_cap(system.n);
    let mut scanned = Vec::new();
    for angular in AngularSector::scan_list(system.n) {
        match solve_fixed(system, angular, config, config.scan_basis.min(cap), 0) {
            Ok(r) => scanned.push(ScanEntry {
                angular,
                energy: r.energy,
            }),
            Err(Error::InvalidSector(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    let best_quick = scanned
        .iter()
        .map(|s| s.energy)
        .reduce(f64::min)
        .ok_or_else(|| {
            Error::InvalidSector(format!(
                "no supported angular sector admits a state of {}",
                system.sector
            ))
        })?;
    let margin = config.scan_margin * best_quick.abs();
    let mut best: Option<SolveResult> = None;
    for entry in scanned.iter().filter(|s| s.energy <= best_quick + margin) {
        let r = solve_fixed(system, entry.angular, config, cap, config.refinements)?;
        if best.as_ref().is_none_or(|b| r.energy < b.energy) {
            best = Some(r);
        }
    }
    let mut best = best.expect("at least one sector was solved");
    best.scanned = scanned;
    Ok(best)
}

/// Lowest energy into which the system can break up by losing one
/// particle, for short-range interactions.
pub fn threshold_energy(system: &SystemSpec, config: &SolverConfig) -> Result<f64> {
    if system.n == 2 {
        return Ok(0.0);
    }
    let table = branching(&system.sector.orbital)?;
    let mut threshold = f64::INFINITY;
    for child in table.children {
        let e = if system.n == 3 {
            // two-body subsystems are solved exactly; antisymmetric orbitals need odd l
            let odd = child.child.num_rows() == 2;
            relative_two_body_energy(&system.potential, system.mass, odd)?
                .unwrap_or(0.0)
                .min(0.0)
        } else {
            let sector = system.sector.with_orbital(child.child)?;
            let sub = SystemSpec {
                n: system.n - 1,
                sector,
                angular: AngularChoice::Scan,
                ..system.clone()
            };
            match solve(&sub, config) {
                Ok(r) => r.energy,
                Err(Error::Unbound { threshold, .. }) => threshold,
                Err(e) => return Err(e),
            }
        };
        threshold = threshold.min(e);
    }
    Ok(threshold)
}

/// Variational ground state of the internal Hamiltonian in the requested
/// sector.
pub fn solve(system: &SystemSpec, config: &SolverConfig) -> Result<SolveResult> {
    system.validate()?;
    config.validate()?;
    let mut result = match system.angular {
        AngularChoice::Fixed(a) => solve_fixed(
            system,
            a,
            config,
            config.basis_cap(system.n),
            config.refinements,
        )?,
        AngularChoice::Scan => solve_scan(system, config)?,
    };
    if system.potential.is_short_range() && (system.n == 2 || config.threshold_check) {
        let threshold = threshold_energy(system, config)?;
        result.threshold = Some(threshold);
        if result.energy >= threshold - 1e-6 * threshold.abs() {
            return Err(Error::Unbound {
                best: result.energy,
                threshold,
            });
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fewbody::ho_exact_energy;
    use crate::potentials::{PotentialSpec, PotentialTerm};
    use crate::symrep::{Partition, Statistics};

    fn harmonic(g: f64) -> PotentialSpec {
        PotentialSpec::single(PotentialTerm::harmonic(g))
    }

    fn system(
        stats: Statistics,
        rows: &[usize],
        pot: PotentialSpec,
        l: usize,
        parity: i8,
    ) -> SystemSpec {
        let sector = SymmetrySector::for_orbital(stats, Partition::new(rows.to_vec()).unwrap());
        SystemSpec::new(
            1.0,
            pot,
            sector,
            AngularChoice::Fixed(AngularSector::new(l, parity)),
        )
        .unwrap()
    }

    fn small(max: usize) -> SolverConfig {
        SolverConfig {
            max_basis: max,
            refinements: 1,
            ..Default::default()
        }
    }

    fn element(widths: &[f64], vectors: &[&[f64]]) -> GaussianBasisElement {
        GaussianBasisElement {
            pair_widths: widths.to_vec(),
            vectors: vectors.iter().map(|v| v.to_vec()).collect(),
        }
    }

    #[test]
    fn two_boson_exchange_doubles_the_direct_overlap() {
        let sys = system(Statistics::Boson, &[2], harmonic(0.0), 0, 1);
        let (a, b) = (element(&[1.0], &[]), element(&[1.0], &[]));
        let el = antisymmetrized_matrix_elements(&a, &b, &sys, AngularSector::new(0, 1)).unwrap();
        let direct = (2.0 * std::f64::consts::PI / 8.0).powf(1.5);
        assert!((el.overlap - 2.0 * direct).abs() < 1e-14);
    }

    #[test]
    fn scalar_functions_vanish_in_the_antisymmetric_sector() {
        let sys = SystemSpec::new(
            1.0,
            harmonic(1.0),
            SymmetrySector::spin_half_fermions(3, 3).unwrap(),
            AngularChoice::Scan,
        )
        .unwrap();
        // equal widths make the Gaussian itself symmetric
        let e = element(&[0.7, 0.7, 0.7], &[]);
        let el = antisymmetrized_matrix_elements(&e, &e, &sys, AngularSector::new(0, 1)).unwrap();
        assert!(el.overlap.abs() < 1e-15, "{}", el.overlap);
    }

    #[test]
    fn symmetrizer_on_both_sides_is_idempotent() {
        // Σ_{P,Q} ε^{P+Q} ⟨Pφχ|Qφ'χ⟩ = N! Σ_P ε^P ⟨φχ|Pφ'χ⟩
        let pot = PotentialSpec::single(PotentialTerm::gaussian(-3.0));
        for (rows, l, parity) in [
            (vec![2, 1], 1, -1),
            (vec![2, 2], 2, 1),
            (vec![2, 1, 1], 1, 1),
        ] {
            let sys = system(Statistics::Fermion, &rows, pot.clone(), l, parity);
            let problem = Problem::new(&sys, AngularSector::new(l, parity)).unwrap();
            let frame = &problem.integrator.frame;
            let n = sys.n;
            let k = problem.integrator.kind.vectors();
            let vecs: Vec<Vec<f64>> = (0..k)
                .map(|i| {
                    (0..n - 1)
                        .map(|j| 0.3 + 0.2 * (i as f64) - 0.45 * j as f64)
                        .collect()
                })
                .collect();
            let vecs2: Vec<Vec<f64>> = (0..k)
                .map(|i| {
                    (0..n - 1)
                        .map(|j| -0.1 + 0.5 * (i as f64) * (j as f64) + 0.2)
                        .collect()
                })
                .collect();
            let pairs = n * (n - 1) / 2;
            let a = GaussianBasisElement {
                pair_widths: (0..pairs).map(|p| 0.3 + 0.17 * p as f64).collect(),
                vectors: vecs,
            };
            let b = GaussianBasisElement {
                pair_widths: (0..pairs).map(|p| 1.1 - 0.13 * p as f64).collect(),
                vectors: vecs2,
            };
            let pa = Primitive::from_element(frame, &a);
            let pb = Primitive::from_element(frame, &b);
            let one_sided =
                antisymmetrized_matrix_elements(&a, &b, &sys, AngularSector::new(l, parity))
                    .unwrap();
            let chi =
                crate::fewbody::IntrinsicState::highest_weight(&sys.sector.intrinsic_partition());
            let norm = chi.norm_squared();
            let permuted = |image: &[usize]| -> std::collections::BTreeMap<Vec<u8>, f64> {
                chi.terms
                    .iter()
                    .map(|(labels, &c)| {
                        let mut out = labels.clone();
                        for (i, &k) in labels.iter().enumerate() {
                            out[image[i]] = k;
                        }
                        (out, c)
                    })
                    .collect()
            };
            let perms = frame.permutations();
            let mut two = [0.0; 3];
            for p in &perms {
                let cp = permuted(&p.image);
                for q in &perms {
                    let cq = permuted(&q.image);
                    let w_spin = cp
                        .iter()
                        .map(|(l, c)| c * cq.get(l).copied().unwrap_or(0.0))
                        .sum::<f64>()
                        / norm;
                    if w_spin == 0.0 {
                        continue;
                    }
                    let sign = if p.odd != q.odd { -1.0 } else { 1.0 };
                    let el = problem
                        .integrator
                        .elements(&pa.permuted(p), &pb.permuted(q));
                    let w = sign * w_spin;
                    two[0] += w * el.overlap;
                    two[1] += w * el.kinetic * problem.inv_2m;
                    two[2] += w * el.potential;
                }
            }
            let fact = perms.len() as f64;
            for (x, y) in
                two.iter()
                    .zip([one_sided.overlap, one_sided.kinetic, one_sided.potential])
            {
                assert!(
                    (x - fact * y).abs() < 1e-10 * (fact * y).abs().max(1e-12),
                    "{rows:?}: {x} vs {}",
                    fact * y
                );
            }
        }
    }

    #[test]
    fn hydrogen_like_pair() {
        let pot = PotentialSpec::single(PotentialTerm::coulomb(-1.0));
        let sys = system(Statistics::Boson, &[2], pot, 0, 1);
        let r = solve(
            &sys,
            &SolverConfig {
                max_basis: 40,
                ..Default::default()
            },
        )
        .unwrap();
        assert!((r.energy + 0.25).abs() < 1e-6, "{}", r.energy);
    }

    #[test]
    fn two_body_energies_match_the_radial_solver() {
        let pot = PotentialSpec::single(PotentialTerm::yukawa(-15.0));
        let even = relative_two_body_energy(&pot, 1.0, false).unwrap().unwrap();
        let odd = relative_two_body_energy(&pot, 1.0, true).unwrap().unwrap();
        let s0 = solve(
            &system(Statistics::Fermion, &[2], pot.clone(), 0, 1),
            &small(30),
        )
        .unwrap();
        let s1 = solve(
            &system(Statistics::Fermion, &[1, 1], pot, 1, -1),
            &small(30),
        )
        .unwrap();
        assert!(
            (s0.energy - even).abs() < 2e-5 * even.abs(),
            "{} vs {even}",
            s0.energy
        );
        assert!(
            (s1.energy - odd).abs() < 2e-5 * odd.abs(),
            "{} vs {odd}",
            s1.energy
        );
        assert_eq!(s0.threshold, Some(0.0));
    }

    #[test]
    fn three_body_oscillator_sectors() {
        let g = 0.7;
        for (rows, l, parity) in [(vec![3], 0, 1), (vec![2, 1], 1, -1), (vec![1, 1, 1], 1, 1)] {
            let sys = system(Statistics::Fermion, &rows, harmonic(g), l, parity);
            let r = solve(&sys, &small(60)).unwrap();
            let exact = ho_exact_energy(3, &sys.sector.orbital, g, 1.0).unwrap();
            assert!(
                (r.energy - exact).abs() < 1e-5 * exact,
                "{rows:?}: {} vs {exact}",
                r.energy
            );
            assert!(
                r.energy >= exact * (1.0 - 1e-10),
                "variational bound violated"
            );
            for w in r.trace.windows(2) {
                assert!(w[1].1 <= w[0].1 * (1.0 + 1e-12), "trace increased: {w:?}");
            }
        }
    }

    #[test]
    fn scalar_antisymmetric_state_costs_more() {
        let cfg = small(40);
        let pseudo = solve(
            &system(Statistics::Fermion, &[1, 1, 1], harmonic(1.0), 0, 1),
            &cfg,
        )
        .unwrap();
        let axial = solve(
            &system(Statistics::Fermion, &[1, 1, 1], harmonic(1.0), 1, 1),
            &cfg,
        )
        .unwrap();
        assert!(
            pseudo.energy > axial.energy + 0.1,
            "{} vs {}",
            pseudo.energy,
            axial.energy
        );
    }

    #[test]
    fn results_are_independent_of_the_worker_count() {
        let sys = system(
            Statistics::Fermion,
            &[2, 1],
            PotentialSpec::single(PotentialTerm::gaussian(-10.0)),
            1,
            -1,
        );
        let cfg = SolverConfig {
            threshold_check: false,
            ..small(15)
        };
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| solve(&sys, &cfg).unwrap())
        };
        let (a, b) = (run(1), run(3));
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.basis, b.basis);
        let c = solve(
            &sys,
            &SolverConfig {
                seed: 7,
                ..cfg.clone()
            },
        )
        .unwrap();
        assert_ne!(a.trace, c.trace);
    }

    #[test]
    fn coupling_scaling_law() {
        // E(αm, g) = E(m, αg)/α for a Gaussian well
        let pot = PotentialSpec::single(PotentialTerm::gaussian(-10.0));
        let sector = SymmetrySector::spinless_bosons(3);
        let cfg = SolverConfig {
            threshold_check: false,
            ..small(40)
        };
        let alpha = 1.37;
        let heavy = SystemSpec::new(
            alpha,
            pot.clone(),
            sector.clone(),
            AngularChoice::Fixed(AngularSector::new(0, 1)),
        )
        .unwrap();
        let direct = solve(&heavy, &cfg).unwrap().energy;
        let scaled = crate::potentials::scale_coupling(&pot, 1.0, alpha, |m, p| {
            let s = SystemSpec::new(
                m,
                p.clone(),
                sector.clone(),
                AngularChoice::Fixed(AngularSector::new(0, 1)),
            )?;
            Ok(solve(&s, &cfg)?.energy)
        })
        .unwrap();
        assert!(
            (direct - scaled).abs() < 2e-5 * direct.abs(),
            "{direct} vs {scaled}"
        );
    }

    #[test]
    fn weak_wells_are_reported_unbound() {
        let pot = PotentialSpec::single(PotentialTerm::yukawa(-1.0));
        let err = solve(&system(Statistics::Boson, &[2], pot, 0, 1), &small(15)).unwrap_err();
        assert!(
            matches!(err, Error::Unbound { threshold, .. } if threshold == 0.0),
            "{err:?}"
        );
    }

    #[test]
    fn empty_sectors_are_rejected() {
        // two identical bosons cannot carry odd angular momentum
        let err = solve(
            &system(Statistics::Boson, &[2], harmonic(1.0), 1, -1),
            &small(5),
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidSector(_)), "{err:?}");
    }

    #[test]
    fn scan_finds_the_oscillator_ground_sector() {
        let sys = SystemSpec::new(
            1.0,
            harmonic(1.0),
            SymmetrySector::spin_half_fermions(3, 1).unwrap(),
            AngularChoice::Scan,
        )
        .unwrap();
        let r = solve(
            &sys,
            &SolverConfig {
                scan_basis: 10,
                ..small(30)
            },
        )
        .unwrap();
        assert_eq!(r.angular, AngularSector::new(1, -1));
        assert!(r.scanned.len() >= 3);
    }

    #[test]
    fn arrowhead_matches_dense_eigenvalues() {
        let e = [-2.0, -0.5, 1.0, 3.0];
        let b = [0.3, -0.7, 0.2, 1.1];
        let d = 0.4;
        let mut m = DMatrix::zeros(5, 5);
        for k in 0..4 {
            m[(k, k)] = e[k];
            m[(k, 4)] = b[k];
            m[(4, k)] = b[k];
        }
        m[(4, 4)] = d;
        let dense = SymmetricEigen::new(m).eigenvalues.min();
        let root = lowest_arrowhead_root(&e, &b, d).unwrap();
        assert!((dense - root).abs() < 1e-13);
    }
}
