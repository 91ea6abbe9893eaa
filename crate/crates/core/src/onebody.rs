//! Single-particle spectra of central potentials and cumulated
//! independent-fermion energies.
//!
//! The radial equation is integrated with Numerov's method on a logarithmic
//! grid (`r = e^x`, `u = √r · y`), so that
//!
//! ```text
//! y'' = [2m r² (V(r) − E) + (l + ½)²] y
//! ```
//!
//! Levels are located by bisection on the node count of the outward
//! solution and extrapolated from two step sizes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potentials::{PotentialKind, PotentialSpec};

const STEP: f64 = 0.004;
const MAX_BISECTIONS: usize = 400;

/// One bound level of the radial equation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialLevel {
    /// Radial quantum number (node count).
    pub n: usize,
    pub l: usize,
    pub energy: f64,
}

/// A level together with its reduced radial wave function `u(r)`,
/// normalized to `∫ u² dr = 1`.
#[derive(Clone, Debug)]
pub struct RadialState {
    pub level: RadialLevel,
    pub r: Vec<f64>,
    pub u: Vec<f64>,
}

impl RadialState {
    /// Interior sign changes of `u`.
    pub fn nodes(&self) -> usize {
        count_nodes(&self.u)
    }

    pub fn mean_square_radius(&self) -> f64 {
        // trapezoid on the non-uniform grid
        let mut acc = 0.0;
        for i in 1..self.r.len() {
            let dr = self.r[i] - self.r[i - 1];
            let a = self.u[i - 1] * self.u[i - 1] * self.r[i - 1] * self.r[i - 1];
            let b = self.u[i] * self.u[i] * self.r[i] * self.r[i];
            acc += 0.5 * dr * (a + b);
        }
        acc
    }
}

fn count_nodes(values: &[f64]) -> usize {
    let mut nodes = 0;
    let mut prev = 0.0f64;
    for &v in values {
        if v == 0.0 {
            continue;
        }
        if prev != 0.0 && (v > 0.0) != (prev > 0.0) {
            nodes += 1;
        }
        prev = v;
    }
    nodes
}

// Characteristic lengths of the potential terms, used to size the grid.
fn length_scales(potential: &PotentialSpec, mass: f64) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for t in &potential.terms {
        let g = t.coupling.abs().max(1e-300);
        let len = match t.kind {
            PotentialKind::Yukawa | PotentialKind::Gaussian | PotentialKind::Exponential => {
                let depth = (1.0 / (2.0 * mass * g * t.range)).sqrt();
                lo = lo.min(depth.min(t.range));
                t.range
            }
            PotentialKind::Coulomb => 1.0 / (mass * g * t.range),
            PotentialKind::PowerLaw { .. } | PotentialKind::HarmonicPair => {
                let q = t.kind.power().expect("power law");
                (t.range.powf(q) / (2.0 * mass * g)).powf(1.0 / (q + 2.0))
            }
        };
        lo = lo.min(len);
        hi = hi.max(len);
    }
    (lo, hi)
}

struct RadialProblem {
    mass: f64,
    l: usize,
    x: Vec<f64>,
    r: Vec<f64>,
    v: Vec<f64>,
    h: f64,
    confining: bool,
}

impl RadialProblem {
    fn new(potential: &PotentialSpec, mass: f64, l: usize, h: f64) -> Self {
        let (lo, hi) = length_scales(potential, mass);
        let r_min = 1e-7 * lo;
        let r_max = 1e4 * hi;
        let x0 = r_min.ln();
        let steps = ((r_max.ln() - x0) / h).ceil() as usize;
        let x: Vec<f64> = (0..=steps).map(|i| x0 + i as f64 * h).collect();
        let r: Vec<f64> = x.iter().map(|x| x.exp()).collect();
        let v = r.iter().map(|&r| potential.value(r)).collect();
        RadialProblem {
            mass,
            l,
            x,
            r,
            v,
            h,
            confining: potential.is_confining(),
        }
    }

    fn coefficient(&self, i: usize, energy: f64) -> f64 {
        let r = self.r[i];
        let lh = self.l as f64 + 0.5;
        2.0 * self.mass * r * r * (self.v[i] - energy) + lh * lh
    }

    // Outward Numerov integration. Stops once h²f exceeds the stability
    // limit, which only happens deep in the classically forbidden region.
    fn outward(&self, energy: f64, keep: bool, stop: usize) -> (usize, Vec<f64>) {
        let h2 = self.h * self.h / 12.0;
        let lh = self.l as f64 + 0.5;
        let mut y_prev = (lh * self.x[0]).exp();
        let mut y = (lh * self.x[1]).exp();
        let mut f_prev = self.coefficient(0, energy);
        let mut f = self.coefficient(1, energy);
        let mut out = Vec::new();
        if keep {
            out.push(y_prev);
            out.push(y);
        }
        let mut nodes = 0;
        for i in 2..stop.min(self.r.len()) {
            let f_next = self.coefficient(i, energy);
            if f_next * h2 > 0.5 {
                break;
            }
            let y_next = (2.0 * y * (1.0 + 5.0 * h2 * f) - y_prev * (1.0 - h2 * f_prev))
                / (1.0 - h2 * f_next);
            if (y_next > 0.0) != (y > 0.0) && y_next != 0.0 {
                nodes += 1;
            }
            y_prev = y;
            y = y_next;
            f_prev = f;
            f = f_next;
            if y.abs() > 1e150 {
                y *= 1e-150;
                y_prev *= 1e-150;
                if keep {
                    out.iter_mut().for_each(|v| *v *= 1e-150);
                }
            }
            if keep {
                out.push(y);
            }
        }
        (nodes, out)
    }

    fn nodes(&self, energy: f64) -> usize {
        self.outward(energy, false, usize::MAX).0
    }

    fn lowest_potential(&self) -> f64 {
        let lh = self.l as f64 * (self.l as f64 + 1.0);
        self.r
            .iter()
            .zip(&self.v)
            .map(|(&r, &v)| v + lh / (2.0 * self.mass * r * r))
            .fold(f64::INFINITY, f64::min)
    }

    // Energy of level `n`, or `None` when it is not bound.
    fn level_energy(&self, n: usize) -> Result<Option<f64>> {
        let mut lo = self.lowest_potential();
        if !lo.is_finite() {
            return Err(Error::RadialSolver(
                "non-finite potential on the grid".into(),
            ));
        }
        let mut hi;
        if self.confining {
            let scale = lo.abs().max(1.0);
            hi = lo + scale;
            let mut tries = 0;
            while self.nodes(hi) <= n {
                lo = hi;
                hi += scale * 2f64.powi(tries);
                tries += 1;
                if tries > 200 {
                    return Err(Error::RadialSolver(format!("could not bracket level {n}")));
                }
            }
        } else {
            hi = 0.0;
            if self.nodes(hi) <= n {
                return Ok(None);
            }
        }
        if self.nodes(lo) > n {
            return Err(Error::RadialSolver(
                "lower energy bracket already has too many nodes".into(),
            ));
        }
        for _ in 0..MAX_BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.nodes(mid) > n {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 2e-15 * hi.abs().max(lo.abs()) {
                break;
            }
        }
        Ok(Some(0.5 * (lo + hi)))
    }

    // Outward and inward solutions matched at the outermost turning point.
    fn wave_function(&self, energy: f64) -> (Vec<f64>, Vec<f64>) {
        let h2 = self.h * self.h / 12.0;
        let len = (2..self.r.len())
            .find(|&i| self.coefficient(i, energy) * h2 > 0.5)
            .unwrap_or(self.r.len());
        let turning = (1..len)
            .rev()
            .find(|&i| self.coefficient(i, energy) < (self.l as f64 + 0.5).powi(2))
            .unwrap_or(len / 2);
        let turning = turning.clamp(2, len.saturating_sub(3).max(2));
        // Stopping at the turning point keeps the growing component of the
        // outward solution from swamping the interior.
        let (_, y_out) = self.outward(energy, true, turning + 1);

        let mut y = vec![0.0; len];
        y[..=turning].copy_from_slice(&y_out[..=turning]);
        let mut y_next = 0.0;
        let mut y_cur = 1e-30;
        y[len - 1] = y_next;
        y[len - 2] = y_cur;
        let mut i = len - 2;
        let mut inward = vec![0.0; len];
        inward[len - 1] = y_next;
        inward[len - 2] = y_cur;
        while i > turning {
            let f_next = self.coefficient(i + 1, energy);
            let f = self.coefficient(i, energy);
            let f_prev = self.coefficient(i - 1, energy);
            let y_prev = (2.0 * y_cur * (1.0 + 5.0 * h2 * f) - y_next * (1.0 - h2 * f_next))
                / (1.0 - h2 * f_prev);
            y_next = y_cur;
            y_cur = y_prev;
            i -= 1;
            inward[i] = y_cur;
            if y_cur.abs() > 1e150 {
                inward[i..].iter_mut().for_each(|v| *v *= 1e-150);
                y_cur *= 1e-150;
                y_next *= 1e-150;
            }
        }
        let scale = y_out[turning] / inward[turning];
        for j in (turning + 1)..len {
            y[j] = inward[j] * scale;
        }
        let r = self.r[..len].to_vec();
        let mut u: Vec<f64> = y.iter().zip(&r).map(|(y, r)| y * r.sqrt()).collect();
        let mut norm = 0.0;
        for j in 1..len {
            norm += 0.5 * (r[j] - r[j - 1]) * (u[j] * u[j] + u[j - 1] * u[j - 1]);
        }
        let inv = 1.0 / norm.sqrt();
        u.iter_mut().for_each(|v| *v *= inv);
        if u.iter().find(|v| v.abs() > 1e-12).is_some_and(|v| *v < 0.0) {
            u.iter_mut().for_each(|v| *v = -*v);
        }
        (r, u)
    }
}

fn validate(potential: &PotentialSpec, mass: f64) -> Result<()> {
    potential.validate()?;
    if !(mass > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "mass must be positive, got {mass}"
        )));
    }
    Ok(())
}

/// Level `n` for angular momentum `l`, with its wave function; `None` if the
/// level is not bound.
pub fn radial_state(
    potential: &PotentialSpec,
    mass: f64,
    l: usize,
    n: usize,
) -> Result<Option<RadialState>> {
    validate(potential, mass)?;
    let coarse = RadialProblem::new(potential, mass, l, STEP);
    let fine = RadialProblem::new(potential, mass, l, 0.5 * STEP);
    let (Some(e_coarse), Some(e_fine)) = (coarse.level_energy(n)?, fine.level_energy(n)?) else {
        return Ok(None);
    };
    let energy = e_fine + (e_fine - e_coarse) / 15.0;
    let (r, u) = fine.wave_function(e_fine);
    Ok(Some(RadialState {
        level: RadialLevel { n, l, energy },
        r,
        u,
    }))
}

/// The lowest `count` levels with angular momentum `l`. For potentials that
/// are not confining, only bound levels are returned.
pub fn radial_spectrum(
    potential: &PotentialSpec,
    mass: f64,
    l: usize,
    count: usize,
) -> Result<Vec<RadialLevel>> {
    validate(potential, mass)?;
    if count == 0 {
        return Err(Error::InvalidArgument(
            "level count must be at least 1".into(),
        ));
    }
    let coarse = RadialProblem::new(potential, mass, l, STEP);
    let fine = RadialProblem::new(potential, mass, l, 0.5 * STEP);
    let mut levels = Vec::with_capacity(count);
    for n in 0..count {
        match (coarse.level_energy(n)?, fine.level_energy(n)?) {
            (Some(a), Some(b)) => levels.push(RadialLevel {
                n,
                l,
                energy: b + (b - a) / 15.0,
            }),
            _ => break,
        }
    }
    Ok(levels)
}

/// Ground energy of the relative motion of two particles of mass `mass`
/// (reduced mass `mass / 2`) with lowest even (`odd = false`) or odd angular
/// momentum.
pub fn relative_two_body_energy(
    potential: &PotentialSpec,
    mass: f64,
    odd: bool,
) -> Result<Option<f64>> {
    Ok(radial_state(potential, 0.5 * mass, usize::from(odd), 0)?.map(|s| s.level.energy))
}

/// Sum of the `N` lowest single-particle energies with `Ω(2l+1)` states per level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CumulatedEnergy {
    pub particles: usize,
    pub omega: usize,
    pub value: f64,
    pub filling: Vec<(RadialLevel, usize)>,
}

const DEGENERACY_TOL: f64 = 1e-9;

pub fn cumulated_energy(
    potential: &PotentialSpec,
    mass: f64,
    particles: usize,
    omega: usize,
) -> Result<CumulatedEnergy> {
    validate(potential, mass)?;
    if omega == 0 {
        return Err(Error::InvalidArgument("omega must be positive".into()));
    }
    let mut filling = Vec::new();
    let mut value = 0.0;
    let mut remaining = particles;
    // Frontier of candidate levels: next radial excitation of every open
    // l, plus the ground level of the next l.
    let mut frontier: Vec<RadialLevel> = Vec::new();
    let push = |frontier: &mut Vec<RadialLevel>, l: usize, n: usize| -> Result<()> {
        if let Some(s) = radial_state(potential, mass, l, n)? {
            frontier.push(s.level);
        }
        Ok(())
    };
    if remaining > 0 {
        push(&mut frontier, 0, 0)?;
    }
    while remaining > 0 {
        let Some(min_e) = frontier.iter().map(|l| l.energy).reduce(f64::min) else {
            return Err(Error::UnboundFilling {
                requested: particles,
                fitted: particles - remaining,
            });
        };
        let tol = DEGENERACY_TOL * min_e.abs().max(1e-12);
        let idx = frontier
            .iter()
            .enumerate()
            .filter(|(_, l)| l.energy <= min_e + tol)
            .min_by_key(|(_, l)| l.l)
            .map(|(i, _)| i)
            .expect("non-empty frontier");
        let level = frontier.swap_remove(idx);
        let occupancy = remaining.min(omega * (2 * level.l + 1));
        remaining -= occupancy;
        value += occupancy as f64 * level.energy;
        filling.push((level, occupancy));
        if remaining > 0 {
            push(&mut frontier, level.l, level.n + 1)?;
            if level.n == 0 {
                push(&mut frontier, level.l + 1, 0)?;
            }
        }
    }
    Ok(CumulatedEnergy {
        particles,
        omega,
        value,
        filling,
    })
}

/// Lowest independent-particle energy of `n_up + n_down` spin-1/2 fermions
/// with fixed spin projections.
pub fn cumulated_energy_polarized(
    potential: &PotentialSpec,
    mass: f64,
    n_up: usize,
    n_down: usize,
) -> Result<f64> {
    let up = cumulated_energy(potential, mass, n_up, 1)?;
    let down = cumulated_energy(potential, mass, n_down, 1)?;
    Ok(up.value + down.value)
}
