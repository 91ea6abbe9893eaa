//! Correlated Gaussians with polynomial prefactors and their matrix elements.
//!
//! A primitive is `φ(X) = P(v₁, …, v_k) exp(−½ tr XᵀAX)` with `X` the
//! `(N−1) × 3` array of Jacobi vectors and `v_i = Xᵀu_i`. All integrals
//! reduce to Wick contractions under the Gaussian of `B = A + A'`.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::fewbody::jacobi::{JacobiFrame, PermutationAction};
use crate::fewbody::prefactor::{contraction_table, Matching, Prefactor};
use crate::potentials::{isotropic_density_prefactor, PotentialSpec};

/// One basis function: pair widths `α_ij` (pair order (0,1), (0,2), …) and
/// the global-vector coefficients of its prefactor, each of length `N − 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianBasisElement {
    pub pair_widths: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// Primitive in the padded 3-dimensional Jacobi representation.
#[derive(Clone, Debug)]
pub(crate) struct Primitive {
    pub a: Matrix3<f64>,
    pub u: [Vector3<f64>; 3],
}

impl Primitive {
    pub fn from_element(frame: &JacobiFrame, element: &GaussianBasisElement) -> Self {
        let mut u = [Vector3::zeros(); 3];
        for (slot, v) in u.iter_mut().zip(&element.vectors) {
            for (k, x) in v.iter().enumerate() {
                slot[k] = *x;
            }
        }
        Primitive {
            a: frame.width_matrix(&element.pair_widths),
            u,
        }
    }

    /// `(Pφ)(x) = φ(Tx)`.
    pub fn permuted(&self, perm: &PermutationAction) -> Self {
        let t = &perm.t;
        Primitive {
            a: t.transpose() * self.a * t,
            u: [
                t.transpose() * self.u[0],
                t.transpose() * self.u[1],
                t.transpose() * self.u[2],
            ],
        }
    }
}

/// Overlap, kinetic (`Σ π²`, without the `1/2m`) and pair-potential
/// integrals between two primitives.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct Elements {
    pub overlap: f64,
    pub kinetic: f64,
    pub potential: f64,
}

impl std::ops::AddAssign<Elements> for Elements {
    fn add_assign(&mut self, o: Elements) {
        self.overlap += o.overlap;
        self.kinetic += o.kinetic;
        self.potential += o.potential;
    }
}

impl std::ops::Mul<f64> for Elements {
    type Output = Elements;
    fn mul(self, s: f64) -> Elements {
        Elements {
            overlap: self.overlap * s,
            kinetic: self.kinetic * s,
            potential: self.potential * s,
        }
    }
}

const DOUBLE_FACTORIAL_ODD: [f64; 4] = [1.0, 3.0, 15.0, 105.0];

/// Precomputed context shared by all element evaluations of one system.
#[derive(Clone, Debug)]
pub(crate) struct Integrator {
    pub frame: JacobiFrame,
    pub kind: Prefactor,
    pub table: Vec<Matching>,
    pub potential: PotentialSpec,
    padding: Matrix3<f64>,
    dim: usize,
}

impl Integrator {
    pub fn new(frame: JacobiFrame, kind: Prefactor, potential: PotentialSpec) -> Self {
        let padding = frame.padding();
        let dim = frame.dim();
        Integrator {
            table: contraction_table(kind),
            frame,
            kind,
            potential,
            padding,
            dim,
        }
    }

    fn slots(&self, bra: &Primitive, ket: &Primitive) -> ([Vector3<f64>; 6], usize) {
        let k = self.kind.vectors();
        let mut v = [Vector3::zeros(); 6];
        v[..k].copy_from_slice(&bra.u[..k]);
        v[k..2 * k].copy_from_slice(&ket.u[..k]);
        (v, k)
    }

    /// Overlap only.
    pub fn overlap(&self, bra: &Primitive, ket: &Primitive) -> f64 {
        let b = bra.a + ket.a + self.padding;
        let Some(c) = b.try_inverse() else { return 0.0 };
        let det = b.determinant();
        if !(det > 0.0) {
            return 0.0;
        }
        let norm = ((2.0 * PI).powi(self.dim as i32) / det).powf(1.5);
        let (v, k) = self.slots(bra, ket);
        let mut gamma = [[0.0; 6]; 6];
        fill_gamma(&mut gamma, &v[..2 * k], &c);
        norm * self
            .table
            .iter()
            .map(|m| m.coefficient * m.pairs.iter().map(|&(s, t)| gamma[s][t]).product::<f64>())
            .sum::<f64>()
    }

    pub fn elements(&self, bra: &Primitive, ket: &Primitive) -> Elements {
        let b = bra.a + ket.a + self.padding;
        let det = b.determinant();
        let Some(c) = b.try_inverse().filter(|_| det > 0.0) else {
            return Elements::default();
        };
        let norm = ((2.0 * PI).powi(self.dim as i32) / det).powf(1.5);
        let (v, k) = self.slots(bra, ket);
        let slots = 2 * k;
        let mut gamma = [[0.0; 6]; 6];
        fill_gamma(&mut gamma, &v[..slots], &c);

        // kinetic: ∫ ∇φ·∇φ' with M = sym(A A')
        let m = 0.5 * (bra.a * ket.a + ket.a * bra.a);
        let trace_mc = (m * c).trace();
        let mut delta = [[0.0; 6]; 6];
        if k > 0 {
            let mut cu = [Vector3::zeros(); 6];
            // derivative acting on slot x turns u_x into A' u_x (bra) or A u_x (ket)
            let mut cd = [Vector3::zeros(); 6];
            for x in 0..slots {
                cu[x] = c * v[x];
                cd[x] = if x < k {
                    c * (ket.a * v[x])
                } else {
                    c * (bra.a * v[x])
                };
            }
            for s in 0..slots {
                let mcu = m * cu[s];
                for t in (s + 1)..slots {
                    let mut d = 2.0 * cu[t].dot(&mcu) - v[t].dot(&cd[s]) - v[s].dot(&cd[t]);
                    if (s < k) != (t < k) {
                        d += v[s].dot(&v[t]);
                    }
                    delta[s][t] = d;
                }
            }
        }

        let mut overlap = 0.0;
        let mut kinetic_pairs = 0.0;
        for mtch in &self.table {
            let mut factors = [0.0; 3];
            for (f, &(s, t)) in factors.iter_mut().zip(&mtch.pairs) {
                *f = gamma[s][t];
            }
            let kp = mtch.pairs.len();
            overlap += mtch.coefficient * factors[..kp].iter().product::<f64>();
            for (p, &(s, t)) in mtch.pairs.iter().enumerate() {
                let mut others = 1.0;
                for (q, f) in factors[..kp].iter().enumerate() {
                    if q != p {
                        others *= f;
                    }
                }
                kinetic_pairs += mtch.coefficient * delta[s][t] * others;
            }
        }
        let kinetic = norm * (3.0 * trace_mc * overlap + kinetic_pairs);

        // potential, pair by pair
        let mut potential = 0.0;
        for (_, w) in &self.frame.pair_vectors {
            let cw = c * w;
            let sigma2 = w.dot(&cw);
            let mut r = [0.0; 4];
            self.potential
                .add_radial_moments(0.5 / sigma2, &mut r[..=k]);
            let pref = isotropic_density_prefactor(sigma2);
            for (j, x) in r[..=k].iter_mut().enumerate() {
                *x *= pref / DOUBLE_FACTORIAL_ODD[j];
            }
            if k == 0 {
                potential += r[0];
                continue;
            }
            let mut h = [0.0; 6];
            for (hs, x) in h.iter_mut().zip(&v[..slots]) {
                *hs = x.dot(&cw);
            }
            let mut acc = 0.0;
            for mtch in &self.table {
                // coefficients of Π_p (a_p + b_p t)
                let mut poly = [0.0; 4];
                poly[0] = 1.0;
                for (deg, &(s, t)) in mtch.pairs.iter().enumerate() {
                    let a = gamma[s][t] - h[s] * h[t] / sigma2;
                    let b = h[s] * h[t] / (sigma2 * sigma2);
                    for j in (0..=deg + 1).rev() {
                        poly[j] = poly[j] * a + if j > 0 { poly[j - 1] * b } else { 0.0 };
                    }
                }
                acc += mtch.coefficient * poly.iter().zip(&r).map(|(e, rj)| e * rj).sum::<f64>();
            }
            potential += acc;
        }
        Elements {
            overlap: norm * overlap,
            kinetic,
            potential: norm * potential,
        }
    }
}

fn fill_gamma(gamma: &mut [[f64; 6]; 6], v: &[Vector3<f64>], c: &Matrix3<f64>) {
    for s in 0..v.len() {
        let cv = c * v[s];
        for t in s..v.len() {
            let g = v[t].dot(&cv);
            gamma[s][t] = g;
            gamma[t][s] = g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::PotentialTerm;

    fn integrator(n: usize, kind: Prefactor, pot: PotentialSpec) -> Integrator {
        Integrator::new(JacobiFrame::new(n), kind, pot)
    }

    fn element(widths: &[f64], vectors: &[&[f64]]) -> GaussianBasisElement {
        GaussianBasisElement {
            pair_widths: widths.to_vec(),
            vectors: vectors.iter().map(|v| v.to_vec()).collect(),
        }
    }

    #[test]
    fn two_body_scalar_closed_forms() {
        // exp(−α r²) with r = √2 |x|: width a = 4α in ½ a x²
        let harm = PotentialSpec::single(PotentialTerm::harmonic(1.0));
        let it = integrator(2, Prefactor::Scalar, harm);
        let (al, be) = (0.7, 1.3);
        let f = it.frame.clone();
        let e1 = Primitive::from_element(&f, &element(&[al], &[]));
        let e2 = Primitive::from_element(&f, &element(&[be], &[]));
        let el = it.elements(&e1, &e2);
        let b = 4.0 * (al + be);
        let s = (2.0 * PI / b).powf(1.5);
        assert!((el.overlap - s).abs() < 1e-14 * s);
        // Σπ²: 3 a a' / b
        let t = 3.0 * 16.0 * al * be / b * s;
        assert!((el.kinetic - t).abs() < 1e-13 * t);
        // ⟨r²⟩ = 2 ⟨x²⟩ = 2·3/b
        let v = 6.0 / b * s;
        assert!((el.potential - v).abs() < 1e-13 * v);
    }

    #[test]
    fn vector_prefactor_two_body() {
        // φ = z exp(−a x²/2) is an oscillator p state with mω = a
        let harm = PotentialSpec::single(PotentialTerm::harmonic(1.0));
        let it = integrator(2, Prefactor::Vector, harm);
        let f = it.frame.clone();
        let al = 0.4;
        let e = Primitive::from_element(&f, &element(&[al], &[&[1.0]]));
        let el = it.elements(&e, &e);
        let a = 4.0 * al;
        let b = 2.0 * a;
        let s = (2.0 * PI / b).powf(1.5) / b;
        assert!((el.overlap - s).abs() < 1e-14 * s);
        // for a p-wave oscillator state ⟨p²⟩ = (5/2) a  and ⟨x²⟩ = 5/(2a)
        assert!((el.kinetic / el.overlap - 2.5 * a).abs() < 1e-12);
        assert!((el.potential / el.overlap - 2.0 * 2.5 / a).abs() < 1e-12);
    }

    #[test]
    fn hermiticity_of_elements() {
        let pot = PotentialSpec::single(PotentialTerm::yukawa(-5.0));
        for kind in [
            Prefactor::Scalar,
            Prefactor::Vector,
            Prefactor::Cross,
            Prefactor::Triple,
            Prefactor::Quadrupole,
        ] {
            let it = integrator(4, kind, pot.clone());
            let f = it.frame.clone();
            let a = Primitive::from_element(
                &f,
                &element(
                    &[0.3, 0.5, 0.9, 1.1, 0.2, 0.7],
                    &[&[0.3, -0.5, 0.8], &[0.1, 0.9, -0.4], &[0.6, 0.2, 0.7]],
                ),
            );
            let b = Primitive::from_element(
                &f,
                &element(
                    &[1.3, 0.25, 0.4, 0.6, 0.8, 0.35],
                    &[&[-0.2, 0.7, 0.3], &[0.5, 0.1, 0.8], &[0.9, -0.3, 0.2]],
                ),
            );
            let ab = it.elements(&a, &b);
            let ba = it.elements(&b, &a);
            for (x, y) in [
                (ab.overlap, ba.overlap),
                (ab.kinetic, ba.kinetic),
                (ab.potential, ba.potential),
            ] {
                assert!(
                    (x - y).abs() < 1e-12 * x.abs().max(1e-300),
                    "{kind:?}: {x} vs {y}"
                );
            }
            assert!((it.overlap(&a, &b) - ab.overlap).abs() < 1e-14 * ab.overlap.abs());
        }
    }
}
