//! Intrinsic (spin or flavour) states carrying a given permutation symmetry.
//!
//! The state used for a sector with intrinsic symmetry `[μ]` fills the Young
//! diagram of `[μ]` with particles row by row, gives every particle in row
//! `r` the intrinsic label `r`, and antisymmetrizes each column. It is the
//! highest-weight state of the `U(Ω)` irrep `[μ]`, hence lies entirely in the
//! `S_N` irrep `[μ]`; for spin-1/2 it is a product of singlet pairs and
//! spin-up particles with `M = S`.

use std::collections::BTreeMap;

use crate::fewbody::jacobi::{all_permutations, is_odd};
use crate::symrep::{Partition, Statistics};

/// Intrinsic state as a sparse combination of product states; the key holds
/// the intrinsic label of each particle.
#[derive(Clone, Debug, PartialEq)]
pub struct IntrinsicState {
    pub terms: BTreeMap<Vec<u8>, f64>,
}

impl IntrinsicState {
    pub fn highest_weight(shape: &Partition) -> Self {
        let rows = shape.rows();
        let n = shape.n();
        // particle index of box (row, col)
        let mut index = Vec::with_capacity(rows.len());
        let mut next = 0;
        for &len in rows {
            index.push((next..next + len).collect::<Vec<_>>());
            next += len;
        }
        let mut terms = BTreeMap::new();
        terms.insert(vec![0u8; n], 1.0);
        #[allow(clippy::needless_range_loop)]
        for col in 0..rows[0] {
            let height = rows.iter().take_while(|&&len| len > col).count();
            let members: Vec<usize> = (0..height).map(|r| index[r][col]).collect();
            let mut updated = BTreeMap::new();
            for sigma in all_permutations(height) {
                let sign = if is_odd(&sigma) { -1.0 } else { 1.0 };
                for (labels, c) in &terms {
                    let mut l = labels.clone();
                    for (r, &p) in members.iter().enumerate() {
                        l[p] = sigma[r] as u8;
                    }
                    *updated.entry(l).or_insert(0.0) += sign * c;
                }
            }
            terms = updated;
        }
        terms.retain(|_, c| *c != 0.0);
        IntrinsicState { terms }
    }

    pub fn norm_squared(&self) -> f64 {
        self.terms.values().map(|c| c * c).sum()
    }

    /// `⟨χ| P |χ⟩` with `(P χ)(s₁…s_N) = χ(s_{p(1)}…s_{p(N)})`.
    pub fn permutation_overlap(&self, image: &[usize]) -> f64 {
        let mut acc = 0.0;
        for (labels, c) in &self.terms {
            // P maps the product state with labels k to labels k' with
            // k'_{p(i)} = k_i.
            let mut permuted = labels.clone();
            for (i, &p) in image.iter().enumerate() {
                permuted[p] = labels[i];
            }
            if let Some(d) = self.terms.get(&permuted) {
                acc += c * d;
            }
        }
        acc
    }

    /// Eigenvalue of the total spin squared `S(S+1)` for two-valued labels
    /// (label 0 = up), or `None` if the state is not an eigenstate.
    pub fn spin_squared(&self) -> Option<f64> {
        let n = self.terms.keys().next()?.len();
        // S² = S_z² + N/2 + Σ_{i≠j} S⁺_i S⁻_j
        let mut image: BTreeMap<Vec<u8>, f64> = BTreeMap::new();
        for (labels, &c) in &self.terms {
            let sz: f64 = labels
                .iter()
                .map(|&l| if l == 0 { 0.5 } else { -0.5 })
                .sum();
            *image.entry(labels.clone()).or_insert(0.0) += c * (sz * sz + 0.5 * n as f64);
            for i in 0..n {
                for j in 0..n {
                    if i != j && labels[i] == 1 && labels[j] == 0 {
                        let mut l = labels.clone();
                        l[i] = 0;
                        l[j] = 1;
                        *image.entry(l).or_insert(0.0) += c;
                    }
                }
            }
        }
        let (labels, c) = self.terms.iter().next()?;
        let ratio = image.get(labels).copied().unwrap_or(0.0) / c;
        let consistent = self
            .terms
            .iter()
            .all(|(l, c)| (image.get(l).copied().unwrap_or(0.0) - ratio * c).abs() < 1e-12)
            && image
                .iter()
                .all(|(l, v)| self.terms.contains_key(l) || v.abs() < 1e-12);
        consistent.then_some(ratio)
    }
}

/// Weights `ε^{sgn P} ⟨χ|Pχ⟩ / ⟨χ|χ⟩` for every permutation in
/// lexicographic order.
pub fn symmetrizer_weights(statistics: Statistics, intrinsic: &Partition) -> Vec<f64> {
    let chi = IntrinsicState::highest_weight(intrinsic);
    let norm = chi.norm_squared();
    all_permutations(intrinsic.n())
        .iter()
        .map(|p| {
            let sign = if is_odd(p) { statistics.sign() } else { 1.0 };
            sign * chi.permutation_overlap(p) / norm
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symrep::dimension;

    fn p(rows: &[usize]) -> Partition {
        Partition::new(rows.to_vec()).unwrap()
    }

    #[test]
    fn spin_states_have_the_right_total_spin() {
        for (shape, s) in [
            (p(&[2, 1]), 0.5),
            (p(&[3]), 1.5),
            (p(&[2, 2]), 0.0),
            (p(&[3, 1]), 1.0),
            (p(&[2]), 1.0),
            (p(&[1, 1]), 0.0),
        ] {
            let chi = IntrinsicState::highest_weight(&shape);
            let s2 = chi.spin_squared().expect("eigenstate");
            assert!((s2 - s * (s + 1.0)).abs() < 1e-12, "{shape}: {s2}");
        }
    }

    #[test]
    fn character_projection_identifies_the_irrep() {
        // (d/N!) Σ_P χ_μ(P) ⟨χ|Pχ⟩ is the weight of irrep μ; for the
        // highest-weight state it must be 1. Use the trace trick with the
        // sign character for the antisymmetric case.
        let w = symmetrizer_weights(Statistics::Boson, &p(&[1, 1, 1]));
        let proj: f64 = all_permutations(3)
            .iter()
            .zip(&w)
            .map(|(q, x)| if is_odd(q) { -x } else { *x })
            .sum::<f64>()
            / 6.0;
        assert!((proj - 1.0).abs() < 1e-12);
        // For [2,1] the symmetric and antisymmetric projections vanish.
        let w = symmetrizer_weights(Statistics::Boson, &p(&[2, 1]));
        let sym: f64 = w.iter().sum::<f64>() / 6.0;
        let anti: f64 = all_permutations(3)
            .iter()
            .zip(&w)
            .map(|(q, x)| if is_odd(q) { -x } else { *x })
            .sum::<f64>()
            / 6.0;
        assert!(sym.abs() < 1e-12 && anti.abs() < 1e-12);
        assert_eq!(dimension(&p(&[2, 1])).unwrap(), 2);
    }

    #[test]
    fn fermion_weights_carry_the_sign() {
        let w = symmetrizer_weights(Statistics::Fermion, &p(&[3]));
        for (q, x) in all_permutations(3).iter().zip(&w) {
            assert_eq!(*x, if is_odd(q) { -1.0 } else { 1.0 });
        }
    }
}
