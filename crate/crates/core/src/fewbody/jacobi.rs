//! Normalized Jacobi coordinates for equal masses.

use nalgebra::{DMatrix, Matrix3, Vector3};

/// Relative coordinates `x = U r` with orthonormal rows of `U` orthogonal
/// to `(1, …, 1)`. Vectors and matrices over the `N − 1` Jacobi indices are
/// stored in fixed 3-dimensional containers; unused trailing components are
/// zero.
#[derive(Clone, Debug)]
pub struct JacobiFrame {
    pub n: usize,
    /// `(N − 1) × N` coefficient matrix.
    pub u: DMatrix<f64>,
    /// `w_ij` with `r_j − r_i = Σ_k (w_ij)_k x_k`, in pair order (0,1), (0,2), …
    pub pair_vectors: Vec<((usize, usize), Vector3<f64>)>,
}

/// A particle permutation together with its action on Jacobi vectors.
#[derive(Clone, Debug)]
pub struct PermutationAction {
    /// `image[i] = p(i)`: the permuted state reads particle `p(i)` in slot `i`.
    pub image: Vec<usize>,
    pub odd: bool,
    /// `T = U Π Uᵀ`, so that `(P f)(x) = f(T x)`.
    pub t: Matrix3<f64>,
}

impl JacobiFrame {
    pub fn new(n: usize) -> Self {
        assert!(
            (2..=4).contains(&n),
            "Jacobi frames are provided for 2 to 4 particles"
        );
        let mut u = DMatrix::zeros(n - 1, n);
        for k in 1..n {
            let kf = k as f64;
            for i in 0..k {
                u[(k - 1, i)] = 1.0 / (kf * (kf + 1.0)).sqrt();
            }
            u[(k - 1, k)] = -(kf / (kf + 1.0)).sqrt();
        }
        let mut pair_vectors = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let mut w = Vector3::zeros();
                for k in 0..n - 1 {
                    w[k] = u[(k, j)] - u[(k, i)];
                }
                pair_vectors.push(((i, j), w));
            }
        }
        JacobiFrame { n, u, pair_vectors }
    }

    pub fn dim(&self) -> usize {
        self.n - 1
    }

    /// Identity on the unused trailing components, zero elsewhere.
    pub fn padding(&self) -> Matrix3<f64> {
        let mut p = Matrix3::zeros();
        for k in self.dim()..3 {
            p[(k, k)] = 1.0;
        }
        p
    }

    /// `A = 2 Σ α_ij w_ij w_ijᵀ`, so that `½ xᵀ A x = Σ α_ij r_ij²`.
    pub fn width_matrix(&self, pair_widths: &[f64]) -> Matrix3<f64> {
        debug_assert_eq!(pair_widths.len(), self.pair_vectors.len());
        let mut a = Matrix3::zeros();
        for (alpha, (_, w)) in pair_widths.iter().zip(&self.pair_vectors) {
            a += 2.0 * alpha * w * w.transpose();
        }
        a
    }

    pub fn permutation(&self, image: &[usize]) -> PermutationAction {
        let n = self.n;
        let mut pi = DMatrix::zeros(n, n);
        for (i, &p) in image.iter().enumerate() {
            pi[(i, p)] = 1.0;
        }
        let full = &self.u * pi * self.u.transpose();
        let mut t = Matrix3::zeros();
        for a in 0..n - 1 {
            for b in 0..n - 1 {
                t[(a, b)] = full[(a, b)];
            }
        }
        PermutationAction {
            image: image.to_vec(),
            odd: is_odd(image),
            t,
        }
    }

    /// All `N!` permutations, identity first, in lexicographic order.
    pub fn permutations(&self) -> Vec<PermutationAction> {
        all_permutations(self.n)
            .iter()
            .map(|p| self.permutation(p))
            .collect()
    }
}

pub(crate) fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

pub(crate) fn is_odd(image: &[usize]) -> bool {
    let mut inversions = 0;
    for i in 0..image.len() {
        for j in (i + 1)..image.len() {
            if image[i] > image[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_are_orthonormal_and_internal() {
        for n in 2..=4 {
            let f = JacobiFrame::new(n);
            let g = &f.u * f.u.transpose();
            assert!((g - DMatrix::identity(n - 1, n - 1)).norm() < 1e-14);
            for k in 0..n - 1 {
                assert!(f.u.row(k).sum().abs() < 1e-14);
            }
            for (_, w) in &f.pair_vectors {
                assert!((w.norm_squared() - 2.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn harmonic_identity() {
        // Σ_{i<j} w wᵀ = N · 1 on the internal space
        for n in 2..=4 {
            let f = JacobiFrame::new(n);
            let s: Matrix3<f64> = f.pair_vectors.iter().map(|(_, w)| w * w.transpose()).sum();
            let expected = (Matrix3::identity() - f.padding()) * n as f64;
            assert!((s - expected).norm() < 1e-13);
        }
    }

    #[test]
    fn permutations_are_orthogonal_and_map_pairs() {
        let f = JacobiFrame::new(4);
        let perms = f.permutations();
        assert_eq!(perms.len(), 24);
        assert!(perms[0].image == vec![0, 1, 2, 3] && !perms[0].odd);
        for p in &perms {
            let t = p.t + f.padding();
            assert!((t.transpose() * t - Matrix3::identity()).norm() < 1e-13);
            // (Π r)_i = r_{p(i)}: the pair (i, j) of the permuted
            // configuration is the pair (p(i), p(j)) of the original.
            for ((i, j), w) in &f.pair_vectors {
                let (a, b) = (p.image[*i], p.image[*j]);
                let w_orig = f
                    .pair_vectors
                    .iter()
                    .find(|((x, y), _)| (*x, *y) == (a.min(b), a.max(b)))
                    .unwrap()
                    .1;
                let sign = if a < b { 1.0 } else { -1.0 };
                assert!((p.t.transpose() * w - sign * w_orig).norm() < 1e-13);
            }
        }
    }
}
