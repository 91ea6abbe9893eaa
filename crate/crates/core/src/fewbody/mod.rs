//! Variational ground states of 2 to 4 identical particles.
//!
//! The internal Hamiltonian is expanded in correlated Gaussians with
//! angular prefactors; permutation symmetry is imposed by applying the
//! signed symmetrizer, acting jointly on space and on an intrinsic state of
//! the requested symmetry, to the ket.

mod gaussian;
mod intrinsic;
mod jacobi;
mod prefactor;
mod solver;

pub use gaussian::GaussianBasisElement;
pub use intrinsic::{symmetrizer_weights, IntrinsicState};
pub use jacobi::{JacobiFrame, PermutationAction};
pub use prefactor::{AngularSector, Prefactor};
pub use solver::{
    antisymmetrized_matrix_elements, solve, threshold_energy, MatrixElements, ScanEntry,
    SolveResult, SolverConfig,
};

use crate::error::{Error, Result};
use crate::symrep::Partition;

/// Minimal number of oscillator quanta of the internal motion for an
/// orbital symmetry, tabulated for up to four particles.
pub fn harmonic_quanta(orbital: &Partition) -> Result<usize> {
    let q = match orbital.rows() {
        [_] => 0,
        [2, 1] | [3, 1] => 1,
        [1, 1, 1] | [2, 2] | [2, 1, 1] => 2,
        [1, 1, 1, 1] => 3,
        [1, 1] => 1,
        _ => return Err(Error::UntabulatedPartition(orbital.rows().to_vec())),
    };
    Ok(q)
}

/// Exact internal ground energy of `N` particles with pair potential
/// `g r²`: `(Q + 3(N−1)/2) √(2Ng/m)`.
pub fn ho_exact_energy(n: usize, orbital: &Partition, g: f64, m: f64) -> Result<f64> {
    if orbital.n() != n {
        return Err(Error::InvalidArgument(format!(
            "partition {orbital} does not describe {n} particles"
        )));
    }
    if !(g > 0.0 && m > 0.0) {
        return Err(Error::InvalidArgument(
            "coupling and mass must be positive".into(),
        ));
    }
    let q = harmonic_quanta(orbital)? as f64;
    Ok((q + 1.5 * (n - 1) as f64) * (2.0 * n as f64 * g / m).sqrt())
}
