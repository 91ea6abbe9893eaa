//! Ground-state energies of few identical particles and symmetry-resolved
//! lower bounds on them.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod fewbody;
pub mod onebody;
pub mod potentials;
pub mod quadrature;
pub mod special;
pub mod symrep;
pub mod system;

pub use bounds::{BoundKind, BoundReport, Ingredient, Side};
pub use error::{Error, Result};
pub use fewbody::{AngularSector, GaussianBasisElement, SolveResult, SolverConfig};
pub use potentials::{scale_coupling, PotentialKind, PotentialSpec, PotentialTerm};
pub use symrep::{Partition, Statistics, SymmetrySector};
pub use system::{AngularChoice, SystemSpec};
