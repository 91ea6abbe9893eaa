use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid partition {rows:?}: {reason}")]
    InvalidPartition {
        rows: Vec<usize>,
        reason: &'static str,
    },

    #[error("particle number {0} exceeds the exact-arithmetic cap of 20")]
    TooManyParticles(usize),

    #[error("invalid spin sector: N = {n}, 2S = {two_s}")]
    InvalidSpin { n: usize, two_s: usize },

    #[error("invalid symmetry sector: {0}")]
    InvalidSector(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no child system: the partition has a single box")]
    NoChildSystem,

    #[error("at least {min} particles are required, got {n}")]
    TooFewParticles { n: usize, min: usize },

    #[error("only {fitted} of {requested} particles fit into bound single-particle levels")]
    UnboundFilling { requested: usize, fitted: usize },

    #[error("radial solver failed: {0}")]
    RadialSolver(String),

    #[error("quadrature failed to converge: {0}")]
    Quadrature(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("no bound state below threshold {threshold} (best variational energy {best})")]
    Unbound { best: f64, threshold: f64 },

    #[error("harmonic quanta not tabulated for partition {0:?}")]
    UntabulatedPartition(Vec<usize>),
}
