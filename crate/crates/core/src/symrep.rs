//! Young-diagram combinatorics of the symmetric group.
//!
//! Partitions label the permutation symmetry of the orbital wave function.
//! Dimensions come from the factorial product formula evaluated over prime
//! exponents, so every intermediate stays exact up to the `N = 20` cap.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest particle number accepted by the exact combinatorics.
pub const MAX_PARTICLES: usize = 20;

/// A Young diagram `[λ_1, λ_2, …]` with strictly positive, non-increasing rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    rows: Vec<usize>,
}

impl Partition {
    /// Builds a partition, dropping trailing zero rows.
    pub fn new(mut rows: Vec<usize>) -> Result<Self> {
        while rows.last() == Some(&0) {
            rows.pop();
        }
        if rows.is_empty() {
            return Err(Error::InvalidPartition {
                rows,
                reason: "empty diagram",
            });
        }
        if rows.contains(&0) {
            return Err(Error::InvalidPartition {
                rows,
                reason: "zero row before a non-zero row",
            });
        }
        if rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition {
                rows,
                reason: "rows must be non-increasing",
            });
        }
        Ok(Partition { rows })
    }

    /// The one-row diagram `[N]`.
    pub fn symmetric(n: usize) -> Self {
        Partition { rows: vec![n] }
    }

    /// The one-column diagram `[1^N]`.
    pub fn antisymmetric(n: usize) -> Self {
        Partition { rows: vec![1; n] }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    /// Total number of boxes.
    pub fn n(&self) -> usize {
        self.rows.iter().sum()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_columns(&self) -> usize {
        self.rows[0]
    }

    /// All partitions of `n`, in reverse lexicographic order (`[n]` first).
    pub fn all(n: usize) -> Vec<Partition> {
        fn go(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition {
                    rows: prefix.clone(),
                });
                return;
            }
            for first in (1..=rest.min(max)).rev() {
                prefix.push(first);
                go(rest - first, first, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n > 0 {
            go(n, n, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(rows: Vec<usize>) -> Result<Self> {
        Partition::new(rows)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.rows
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "]")
    }
}

/// Transposed diagram (rows and columns interchanged).
pub fn conjugate(p: &Partition) -> Partition {
    let rows = (1..=p.num_columns())
        .map(|c| p.rows.iter().take_while(|&&r| r >= c).count())
        .collect();
    Partition { rows }
}

const PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

// Prime exponents of products and quotients of integers below 41.
#[derive(Default)]
struct PrimePowers([i32; PRIMES.len()]);

impl PrimePowers {
    fn mul(&mut self, mut k: u64, sign: i32) {
        debug_assert!((1..=40).contains(&k));
        for (e, &p) in self.0.iter_mut().zip(PRIMES.iter()) {
            while k.is_multiple_of(p) {
                k /= p;
                *e += sign;
            }
        }
    }

    fn mul_factorial(&mut self, k: u64, sign: i32) {
        for j in 2..=k {
            self.mul(j, sign);
        }
    }

    fn value(&self) -> Option<u64> {
        let mut acc: u64 = 1;
        for (&e, &p) in self.0.iter().zip(PRIMES.iter()) {
            if e < 0 {
                return None;
            }
            for _ in 0..e {
                acc = acc.checked_mul(p)?;
            }
        }
        Some(acc)
    }
}

/// Dimension of the irreducible representation labelled by `p`.
pub fn dimension(p: &Partition) -> Result<u64> {
    let n = p.n();
    if n > MAX_PARTICLES {
        return Err(Error::TooManyParticles(n));
    }
    let rows = &p.rows;
    let len = rows.len();
    let mut acc = PrimePowers::default();
    acc.mul_factorial(n as u64, 1);
    for i in 0..len {
        for j in (i + 1)..len {
            acc.mul((rows[i] + j - rows[j] - i) as u64, 1);
        }
        acc.mul_factorial((rows[i] + len - 1 - i) as u64, -1);
    }
    acc.value().ok_or_else(|| Error::InvalidPartition {
        rows: rows.clone(),
        reason: "non-integral dimension",
    })
}

/// Orbital partition of `N` spin-1/2 fermions with total spin `S = two_s / 2`.
pub fn spin_sector_to_partition(n: usize, two_s: usize) -> Result<Partition> {
    if n == 0 || two_s > n || !(n - two_s).is_multiple_of(2) {
        return Err(Error::InvalidSpin { n, two_s });
    }
    let spin = Partition::new(vec![(n + two_s) / 2, (n - two_s) / 2])?;
    Ok(conjugate(&spin))
}

/// Most symmetric orbital partition `[Ω^ν, N − νΩ]` available to `N`
/// fermions with `omega` intrinsic states.
pub fn ground_partition(n: usize, omega: usize) -> Result<Partition> {
    if n == 0 || omega == 0 {
        return Err(Error::InvalidArgument(format!(
            "ground_partition({n}, {omega})"
        )));
    }
    let nu = n / omega;
    let mut rows = vec![omega; nu];
    rows.push(n - nu * omega);
    Partition::new(rows)
}

/// One entry of a [`BranchingTable`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub child: Partition,
    /// 1-based index of the row that lost a box.
    pub row: usize,
    pub weight: Ratio<u64>,
}

/// Restriction of an `S_N` irrep to `S_{N-1}`, with the dimension ratios as weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchingTable {
    pub parent: Partition,
    pub children: Vec<Branch>,
}

impl BranchingTable {
    pub fn total_weight(&self) -> Ratio<u64> {
        self.children
            .iter()
            .map(|b| b.weight)
            .fold(Ratio::from_integer(0), |a, b| a + b)
    }

    pub fn weight_of(&self, child: &Partition) -> Ratio<u64> {
        self.children
            .iter()
            .find(|b| &b.child == child)
            .map(|b| b.weight)
            .unwrap_or_else(|| Ratio::from_integer(0))
    }
}

pub fn branching(p: &Partition) -> Result<BranchingTable> {
    if p.n() < 2 {
        return Err(Error::NoChildSystem);
    }
    let parent_dim = dimension(p)?;
    let rows = &p.rows;
    let mut children = Vec::new();
    for (i, &r) in rows.iter().enumerate() {
        let next = rows.get(i + 1).copied().unwrap_or(0);
        if r > next {
            let mut child_rows = rows.clone();
            child_rows[i] -= 1;
            let child = Partition::new(child_rows)?;
            let weight = Ratio::new(dimension(&child)?, parent_dim);
            children.push(Branch {
                child,
                row: i + 1,
                weight,
            });
        }
    }
    Ok(BranchingTable {
        parent: p.clone(),
        children,
    })
}

/// Exchange statistics of the particles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Boson,
    Fermion,
}

impl Statistics {
    /// Sign picked up by the total state under an odd permutation.
    pub fn sign(self) -> f64 {
        match self {
            Statistics::Boson => 1.0,
            Statistics::Fermion => -1.0,
        }
    }
}

/// Permutation/spin symmetry of an N-body state.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymmetrySector {
    pub statistics: Statistics,
    pub orbital: Partition,
    /// `2S` for spin-1/2 fermions.
    pub two_s: Option<usize>,
    /// Number of intrinsic states per particle.
    pub omega: usize,
}

impl SymmetrySector {
    /// Spinless bosons, orbital symmetry `[N]`.
    pub fn spinless_bosons(n: usize) -> Self {
        SymmetrySector {
            statistics: Statistics::Boson,
            orbital: Partition::symmetric(n),
            two_s: None,
            omega: 1,
        }
    }

    pub fn spin_half_fermions(n: usize, two_s: usize) -> Result<Self> {
        Ok(SymmetrySector {
            statistics: Statistics::Fermion,
            orbital: spin_sector_to_partition(n, two_s)?,
            two_s: Some(two_s),
            omega: 2,
        })
    }

    /// Sector realizing an arbitrary orbital partition with the smallest
    /// intrinsic space that admits it.
    pub fn for_orbital(statistics: Statistics, orbital: Partition) -> Self {
        let omega = match statistics {
            Statistics::Boson => orbital.num_rows(),
            Statistics::Fermion => orbital.num_columns(),
        };
        SymmetrySector {
            statistics,
            orbital,
            two_s: None,
            omega,
        }
    }

    /// The sector of the same particles with another orbital symmetry, e.g.
    /// a subsystem's; the spin label follows the orbital partition.
    pub fn with_orbital(&self, orbital: Partition) -> Result<Self> {
        let two_s = match self.two_s {
            Some(_) => {
                let spin = conjugate(&orbital);
                let rows = spin.rows();
                if rows.len() > 2 {
                    return Err(Error::InvalidSector(format!(
                        "{orbital} has no spin-1/2 realization"
                    )));
                }
                Some(rows[0] - rows.get(1).copied().unwrap_or(0))
            }
            None => None,
        };
        let sector = SymmetrySector {
            statistics: self.statistics,
            orbital,
            two_s,
            omega: self.omega,
        };
        sector.validate()?;
        Ok(sector)
    }

    pub fn n(&self) -> usize {
        self.orbital.n()
    }

    /// Symmetry of the intrinsic (spin, isospin, …) part that couples with
    /// the orbital part to the required total symmetry.
    pub fn intrinsic_partition(&self) -> Partition {
        match self.statistics {
            Statistics::Boson => self.orbital.clone(),
            Statistics::Fermion => conjugate(&self.orbital),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.omega == 0 {
            return Err(Error::InvalidSector("omega must be positive".into()));
        }
        let intrinsic = self.intrinsic_partition();
        if intrinsic.num_rows() > self.omega {
            return Err(Error::InvalidSector(format!(
                "intrinsic symmetry {intrinsic} needs more than {} internal states",
                self.omega
            )));
        }
        if let Some(two_s) = self.two_s {
            if self.statistics != Statistics::Fermion || self.omega != 2 {
                return Err(Error::InvalidSector(
                    "spin label requires spin-1/2 fermions".into(),
                ));
            }
            let expected = spin_sector_to_partition(self.n(), two_s)?;
            if expected != self.orbital {
                return Err(Error::InvalidSector(format!(
                    "2S = {two_s} implies orbital {expected}, got {}",
                    self.orbital
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for SymmetrySector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.statistics {
            Statistics::Boson => "B",
            Statistics::Fermion => "F",
        };
        match self.two_s {
            Some(two_s) if two_s % 2 == 0 => write!(f, "{}{tag} S={}", self.n(), two_s / 2),
            Some(two_s) => write!(f, "{}{tag} S={two_s}/2", self.n()),
            None => write!(f, "{}{tag} {}", self.n(), self.orbital),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(rows: &[usize]) -> Partition {
        Partition::new(rows.to_vec()).unwrap()
    }

    #[test]
    fn dimensions_of_small_diagrams() {
        assert_eq!(dimension(&p(&[2, 1])).unwrap(), 2);
        assert_eq!(dimension(&p(&[1, 1, 1])).unwrap(), 1);
        assert_eq!(dimension(&p(&[2, 2])).unwrap(), 2);
        assert_eq!(dimension(&p(&[3, 1])).unwrap(), 3);
        assert_eq!(dimension(&p(&[1; 20])).unwrap(), 1);
    }

    #[test]
    fn dimension_rejects_large_n() {
        assert_eq!(
            dimension(&Partition::symmetric(21)),
            Err(Error::TooManyParticles(21))
        );
    }

    #[test]
    fn rejects_malformed_rows() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![]).is_err());
        assert!(Partition::new(vec![2, 0, 1]).is_err());
        assert_eq!(Partition::new(vec![2, 1, 0, 0]).unwrap(), p(&[2, 1]));
    }

    #[test]
    fn conjugates() {
        assert_eq!(conjugate(&p(&[3])), p(&[1, 1, 1]));
        assert_eq!(conjugate(&p(&[2, 1])), p(&[2, 1]));
        assert_eq!(conjugate(&p(&[2, 2])), p(&[2, 2]));
        assert_eq!(conjugate(&p(&[4, 2, 1])), p(&[3, 2, 1, 1]));
    }

    #[test]
    fn spin_sectors() {
        assert_eq!(spin_sector_to_partition(3, 1).unwrap(), p(&[2, 1]));
        assert_eq!(spin_sector_to_partition(3, 3).unwrap(), p(&[1, 1, 1]));
        assert_eq!(spin_sector_to_partition(4, 0).unwrap(), p(&[2, 2]));
        assert!(spin_sector_to_partition(3, 0).is_err());
        assert!(spin_sector_to_partition(2, 4).is_err());
    }

    #[test]
    fn ground_partitions() {
        assert_eq!(ground_partition(4, 2).unwrap(), p(&[2, 2]));
        assert_eq!(ground_partition(5, 2).unwrap(), p(&[2, 2, 1]));
        assert_eq!(ground_partition(3, 4).unwrap(), p(&[3]));
    }

    #[test]
    fn branching_examples() {
        let t = branching(&p(&[2, 1])).unwrap();
        assert_eq!(t.children.len(), 2);
        assert_eq!(t.children[0].child, p(&[1, 1]));
        assert_eq!(t.children[0].row, 1);
        assert_eq!(t.children[0].weight, Ratio::new(1, 2));
        assert_eq!(t.children[1].child, p(&[2]));
        assert_eq!(t.children[1].row, 2);
        assert_eq!(t.children[1].weight, Ratio::new(1, 2));

        let t = branching(&p(&[1, 1, 1])).unwrap();
        assert_eq!(t.children.len(), 1);
        assert_eq!(
            (t.children[0].row, t.children[0].weight),
            (3, Ratio::from_integer(1))
        );

        let t = branching(&p(&[2, 2])).unwrap();
        assert_eq!(t.children.len(), 1);
        assert_eq!(t.children[0].child, p(&[2, 1]));
        assert_eq!(t.children[0].weight, Ratio::from_integer(1));

        assert_eq!(branching(&p(&[1])), Err(Error::NoChildSystem));
    }

    #[test]
    fn sector_validation() {
        let s = SymmetrySector::spin_half_fermions(4, 2).unwrap();
        assert_eq!(s.orbital, p(&[2, 1, 1]));
        assert_eq!(s.intrinsic_partition(), p(&[3, 1]));
        s.validate().unwrap();

        let bad = SymmetrySector {
            omega: 2,
            ..SymmetrySector::for_orbital(Statistics::Fermion, p(&[3]))
        };
        assert!(bad.validate().is_err());

        let bosons = SymmetrySector::for_orbital(Statistics::Boson, p(&[3, 1]));
        assert_eq!(bosons.omega, 2);
        bosons.validate().unwrap();
    }
}
