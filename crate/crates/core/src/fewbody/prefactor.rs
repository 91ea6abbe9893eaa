//! Angular prefactors built from global vectors `v_i = Σ_k (u_i)_k x_k` and
//! the Wick-contraction tables used by the Gaussian matrix elements.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Orbital angular momentum and parity of a state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AngularSector {
    pub l: usize,
    /// `+1` or `−1`.
    pub parity: i8,
}

impl AngularSector {
    pub const fn new(l: usize, parity: i8) -> Self {
        AngularSector { l, parity }
    }

    /// Sectors searched by a scan for `n` particles.
    pub fn scan_list(n: usize) -> Vec<AngularSector> {
        let mut out = vec![AngularSector::new(0, 1), AngularSector::new(1, -1)];
        if n >= 3 {
            out.push(AngularSector::new(1, 1));
        }
        if n >= 4 {
            out.push(AngularSector::new(0, -1));
        }
        out.push(AngularSector::new(2, 1));
        out
    }
}

impl fmt::Display for AngularSector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.l, if self.parity > 0 { '+' } else { '-' })
    }
}

impl std::str::FromStr for AngularSector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || {
            Error::InvalidArgument(format!(
                "angular sector must look like `1-` or `0+`, got `{s}`"
            ))
        };
        let (digits, sign) = s.split_at(s.len().checked_sub(1).ok_or_else(bad)?);
        let l = digits.parse().map_err(|_| bad())?;
        let parity = match sign {
            "+" => 1,
            "-" => -1,
            _ => return Err(bad()),
        };
        Ok(AngularSector { l, parity })
    }
}

/// Polynomial prefactor family; each is multilinear in its global vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Prefactor {
    /// `1` (0⁺).
    Scalar,
    /// `v_z` (1⁻, M = 0).
    Vector,
    /// `(v₁ × v₂)_z` (1⁺, M = 0).
    Cross,
    /// `v₁ · (v₂ × v₃)` (0⁻).
    Triple,
    /// `3 v₁z v₂z − v₁ · v₂` (2⁺, M = 0).
    Quadrupole,
}

impl Prefactor {
    pub fn for_sector(sector: AngularSector, n: usize) -> Result<Self> {
        let p = match (sector.l, sector.parity) {
            (0, 1) => Prefactor::Scalar,
            (1, -1) => Prefactor::Vector,
            (1, 1) => Prefactor::Cross,
            (0, -1) => Prefactor::Triple,
            (2, 1) => Prefactor::Quadrupole,
            _ => {
                return Err(Error::InvalidSector(format!(
                    "angular sector {sector} is not supported"
                )))
            }
        };
        if p.vectors() > n - 1 && p != Prefactor::Quadrupole {
            return Err(Error::InvalidSector(format!(
                "{sector} needs {} independent Jacobi vectors; {n} particles have {}",
                p.vectors(),
                n - 1
            )));
        }
        Ok(p)
    }

    /// Number of global vectors.
    pub fn vectors(self) -> usize {
        match self {
            Prefactor::Scalar => 0,
            Prefactor::Vector => 1,
            Prefactor::Cross | Prefactor::Quadrupole => 2,
            Prefactor::Triple => 3,
        }
    }

    /// Cartesian tensor `t_{a₁…a_k}` with `P = t_{a…} Π (v_i)_{a_i}`.
    fn tensor(self, idx: &[usize]) -> f64 {
        match self {
            Prefactor::Scalar => 1.0,
            Prefactor::Vector => f64::from(idx[0] == 2),
            Prefactor::Cross => levi_civita(2, idx[0], idx[1]),
            Prefactor::Triple => levi_civita(idx[0], idx[1], idx[2]),
            Prefactor::Quadrupole => match (idx[0], idx[1]) {
                (2, 2) => 2.0,
                (a, b) if a == b => -1.0,
                _ => 0.0,
            },
        }
    }
}

fn levi_civita(a: usize, b: usize, c: usize) -> f64 {
    if a == b || b == c || a == c {
        0.0
    } else if (a, b, c) == (0, 1, 2) || (a, b, c) == (1, 2, 0) || (a, b, c) == (2, 0, 1) {
        1.0
    } else {
        -1.0
    }
}

/// Perfect matching of the `2k` prefactor slots (bra slots first) with its
/// Cartesian contraction coefficient.
#[derive(Clone, Debug)]
pub(crate) struct Matching {
    pub pairs: Vec<(usize, usize)>,
    pub coefficient: f64,
}

/// Matchings with non-zero coefficient for a bra/ket pair of prefactors.
pub(crate) fn contraction_table(kind: Prefactor) -> Vec<Matching> {
    let k = kind.vectors();
    let slots = 2 * k;
    let mut out = Vec::new();
    for pairs in perfect_matchings(slots) {
        let mut idx = vec![0usize; slots];
        let mut coefficient = 0.0;
        for code in 0..3usize.pow(pairs.len() as u32) {
            let mut c = code;
            for &(s, t) in &pairs {
                idx[s] = c % 3;
                idx[t] = c % 3;
                c /= 3;
            }
            coefficient += kind.tensor(&idx[..k]) * kind.tensor(&idx[k..]);
        }
        if coefficient != 0.0 {
            out.push(Matching { pairs, coefficient });
        }
    }
    out
}

fn perfect_matchings(slots: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(free: &[usize], acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        let Some((&first, rest)) = free.split_first() else {
            out.push(acc.clone());
            return;
        };
        for (i, &partner) in rest.iter().enumerate() {
            let remaining: Vec<usize> = rest
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &s)| s)
                .collect();
            acc.push((first, partner));
            rec(&remaining, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    let free: Vec<usize> = (0..slots).collect();
    rec(&free, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matching_counts() {
        assert_eq!(perfect_matchings(0).len(), 1);
        assert_eq!(perfect_matchings(2).len(), 1);
        assert_eq!(perfect_matchings(4).len(), 3);
        assert_eq!(perfect_matchings(6).len(), 15);
    }

    #[test]
    fn vector_table_is_single_cross_pair() {
        let t = contraction_table(Prefactor::Vector);
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].pairs, vec![(0, 1)]);
        assert_eq!(t[0].coefficient, 1.0);
    }

    #[test]
    fn cross_table() {
        // ε_zab ε_zcd contracted: bra-ket pairings only, coefficients ±2
        let t = contraction_table(Prefactor::Cross);
        assert_eq!(t.len(), 2);
        let sum: f64 = t.iter().map(|m| m.coefficient.abs()).sum();
        assert_eq!(sum, 4.0);
        assert!(t
            .iter()
            .all(|m| m.pairs.iter().all(|&(s, t)| (s < 2) != (t < 2))));
    }

    #[test]
    fn triple_table_is_determinant_expansion() {
        let t = contraction_table(Prefactor::Triple);
        assert_eq!(t.len(), 6);
        assert!(t.iter().all(|m| m.coefficient.abs() == 6.0));
    }

    #[test]
    fn sector_mapping() {
        assert_eq!(
            Prefactor::for_sector(AngularSector::new(1, 1), 3).unwrap(),
            Prefactor::Cross
        );
        assert!(Prefactor::for_sector(AngularSector::new(0, -1), 3).is_err());
        assert!(Prefactor::for_sector(AngularSector::new(1, 1), 2).is_err());
        assert!(Prefactor::for_sector(AngularSector::new(3, -1), 4).is_err());
        assert_eq!(
            "1-".parse::<AngularSector>().unwrap(),
            AngularSector::new(1, -1)
        );
        assert_eq!(AngularSector::new(2, 1).to_string(), "2+");
    }
}
