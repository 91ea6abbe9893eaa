//! Memoized ground-state energies shared by the experiments.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use fewbound_core::fewbody::solve;
use fewbound_core::onebody::relative_two_body_energy;
use fewbound_core::{
    AngularChoice, Error, Partition, PotentialSpec, Result, SolveResult, SolverConfig,
    SymmetrySector, SystemSpec,
};
use serde::Serialize;

/// Lowest energy of a subsystem symmetry, over all angular sectors.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Energy {
    pub value: f64,
    /// False when no state lies below the break-up threshold; `value` is
    /// then the threshold itself, the bottom of the continuum.
    pub bound: bool,
    /// Where the minimum was found, e.g. `1-` or `l=1`.
    pub found_in: String,
    pub basis_size: usize,
}

type Cached = std::result::Result<Arc<SolveResult>, Error>;

pub struct EnergyService {
    config: SolverConfig,
    cache: RwLock<HashMap<String, Cached>>,
}

fn two_body(orbital: &Partition, mass: f64, potential: &PotentialSpec) -> Result<Energy> {
    let odd = orbital.num_rows() == 2;
    let found_in = format!("l={}", usize::from(odd));
    Ok(match relative_two_body_energy(potential, mass, odd)? {
        Some(e) if !potential.is_short_range() || e < 0.0 => Energy {
            value: e,
            bound: true,
            found_in,
            basis_size: 0,
        },
        _ => Energy {
            value: 0.0,
            bound: false,
            found_in,
            basis_size: 0,
        },
    })
}

fn key(system: &SystemSpec) -> String {
    format!(
        "{}|{:?}|{}|{}|{}",
        system.sector,
        system.sector.orbital.rows(),
        system.mass.to_bits(),
        system
            .potential
            .terms
            .iter()
            .map(|t| format!("{:?}", t))
            .collect::<Vec<_>>()
            .join(";"),
        system.angular
    )
}

impl EnergyService {
    pub fn new(config: SolverConfig) -> Self {
        EnergyService {
            config,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    /// Variational solve, computed once per system.
    pub fn solve(&self, system: &SystemSpec) -> Cached {
        let k = key(system);
        if let Some(hit) = self.cache.read().expect("cache lock").get(&k) {
            return hit.clone();
        }
        let result = solve(system, &self.config).map(Arc::new);
        self.cache
            .write()
            .expect("cache lock")
            .entry(k)
            .or_insert(result)
            .clone()
    }

    /// Lowest energy of particles like `like` with the given orbital symmetry.
    pub fn lowest(
        &self,
        like: &SymmetrySector,
        orbital: &Partition,
        mass: f64,
        potential: &PotentialSpec,
    ) -> Result<Energy> {
        if orbital.n() == 2 {
            return two_body(orbital, mass, potential);
        }
        let sector = like.with_orbital(orbital.clone())?;
        self.lowest_in(&SystemSpec::new(
            mass,
            potential.clone(),
            sector,
            AngularChoice::Scan,
        )?)
    }

    /// Energy of a system, falling back to its threshold when nothing is bound.
    pub fn lowest_in(&self, system: &SystemSpec) -> Result<Energy> {
        if system.n == 2 && system.angular == AngularChoice::Scan {
            return two_body(&system.sector.orbital, system.mass, &system.potential);
        }
        match self.solve(system) {
            Ok(r) => Ok(Energy {
                value: r.energy,
                bound: true,
                found_in: r.angular.to_string(),
                basis_size: r.basis_size,
            }),
            Err(Error::Unbound { threshold, .. }) => Ok(Energy {
                value: threshold,
                bound: false,
                found_in: "threshold".into(),
                basis_size: 0,
            }),
            Err(e) => Err(e),
        }
    }

    pub fn len(&self) -> usize {
        self.cache.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
