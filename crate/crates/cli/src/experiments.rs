//! The experiment runners. Each returns a CSV table and a serializable
//! detailed report; rows are evaluated in parallel and kept in input order.

use anyhow::{anyhow, bail, Context, Result};
use fewbound_core::bounds::{
    basdevant_martin_filling, bound_basdevant_martin, bound_levy_leblond, bound_naive,
    bound_spin_half, bound_symmetry_resolved, bound_translation_invariant, power_law_energy_unit,
};
use fewbound_core::onebody::{cumulated_energy, radial_spectrum, radial_state};
use fewbound_core::symrep::spin_sector_to_partition;
use fewbound_core::{
    AngularChoice, BoundReport, Error, PotentialSpec, PotentialTerm, Side, Statistics,
    SymmetrySector, SystemSpec,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{BosonBound, CouplingReading, ExperimentConfig, QdotSpec};
use crate::energies::{Energy, EnergyService};
use crate::output::{Cell, Table};
use crate::qdot::reduce_quantum_dot;

/// Output of one experiment.
pub struct Outcome {
    pub table: Table,
    pub report: serde_json::Value,
    /// Identifier of the potentials involved, for the CSV header.
    pub convention: String,
}

/// Ratios printed in the paper's Table 1, by potential and coupling, in
/// column order 3B0, 3F1/2, 3F3/2, 4B0, 4F0, 4F2.
pub const PAPER_TABLE1: [(&str, f64, [f64; 6]); 6] = [
    ("Y", 8.0, [0.933, 0.673, 0.759, 0.966, 0.743, 0.855]),
    ("Y", 15.0, [0.943, 0.757, 0.930, 0.971, 0.806, 0.964]),
    ("G", 10.0, [0.996, 0.960, 0.887, 0.998, 0.792, 0.945]),
    ("G", 20.0, [0.999, 0.995, 0.994, 0.999, 0.898, 0.997]),
    ("E", 6.0, [0.988, 0.906, 0.843, 0.994, 0.795, 0.913]),
    ("E", 12.0, [0.994, 0.974, 0.982, 0.997, 0.886, 0.991]),
];

/// A Table 1 column: particle number and spin (`None` for bosons).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Column {
    pub n: usize,
    pub two_s: Option<usize>,
}

pub const TABLE1_COLUMNS: [Column; 6] = [
    Column { n: 3, two_s: None },
    Column {
        n: 3,
        two_s: Some(1),
    },
    Column {
        n: 3,
        two_s: Some(3),
    },
    Column { n: 4, two_s: None },
    Column {
        n: 4,
        two_s: Some(0),
    },
    Column {
        n: 4,
        two_s: Some(4),
    },
];

pub fn spin_text(two_s: usize) -> String {
    if two_s.is_multiple_of(2) {
        (two_s / 2).to_string()
    } else {
        format!("{two_s}/2")
    }
}

impl Column {
    pub fn label(&self) -> String {
        match self.two_s {
            None => format!("{}B0", self.n),
            Some(s) => format!("{}F{}", self.n, spin_text(s)),
        }
    }

    fn sector(&self) -> Result<SymmetrySector> {
        Ok(match self.two_s {
            None => SymmetrySector::spinless_bosons(self.n),
            Some(s) => SymmetrySector::spin_half_fermions(self.n, s)?,
        })
    }
}

/// Short-range shape for a Table 1 label, attractive for `g > 0`.
pub fn table1_potential(label: &str, g: f64) -> Result<PotentialSpec> {
    let term = match label {
        "Y" => PotentialTerm::yukawa(-g),
        "G" => PotentialTerm::gaussian(-g),
        "E" => PotentialTerm::exponential(-g),
        other => bail!("unknown Table 1 potential `{other}`"),
    };
    Ok(PotentialSpec::single(term))
}

fn solve_or_threshold(service: &EnergyService, system: &SystemSpec) -> Result<Energy> {
    service.lowest_in(system).map_err(|e| anyhow!(e))
}

/// Lowest (N−1)-body energy with the given spin, as a function for the bounds.
fn spin_child<'a>(
    service: &'a EnergyService,
    parent: &'a SymmetrySector,
) -> impl FnMut(usize, f64, &PotentialSpec) -> fewbound_core::Result<f64> + 'a {
    move |two_s, mass, pot| {
        let child = spin_sector_to_partition(parent.n() - 1, two_s)?;
        Ok(service.lowest(parent, &child, mass, pot)?.value)
    }
}

fn boson_child(
    service: &EnergyService,
    n: usize,
) -> impl FnMut(f64, &PotentialSpec) -> fewbound_core::Result<f64> + '_ {
    move |mass, pot| {
        let like = SymmetrySector::spinless_bosons(n - 1);
        Ok(service
            .lowest(&like, &like.orbital.clone(), mass, pot)?
            .value)
    }
}

fn ratio(exact: Option<f64>, bound: Option<f64>) -> Option<f64> {
    Some(exact? / bound?)
}

// ---------------------------------------------------------------- table 1

#[derive(Clone, Debug, Serialize)]
pub struct Table1Entry {
    pub potential: String,
    pub g: f64,
    pub column: String,
    pub n: usize,
    pub statistics: Statistics,
    pub two_s: usize,
    /// Coupling strength actually used in the N-body Hamiltonian.
    pub coupling: f64,
    pub exact: Option<Energy>,
    pub bound: Option<BoundReport>,
    /// For bosons, the other of the two bosonic bounds.
    pub alternate: Option<BoundReport>,
    pub ratio: Option<f64>,
    pub paper_ratio: f64,
    pub status: String,
}

pub fn table1_entries(config: &ExperimentConfig) -> Result<Vec<(String, f64, Column, f64)>> {
    let t = &config.table1;
    let mut out = Vec::new();
    for (label, g, paper) in PAPER_TABLE1 {
        if !t.potentials.is_empty() && !t.potentials.iter().any(|p| p == label) {
            continue;
        }
        for (col, &p) in TABLE1_COLUMNS.iter().zip(&paper) {
            if !t.columns.is_empty() && !t.columns.contains(&col.label()) {
                continue;
            }
            out.push((label.to_string(), g, *col, p));
        }
    }
    for c in &t.columns {
        if !TABLE1_COLUMNS.iter().any(|k| &k.label() == c) {
            bail!("unknown Table 1 column `{c}`");
        }
    }
    if out.is_empty() {
        bail!("the Table 1 selection is empty");
    }
    Ok(out)
}

fn table1_entry(
    config: &ExperimentConfig,
    service: &EnergyService,
    label: &str,
    g: f64,
    col: Column,
    paper_ratio: f64,
) -> Result<Table1Entry> {
    let coupling = match (config.table1.coupling_reading, col.n) {
        (CouplingReading::ThreeBody, 4) => 0.75 * g,
        _ => g,
    };
    let pot = table1_potential(label, coupling)?;
    let sector = col.sector()?;
    let mass = 1.0;
    let system = SystemSpec::new(mass, pot.clone(), sector.clone(), AngularChoice::Scan)?;
    let mut status = Vec::new();
    let exact = match solve_or_threshold(service, &system) {
        Ok(e) => {
            if !e.bound {
                status.push("unbound".to_string());
            }
            Some(e)
        }
        Err(e) => {
            status.push(format!("solve failed: {e}"));
            None
        }
    };
    let (bound, alternate) = match col.two_s {
        None => {
            let ti = bound_translation_invariant(col.n, mass, &pot, boson_child(service, col.n));
            let naive = bound_naive(col.n, mass, &pot, boson_child(service, col.n));
            match config.table1.boson_bound {
                BosonBound::TranslationInvariant => (ti, Some(naive)),
                BosonBound::Naive => (naive, Some(ti)),
            }
        }
        Some(two_s) => (
            bound_spin_half(col.n, two_s, mass, &pot, spin_child(service, &sector)),
            None,
        ),
    };
    let bound = bound
        .map_err(|e| status.push(format!("bound failed: {e}")))
        .ok();
    let alternate = alternate.and_then(|r| r.ok());
    let r = ratio(
        exact.as_ref().map(|e| e.value),
        bound.as_ref().map(|b| b.value),
    );
    if status.is_empty() {
        status.push("ok".into());
    }
    Ok(Table1Entry {
        potential: label.to_string(),
        g,
        column: col.label(),
        n: col.n,
        statistics: if col.two_s.is_some() {
            Statistics::Fermion
        } else {
            Statistics::Boson
        },
        two_s: col.two_s.unwrap_or(0),
        coupling,
        exact,
        bound,
        alternate,
        ratio: r,
        paper_ratio,
        status: status.join("; "),
    })
}

pub fn table1_rows(config: &ExperimentConfig, service: &EnergyService) -> Result<Vec<Table1Entry>> {
    table1_entries(config)?
        .par_iter()
        .map(|(label, g, col, paper)| table1_entry(config, service, label, *g, *col, *paper))
        .collect()
}

pub fn run_table1(config: &ExperimentConfig, service: &EnergyService) -> Result<Outcome> {
    let rows = table1_rows(config, service)?;
    let mut table = Table::new(&[
        "potential",
        "g",
        "n",
        "statistics",
        "spin",
        "coupling",
        "exact",
        "sector_found",
        "basis_size",
        "bound",
        "bound_kind",
        "ratio",
        "paper_ratio",
        "deviation",
        "alternate_bound",
        "alternate_kind",
        "alternate_ratio",
        "status",
    ]);
    for e in &rows {
        let exact = e.exact.as_ref().map(|x| x.value);
        let alt = e.alternate.as_ref().map(|b| b.value);
        table.push(vec![
            e.potential.as_str().into(),
            e.g.into(),
            e.n.into(),
            format!("{:?}", e.statistics).to_lowercase().into(),
            spin_text(e.two_s).into(),
            e.coupling.into(),
            exact.into(),
            e.exact
                .as_ref()
                .map_or(Cell::Empty, |x| x.found_in.clone().into()),
            e.exact
                .as_ref()
                .map_or(Cell::Empty, |x| x.basis_size.into()),
            e.bound.as_ref().map(|b| b.value).into(),
            e.bound
                .as_ref()
                .map_or(Cell::Empty, |b| b.kind.to_string().into()),
            e.ratio.into(),
            e.paper_ratio.into(),
            e.ratio.map(|r| r - e.paper_ratio).into(),
            alt.into(),
            e.alternate
                .as_ref()
                .map_or(Cell::Empty, |b| b.kind.to_string().into()),
            ratio(exact, alt).into(),
            e.status.as_str().into(),
        ]);
    }
    Ok(Outcome {
        table,
        report: serde_json::to_value(&rows)?,
        convention: "Y: -g exp(-r)/r, G: -g exp(-r^2), E: -g exp(-r); m = 1".into(),
    })
}

// ---------------------------------------------------------------- figure 1

#[derive(Clone, Debug, Serialize)]
pub struct Fig1Point {
    pub n: usize,
    pub two_s: usize,
    pub q: f64,
    pub exact: Option<Energy>,
    pub ours: Option<BoundReport>,
    pub levy_leblond: Option<BoundReport>,
    /// Basdevant–Martin bounds, already multiplied by `unit`.
    pub bm_lower: Option<f64>,
    pub bm_upper: Option<f64>,
    pub bm_reports: Vec<BoundReport>,
    pub unit: f64,
    pub errors: Vec<String>,
}

fn fig1_point(service: &EnergyService, n: usize, two_s: usize, q: f64) -> Result<Fig1Point> {
    let (mass, g) = (1.0, 1.0);
    let pot = PotentialSpec::single(PotentialTerm::power_law(q, g));
    let sector = SymmetrySector::spin_half_fermions(n, two_s)?;
    let mut errors = Vec::new();
    let system = SystemSpec::new(mass, pot.clone(), sector.clone(), AngularChoice::Scan)?;
    let exact = solve_or_threshold(service, &system)
        .map_err(|e| errors.push(format!("solve: {e}")))
        .ok();
    let ours = bound_spin_half(n, two_s, mass, &pot, spin_child(service, &sector))
        .map_err(|e| errors.push(format!("spin-half bound: {e}")))
        .ok();
    let ll = bound_levy_leblond(&sector, mass, &pot, |m, p, k, om| {
        Ok(cumulated_energy(p, m, k, om)?.value)
    })
    .map_err(|e| errors.push(format!("Levy-Leblond bound: {e}")))
    .ok();
    // reduced problem p² + r^q
    let reduced = PotentialSpec::single(PotentialTerm::power_law(q, 1.0));
    let unit = power_law_energy_unit(q, mass, g);
    let mut bm_reports = Vec::new();
    let bm = (|| -> fewbound_core::Result<()> {
        let f = basdevant_martin_filling(&sector, |k, om| {
            Ok(cumulated_energy(&reduced, 0.5, k, om)?.value)
        })?;
        let e2 = radial_state(&reduced, 0.5, 0, 0)?
            .ok_or_else(|| Error::Numerical("no bound level in the reduced power law".into()))?
            .level
            .energy;
        for side in [Side::Lower, Side::Upper] {
            bm_reports.push(bound_basdevant_martin(n, q, f, e2, side)?);
        }
        Ok(())
    })();
    if let Err(e) = bm {
        errors.push(format!("Basdevant-Martin bound: {e}"));
    }
    let bm_value = |i: usize| bm_reports.get(i).map(|r| r.value * unit);
    Ok(Fig1Point {
        n,
        two_s,
        q,
        exact,
        ours,
        levy_leblond: ll,
        bm_lower: bm_value(0),
        bm_upper: bm_value(1),
        bm_reports: bm_reports.clone(),
        unit,
        errors,
    })
}

pub fn fig1_points(config: &ExperimentConfig, service: &EnergyService) -> Result<Vec<Fig1Point>> {
    let grid = config.fig1.grid();
    if grid.iter().any(|&q| !(q >= 1.0)) {
        bail!("Fig. 1 needs q >= 1");
    }
    let tasks: Vec<(usize, usize, f64)> = config
        .fig1
        .panels
        .iter()
        .flat_map(|&(n, s)| grid.iter().map(move |&q| (n, s, q)))
        .collect();
    tasks
        .par_iter()
        .map(|&(n, s, q)| fig1_point(service, n, s, q))
        .collect()
}

pub fn run_fig1(config: &ExperimentConfig, service: &EnergyService) -> Result<Outcome> {
    let points = fig1_points(config, service)?;
    let mut table = Table::new(&[
        "n",
        "spin",
        "q",
        "exact",
        "our_bound",
        "bm_lower",
        "bm_upper",
        "ll_bound",
        "our_ratio",
        "bm_ratio",
        "ll_ratio",
        "sector_found",
        "basis_size",
        "status",
    ]);
    for p in &points {
        let exact = p.exact.as_ref().map(|e| e.value);
        let ours = p.ours.as_ref().map(|b| b.value);
        let ll = p.levy_leblond.as_ref().map(|b| b.value);
        table.push(vec![
            p.n.into(),
            spin_text(p.two_s).into(),
            p.q.into(),
            exact.into(),
            ours.into(),
            p.bm_lower.into(),
            p.bm_upper.into(),
            ll.into(),
            ratio(exact, ours).into(),
            ratio(exact, p.bm_lower).into(),
            ratio(exact, ll).into(),
            p.exact
                .as_ref()
                .map_or(Cell::Empty, |e| e.found_in.clone().into()),
            p.exact
                .as_ref()
                .map_or(Cell::Empty, |e| e.basis_size.into()),
            if p.errors.is_empty() {
                "ok".to_string()
            } else {
                p.errors.join("; ")
            }
            .into(),
        ]);
    }
    Ok(Outcome {
        table,
        report: serde_json::to_value(&points)?,
        convention: "V = r^q, m = 1, g = 1".into(),
    })
}

// ---------------------------------------------------------------- quantum dots

#[derive(Clone, Debug, Serialize)]
pub struct QdotResult {
    pub spec: QdotSpec,
    pub system: SystemSpec,
    pub cm_energy: f64,
    pub internal: Option<Energy>,
    pub bound: Option<BoundReport>,
    pub note: String,
}

fn qdot_case(service: &EnergyService, spec: &QdotSpec) -> Result<QdotResult> {
    let (system, cm_energy) = reduce_quantum_dot(spec)?;
    let mut notes = Vec::new();
    let internal = solve_or_threshold(service, &system)
        .map_err(|e| notes.push(format!("solve: {e}")))
        .ok();
    let bound = bound_spin_half(
        spec.n,
        spec.two_s,
        spec.mass,
        &system.potential,
        spin_child(service, &system.sector),
    )
    .map_err(|e| notes.push(format!("bound: {e}")))
    .ok();
    notes.push("subsystem energies are the lowest over all angular sectors".into());
    Ok(QdotResult {
        spec: spec.clone(),
        system,
        cm_energy,
        internal,
        bound,
        note: notes.join("; "),
    })
}

pub fn qdot_results(config: &ExperimentConfig, service: &EnergyService) -> Result<Vec<QdotResult>> {
    if config.qdot.cases.is_empty() {
        bail!("no quantum-dot cases configured");
    }
    config
        .qdot
        .cases
        .par_iter()
        .map(|c| qdot_case(service, c))
        .collect()
}

pub fn run_qdot(config: &ExperimentConfig, service: &EnergyService) -> Result<Outcome> {
    let results = qdot_results(config, service)?;
    let mut table = Table::new(&[
        "n",
        "spin",
        "angular",
        "omega",
        "charge",
        "epsilon",
        "bound",
        "ratio",
        "total_energy",
        "sector_found",
        "basis_size",
        "note",
    ]);
    for r in &results {
        let eps = r.internal.as_ref().map(|e| e.value);
        let b = r.bound.as_ref().map(|b| b.value);
        table.push(vec![
            r.spec.n.into(),
            spin_text(r.spec.two_s).into(),
            r.spec.angular.to_string().into(),
            r.spec.omega.into(),
            r.spec.charge.into(),
            eps.into(),
            b.into(),
            ratio(eps, b).into(),
            eps.map(|e| e + r.cm_energy).into(),
            r.internal
                .as_ref()
                .map_or(Cell::Empty, |e| e.found_in.clone().into()),
            r.internal
                .as_ref()
                .map_or(Cell::Empty, |e| e.basis_size.into()),
            r.note.as_str().into(),
        ]);
    }
    Ok(Outcome {
        table,
        report: serde_json::to_value(&results)?,
        convention:
            "m omega^2/2 sum r_i^2 + e^2 sum 1/r_ij; epsilon excludes the 3 omega/2 centre of mass"
                .into(),
    })
}

// ---------------------------------------------------------------- solve / bound

fn configured_system(config: &ExperimentConfig) -> Result<SystemSpec> {
    config
        .system
        .as_ref()
        .context("this experiment needs a [system] section")?
        .system()
}

pub fn run_solve(config: &ExperimentConfig, service: &EnergyService) -> Result<Outcome> {
    let system = configured_system(config)?;
    let result = service.solve(&system).map_err(|e| anyhow!(e))?;
    let mut table = Table::new(&["step", "basis_size", "energy"]);
    for (i, &(k, e)) in result.trace.iter().enumerate() {
        table.push(vec![i.into(), k.into(), e.into()]);
    }
    Ok(Outcome {
        table,
        report: serde_json::json!({ "system": system, "result": &*result }),
        convention: system.potential.identifier(),
    })
}

pub fn run_bound(config: &ExperimentConfig, service: &EnergyService) -> Result<Outcome> {
    let system = configured_system(config)?;
    let (n, mass, pot, sector) = (system.n, system.mass, &system.potential, &system.sector);
    let exact = solve_or_threshold(service, &system)?;
    let mut reports: Vec<BoundReport> = Vec::new();
    let mut notes = Vec::new();
    let mut keep = |r: fewbound_core::Result<BoundReport>, what: &str| match r {
        Ok(r) => reports.push(r),
        Err(e) => notes.push(format!("{what}: {e}")),
    };
    if n >= 3 {
        if sector.statistics == Statistics::Boson && sector.orbital.num_rows() == 1 {
            keep(bound_naive(n, mass, pot, boson_child(service, n)), "naive");
            keep(
                bound_translation_invariant(n, mass, pot, boson_child(service, n)),
                "translation-invariant",
            );
        }
        keep(
            bound_symmetry_resolved(&sector.orbital, mass, pot, |c, m, p| {
                Ok(service.lowest(sector, c, m, p)?.value)
            }),
            "symmetry-resolved",
        );
        if let Some(two_s) = sector.two_s {
            keep(
                bound_spin_half(n, two_s, mass, pot, spin_child(service, sector)),
                "spin-half",
            );
        }
    }
    keep(
        bound_levy_leblond(sector, mass, pot, |m, p, k, om| {
            Ok(cumulated_energy(p, m, k, om)?.value)
        }),
        "Levy-Leblond",
    );
    let mut scaled_bm = Vec::new();
    if let Some((q, g)) = pot.as_power_law().filter(|&(_, g)| g > 0.0) {
        let reduced = PotentialSpec::single(PotentialTerm::power_law(q, 1.0));
        let unit = power_law_energy_unit(q, mass, g);
        let f = basdevant_martin_filling(sector, |k, om| {
            Ok(cumulated_energy(&reduced, 0.5, k, om)?.value)
        })?;
        let e2 = radial_state(&reduced, 0.5, 0, 0)?
            .context("reduced power law has no bound level")?
            .level
            .energy;
        for side in [Side::Lower, Side::Upper] {
            let r = bound_basdevant_martin(n, q, f, e2, side)?;
            scaled_bm.push((r.kind, r.value * unit));
            reports.push(r);
        }
        notes.push(format!(
            "Basdevant-Martin reports are in reduced units; multiply by {unit}"
        ));
    }
    let mut table = Table::new(&["bound", "value", "ratio"]);
    table.push(vec!["exact".into(), exact.value.into(), Cell::Empty]);
    for r in &reports {
        let v = scaled_bm
            .iter()
            .find(|(k, _)| *k == r.kind)
            .map_or(r.value, |&(_, v)| v);
        table.push(vec![
            r.kind.to_string().into(),
            v.into(),
            (exact.value / v).into(),
        ]);
    }
    Ok(Outcome {
        table,
        report: serde_json::json!({ "system": system, "exact": exact, "bounds": reports, "notes": notes }),
        convention: pot.identifier(),
    })
}

// ---------------------------------------------------------------- spectrum

pub fn run_spectrum(config: &ExperimentConfig) -> Result<Outcome> {
    let s = &config.spectrum;
    let pot = PotentialSpec::new(s.potential.clone())?;
    let mut table = Table::new(&["kind", "l", "n", "particles", "energy"]);
    let mut levels = Vec::new();
    for l in 0..=s.max_l {
        for level in radial_spectrum(&pot, s.mass, l, s.levels)? {
            table.push(vec![
                "level".into(),
                l.into(),
                level.n.into(),
                Cell::Empty,
                level.energy.into(),
            ]);
            levels.push(level);
        }
    }
    let mut cumulated = Vec::new();
    for &k in &s.fillings {
        let c = cumulated_energy(&pot, s.mass, k, s.omega)?;
        table.push(vec![
            "cumulated".into(),
            Cell::Empty,
            Cell::Empty,
            k.into(),
            c.value.into(),
        ]);
        cumulated.push(c);
    }
    Ok(Outcome {
        table,
        report: serde_json::json!({ "potential": pot, "mass": s.mass, "levels": levels, "cumulated": cumulated }),
        convention: format!("{}, one particle of mass {}", pot.identifier(), s.mass),
    })
}
