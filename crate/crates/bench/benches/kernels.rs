use criterion::{criterion_group, criterion_main, Criterion};
use fewbound_core::fewbody::{antisymmetrized_matrix_elements, solve};
use fewbound_core::onebody::{cumulated_energy, radial_state};
use fewbound_core::symrep::{branching, dimension};
use fewbound_core::{
    AngularChoice, AngularSector, GaussianBasisElement, Partition, PotentialSpec, PotentialTerm,
    SolverConfig, SymmetrySector, SystemSpec,
};
use std::hint::black_box;

fn element(n: usize, vectors: usize, shift: f64) -> GaussianBasisElement {
    let pairs = n * (n - 1) / 2;
    GaussianBasisElement {
        pair_widths: (0..pairs).map(|i| 0.3 + shift + 0.17 * i as f64).collect(),
        vectors: (0..vectors)
            .map(|v| {
                (0..n - 1)
                    .map(|k| 1.0 - 0.4 * (v + k) as f64 + shift)
                    .collect()
            })
            .collect(),
    }
}

fn matrix_elements(c: &mut Criterion) {
    let pot = PotentialSpec::single(PotentialTerm::gaussian(-10.0));
    for (n, two_s, angular, vectors) in [(3, 1, "1-", 1), (4, 0, "0+", 0), (4, 4, "0-", 3)] {
        let sector = SymmetrySector::spin_half_fermions(n, two_s).unwrap();
        let angular: AngularSector = angular.parse().unwrap();
        let system =
            SystemSpec::new(1.0, pot.clone(), sector, AngularChoice::Fixed(angular)).unwrap();
        let (bra, ket) = (element(n, vectors, 0.0), element(n, vectors, 0.21));
        c.bench_function(&format!("matrix elements N={n} {angular}"), |b| {
            b.iter(|| {
                antisymmetrized_matrix_elements(black_box(&bra), black_box(&ket), &system, angular)
                    .unwrap()
            })
        });
    }
}

fn one_body(c: &mut Criterion) {
    let yukawa = PotentialSpec::single(PotentialTerm::yukawa(-8.0));
    c.bench_function("radial ground state, Yukawa", |b| {
        b.iter(|| radial_state(black_box(&yukawa), 0.5, 0, 0).unwrap())
    });
    let power = PotentialSpec::single(PotentialTerm::power_law(1.5, 1.0));
    c.bench_function("cumulated energy, 4 particles in r^1.5", |b| {
        b.iter(|| cumulated_energy(black_box(&power), 0.5, 4, 2).unwrap())
    });
}

fn combinatorics(c: &mut Criterion) {
    let p = Partition::new(vec![5, 3, 2, 1]).unwrap();
    c.bench_function("dimension [5,3,2,1]", |b| {
        b.iter(|| dimension(black_box(&p)).unwrap())
    });
    c.bench_function("branching [5,3,2,1]", |b| {
        b.iter(|| branching(black_box(&p)).unwrap())
    });
}

fn small_solve(c: &mut Criterion) {
    let sector = SymmetrySector::spin_half_fermions(3, 1).unwrap();
    let pot = PotentialSpec::single(PotentialTerm::harmonic(1.0));
    let system = SystemSpec::new(
        1.0,
        pot,
        sector,
        AngularChoice::Fixed(AngularSector::new(1, -1)),
    )
    .unwrap();
    let config = SolverConfig {
        max_basis: 20,
        refinements: 0,
        ..Default::default()
    };
    let mut group = c.benchmark_group("solver");
    group.sample_size(10);
    group.bench_function("N=3 oscillator, 20 elements", |b| {
        b.iter(|| solve(black_box(&system), &config).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    matrix_elements,
    one_body,
    combinatorics,
    small_solve
);
criterion_main!(benches);
