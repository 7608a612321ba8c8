use std::hint::black_box;

use cohconf::constructions::petersen;
use cohconf::inequalities::ExpansionChecker;
use cohconf::metrics;
use cohconf::scheme::{cyclic_generators, pair_orbit_scheme, verify_scheme, wl_closure};
use cohconf::{PointSet, Relation};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_relation(n: usize, density: f64, seed: u64) -> Relation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Relation::from_fn(PointSet::new(n).unwrap(), |_, _| rng.gen_bool(density))
}

fn product(c: &mut Criterion) {
    let mut group = c.benchmark_group("product");
    for n in [64, 256, 1024] {
        let a = random_relation(n, 0.05, 1);
        let b = random_relation(n, 0.05, 2);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |bench, _| {
            bench.iter(|| black_box(&a).product(black_box(&b)).unwrap())
        });
    }
    group.finish();
}

fn diameter(c: &mut Criterion) {
    let mut group = c.benchmark_group("directed_diameter");
    for n in [64, 512] {
        let a = Relation::directed_cycle(PointSet::new(n).unwrap())
            .union(&random_relation(n, 2.0 / n as f64, 3))
            .unwrap();
        group.bench_with_input(BenchmarkId::new("bfs", n), &n, |bench, _| {
            bench.iter(|| metrics::directed_diameter(black_box(&a)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("powers", n), &n, |bench, _| {
            bench.iter(|| metrics::diameter_by_powers(black_box(&a)).unwrap())
        });
    }
    group.finish();
}

fn wl(c: &mut Criterion) {
    let mut group = c.benchmark_group("wl_closure");
    let p = petersen();
    group.bench_function("petersen", |bench| {
        bench.iter(|| wl_closure(std::slice::from_ref(black_box(&p))).unwrap())
    });
    let cycle = Relation::directed_cycle(PointSet::new(48).unwrap());
    group.bench_function("cycle48", |bench| {
        bench.iter(|| wl_closure(std::slice::from_ref(black_box(&cycle))).unwrap())
    });
    group.finish();
}

fn verify(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_scheme");
    for q in [32, 128] {
        let s = pair_orbit_scheme(PointSet::new(q).unwrap(), &cyclic_generators(q)).unwrap();
        let basis = s.basis().to_vec();
        group.bench_with_input(BenchmarkId::from_parameter(q), &q, |bench, _| {
            bench.iter(|| verify_scheme(black_box(basis.clone())).unwrap())
        });
    }
    group.finish();
}

fn expansion_sweep(c: &mut Criterion) {
    let s = pair_orbit_scheme(PointSet::new(40).unwrap(), &cyclic_generators(40)).unwrap();
    let b = s.union_of(&[s.color(0, 1), s.color(0, 39), s.color(0, 7), s.color(0, 33)]);
    let checker = ExpansionChecker::new(&s, &b).unwrap();
    c.bench_function("expansion_sweep/z40_size6", |bench| {
        bench.iter(|| checker.sweep(black_box(6), None).unwrap())
    });
}

criterion_group!(benches, product, diameter, wl, verify, expansion_sweep);
criterion_main!(benches);
