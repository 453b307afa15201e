use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use flatlands_core::catalog::{find_forbidden, line_profile_forbidden};
use flatlands_core::coloring::random_sequence;
use flatlands_core::harness::{sample_coloring, verify_theorem};
use flatlands_core::{Coloring, Geometry};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn geometries() -> Vec<Arc<Geometry>> {
    [
        Geometry::projective(3, 2),
        Geometry::projective(4, 3),
        Geometry::affine(4, 3),
        Geometry::affine(3, 5),
        Geometry::projective(3, 7),
    ]
    .into_iter()
    .map(|g| Arc::new(g.unwrap()))
    .collect()
}

/// A target and a random coloring of `g`.
fn inputs(g: &Arc<Geometry>) -> [Coloring; 2] {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let target = Coloring::from_sequence(g.clone(), &random_sequence(g.as_ref(), &mut rng)).unwrap();
    let random = Coloring::new(g.clone(), sample_coloring(g, 1, 0)).unwrap();
    [target, random]
}

fn recognize(c: &mut Criterion) {
    let mut group = c.benchmark_group("recognize");
    for g in geometries() {
        let [target, random] = inputs(&g);
        group.bench_with_input(BenchmarkId::new("target", g.id()), &target, |b, c| b.iter(|| black_box(c.recognize())));
        group.bench_with_input(BenchmarkId::new("random", g.id()), &random, |b, c| b.iter(|| black_box(c.recognize())));
    }
    group.finish();
}

fn forbidden(c: &mut Criterion) {
    let mut group = c.benchmark_group("find_forbidden");
    for g in geometries() {
        let [target, random] = inputs(&g);
        group.bench_with_input(BenchmarkId::new("target", g.id()), &target, |b, c| {
            b.iter(|| black_box(find_forbidden(c).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("random", g.id()), &random, |b, c| {
            b.iter(|| black_box(find_forbidden(c).unwrap()))
        });
        if line_profile_forbidden(&target).is_ok() {
            group.bench_with_input(BenchmarkId::new("line_profile", g.id()), &target, |b, c| {
                b.iter(|| black_box(line_profile_forbidden(c).unwrap()))
            });
        }
    }
    group.finish();
}

fn sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("exhaustive");
    group.sample_size(10);
    for g in [Geometry::projective(4, 2).unwrap(), Geometry::affine(5, 2).unwrap(), Geometry::affine(3, 4).unwrap()] {
        group.bench_function(BenchmarkId::from_parameter(g.id()), |b| b.iter(|| black_box(verify_theorem(&g).unwrap())));
    }
    group.finish();
}

criterion_group!(benches, recognize, forbidden, sweeps);
criterion_main!(benches);
