use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dwork::counting::{self, DworkInstance};
use dwork::group::{GroupElement, Perm};
use dwork::Parallelism;

const MODES: [(&str, Parallelism); 2] = [
    ("sequential", Parallelism::Sequential),
    ("parallel", Parallelism::Parallel),
];

fn point_counts(c: &mut Criterion) {
    let inst = DworkInstance::new(4, 13, 2).unwrap();
    // Warm the field and root-table caches outside the timed loop.
    counting::count_points(&inst, 2, Parallelism::Sequential).unwrap();
    let mut group = c.benchmark_group("count_points n=4 q=13 r=2");
    group.sample_size(20);
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| counting::count_points(black_box(&inst), 2, mode).unwrap())
        });
    }
    group.finish();
}

fn twisted_counts(c: &mut Criterion) {
    let inst = DworkInstance::new(5, 11, 2).unwrap();
    let g = GroupElement::new(5, &[0, 0, 0, 1, 4], Perm::from_cycles(5, "1 2").unwrap()).unwrap();
    counting::fixed_count_general(&inst, &g, 2, Parallelism::Sequential).unwrap();
    let mut group = c.benchmark_group("fixed_count_general n=5 q=11 r=2");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| counting::fixed_count_general(black_box(&inst), &g, 2, mode).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, point_counts, twisted_counts);
criterion_main!(benches);
