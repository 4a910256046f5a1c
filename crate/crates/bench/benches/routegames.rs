use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use routegames::dynamics::{random_start, routing_vector, run_dynamics};
use routegames::equilibria::{analyze, DEFAULT_ENUMERATE_CAP};
use routegames::{CostModel, MovePolicy};
use routegames_bench::{bucket_tight, grid, ring};
use std::hint::black_box;

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("analyze");
    let ring8 = ring(8);
    g.bench_function("ring8_max", |b| {
        b.iter(|| analyze(CostModel::Max, black_box(&ring8), DEFAULT_ENUMERATE_CAP, 1).unwrap())
    });
    let bt = bucket_tight(4);
    for jobs in [1, 4] {
        g.bench_with_input(BenchmarkId::new("bucket_tight4_sum_bucket", jobs), &jobs, |b, &jobs| {
            b.iter(|| analyze(CostModel::SumBucket, black_box(&bt), DEFAULT_ENUMERATE_CAP, jobs).unwrap())
        });
    }
    g.finish();
}

fn dynamics(c: &mut Criterion) {
    let inst = grid(11);
    let start = random_start(&inst, 5);
    let policy = MovePolicy::default();
    for model in [CostModel::Max, CostModel::SumBucket] {
        c.bench_function(&format!("dynamics_grid_{model}"), |b| {
            b.iter(|| run_dynamics(model, black_box(&inst), &start, &policy, 0, 10_000).unwrap())
        });
        c.bench_function(&format!("routing_vector_grid_{model}"), |b| {
            b.iter(|| routing_vector(model, black_box(&inst), &start).unwrap())
        });
    }
}

criterion_group!(benches, enumeration, dynamics);
criterion_main!(benches);
