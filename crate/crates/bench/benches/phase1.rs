use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use robust_summary::{
    centralized_phase1, phase2, streaming_phase1, CentralizedConfig, Recompute, SolverKind, StreamingConfig,
};
use robust_summary_bench::{coverage, cut};

fn centralized(c: &mut Criterion) {
    let mut group = c.benchmark_group("centralized");
    for n in [200, 800] {
        let inst = coverage(n, 10, 1);
        for (name, mode) in [("lazy", Recompute::Lazy), ("literal", Recompute::Literal)] {
            let cfg = CentralizedConfig::new(0.2, 2, 7).monotone(true).recompute(mode);
            group.bench_with_input(BenchmarkId::new(name, n), &inst, |b, inst| {
                b.iter(|| centralized_phase1(black_box(inst), &cfg).unwrap())
            });
        }
    }
    group.finish();
}

fn streaming(c: &mut Criterion) {
    let mut group = c.benchmark_group("streaming");
    for n in [200, 800] {
        let order: Vec<_> = (0..n).collect();
        let monotone = coverage(n, 10, 1);
        let cfg = StreamingConfig::new(0.2, 2, true, 7);
        group.bench_with_input(BenchmarkId::new("coverage", n), &monotone, |b, inst| {
            b.iter(|| streaming_phase1(black_box(inst), &order, &cfg).unwrap())
        });
        let general = cut(n, 10, 1);
        let cfg = StreamingConfig::new(0.2, 2, false, 7);
        group.bench_with_input(BenchmarkId::new("cut", n), &general, |b, inst| {
            b.iter(|| streaming_phase1(black_box(inst), &order, &cfg).unwrap())
        });
    }
    group.finish();
}

fn solve(c: &mut Criterion) {
    let inst = coverage(800, 10, 1);
    let summary = centralized_phase1(&inst, &CentralizedConfig::new(0.2, 2, 7).monotone(true)).unwrap();
    let deleted = summary.solution_ids().into_iter().take(2).collect::<Vec<_>>();
    c.bench_function("phase2/greedy", |b| {
        b.iter(|| phase2(black_box(&summary), &deleted, &inst, SolverKind::Greedy).unwrap())
    });
}

criterion_group!(benches, centralized, streaming, solve);
criterion_main!(benches);
