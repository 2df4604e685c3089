use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use cliffmech_bench::workload;
use cliffmech_core::{integrate, symplecticity_residual, GradientMode, IntegratorConfig, Method};

fn integrators(c: &mut Criterion) {
    let mut group = c.benchmark_group("integrate_1000_steps");
    for n in [1, 4] {
        let w = workload(4, n, GradientMode::Symbolic);
        for method in [Method::Rk4, Method::ImplicitMidpoint] {
            let cfg = IntegratorConfig::new(method, 1e-3, 1000);
            group.bench_with_input(BenchmarkId::new(method.name(), n), &cfg, |b, cfg| {
                b.iter(|| integrate(&w.system, &w.omega, black_box(&w.start), cfg).unwrap())
            });
        }
    }
    group.finish();
}

fn gradients(c: &mut Criterion) {
    let mut group = c.benchmark_group("gradient");
    for mode in [GradientMode::Symbolic, GradientMode::FiniteDifference] {
        let w = workload(1, 2, mode);
        group
            .bench_function(format!("{mode:?}"), |b| b.iter(|| w.system.gradient(black_box(&w.start.coords)).unwrap()));
    }
    group.finish();
}

fn residual(c: &mut Criterion) {
    let w = workload(2, 1, GradientMode::Symbolic);
    let cfg = IntegratorConfig::new(Method::ImplicitMidpoint, 1e-2, 10);
    c.bench_function("symplecticity_residual_10_steps", |b| {
        b.iter(|| symplecticity_residual(&w.system, &w.omega, black_box(&w.start.coords), &cfg).unwrap())
    });
}

criterion_group!(benches, integrators, gradients, residual);
criterion_main!(benches);
