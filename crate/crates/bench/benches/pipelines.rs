use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use ecp_bench::run_at_peak;
use ecp_core::analysis::{papd_integral, papd_sweep, t_p_grid};
use ecp_core::protocol::{generate_remote_bell, monte_carlo, Detector, NoiseModel, Pipeline};
use ecp_core::SystemParams;

fn pipelines(c: &mut Criterion) {
    let bell = run_at_peak(Pipeline::Bell);
    let ghz = run_at_peak(Pipeline::Ghz);
    c.bench_function("bell exhaustive", |b| b.iter(|| black_box(&bell).exhaustive().unwrap()));
    c.bench_function("ghz exhaustive", |b| b.iter(|| black_box(&ghz).exhaustive().unwrap()));
    let prepared = ghz.prepare().unwrap();
    c.bench_function("ghz herald", |b| b.iter(|| ghz.herald(black_box(&prepared)).unwrap()));
}

fn statistics(c: &mut Criterion) {
    let p = SystemParams::default();
    let t = std::f64::consts::PI / p.g;
    let mut group = c.benchmark_group("monte carlo");
    group.sample_size(10);
    group.bench_function("bell 1e5 trials", |b| {
        b.iter(|| monte_carlo(Pipeline::Bell, &p, t, 100_000, 1, NoiseModel::off()).unwrap())
    });
    group.finish();
}

fn analysis(c: &mut Criterion) {
    let p = SystemParams::default();
    let grid = t_p_grid(5.0, 1e-3).unwrap();
    c.bench_function("papd sweep 3 x 5001", |b| {
        b.iter(|| papd_sweep(black_box(&[30.0, 90.0, 150.0]), &grid, &p).unwrap())
    });
    c.bench_function("papd integral", |b| b.iter(|| papd_integral(black_box(&p)).unwrap()));
    c.bench_function("remote pair second order", |b| {
        b.iter(|| generate_remote_bell(black_box(&p), Detector::D6, true).unwrap())
    });
}

criterion_group!(benches, pipelines, statistics, analysis);
criterion_main!(benches);
