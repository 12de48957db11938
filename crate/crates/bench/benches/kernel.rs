use criterion::{black_box, criterion_group, criterion_main, Criterion};
use fracheat_core::kernel::{kernel_field, kernel_hs_distance, kernel_rate_sweep, sup_over_time, SweepOptions};
use fracheat_core::lab::DEFAULT_SWEEP;
use fracheat_core::{Grid, HsDistance, KernelSpec, QuadratureSpec};

fn hs_distance(c: &mut Criterion) {
    let quad = QuadratureSpec::default();
    c.bench_function("hs_distance_1d", |b| {
        b.iter(|| kernel_hs_distance(black_box(&HsDistance::new(1.9, 0.5, 1.0)), &quad))
    });
    c.bench_function("hs_distance_2d_gradient", |b| {
        let q = HsDistance::new(1.9, 0.5, 1.5).in_dim(2).gradient();
        b.iter(|| kernel_hs_distance(black_box(&q), &quad))
    });
    c.bench_function("sup_over_time", |b| {
        b.iter(|| sup_over_time(black_box(1.9), 1.0, 1.0, &SweepOptions::default()))
    });
}

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("kernel_rate_sweep");
    group.sample_size(10);
    group.bench_function("default", |b| {
        b.iter(|| kernel_rate_sweep(&DEFAULT_SWEEP, 1.0, 1.0, &SweepOptions::default()))
    });
    group.finish();
}

fn physical_kernel(c: &mut Criterion) {
    let grid = Grid::new(1, 4096, 256.0).unwrap();
    let spec = KernelSpec::new(1.5, 1.0).unwrap();
    c.bench_function("kernel_field_4096", |b| {
        b.iter(|| kernel_field(black_box(&spec), &grid))
    });
}

criterion_group!(benches, hs_distance, sweep, physical_kernel);
criterion_main!(benches);
