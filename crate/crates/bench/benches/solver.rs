use criterion::{black_box, criterion_group, criterion_main, Criterion};
use fracheat_bench::gaussian;
use fracheat_core::solver::{duhamel_step, march, nonlinear_term, solve};
use fracheat_core::{Grid, SolveConfig};

fn step(c: &mut Criterion) {
    let grid = Grid::new(1, 1024, 32.0).unwrap();
    let cfg = SolveConfig::new(1.9, &grid);
    let u = gaussian(&grid, 1.0);
    c.bench_function("nonlinear_term_1024", |b| {
        b.iter(|| nonlinear_term(black_box(&u), 2, &cfg.eta, cfg.dealias_fraction))
    });
    c.bench_function("duhamel_step_1024", |b| {
        b.iter(|| duhamel_step(black_box(&u), &cfg, cfg.dt))
    });
}

fn trajectories(c: &mut Criterion) {
    let mut group = c.benchmark_group("trajectory");
    group.sample_size(10);
    let grid = Grid::new(1, 1024, 32.0).unwrap();
    let cfg = SolveConfig::new(1.9, &grid);
    let u = gaussian(&grid, 1.0);
    group.bench_function("picard_solve_T1", |b| b.iter(|| solve(black_box(&u), &cfg)));
    group.bench_function("march_T1", |b| b.iter(|| march(black_box(&u), &cfg)));
    let grid2 = Grid::new(2, 64, 8.0).unwrap();
    let mut cfg2 = SolveConfig::new(1.8, &grid2);
    cfg2.horizon = 0.25;
    cfg2.snapshots = 5;
    let u2 = gaussian(&grid2, 1.0);
    group.bench_function("picard_solve_2d", |b| b.iter(|| solve(black_box(&u2), &cfg2)));
    group.finish();
}

criterion_group!(benches, step, trajectories);
criterion_main!(benches);
