//! Shared fixtures for the benchmarks.

use fracheat_core::{Field, Grid};

pub fn gaussian(grid: &Grid, amplitude: f64) -> Field {
    Field::from_fn(grid, |x| amplitude * (-(x[0] * x[0] + x[1] * x[1])).exp())
}
