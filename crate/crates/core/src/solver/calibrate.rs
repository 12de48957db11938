use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::SolveConfig;
use super::existence::existence_time;
use super::nonlinear::Propagator;
use super::stepper::picard_core;
use crate::error::{Error, Result};
use crate::spectral::{Field, Grid};

/// Cases over which the scheme constant must make Picard contract.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationMatrix {
    pub alphas: Vec<f64>,
    pub degrees: Vec<u32>,
    /// Amplitudes of the Gaussian datum `A exp(-|x|^2)`.
    pub amplitudes: Vec<f64>,
    pub points_per_axis: usize,
    pub half_length: f64,
    pub dt: f64,
    /// Scan starts at `2^min_exponent`.
    pub min_exponent: i32,
    pub max_exponent: i32,
}

impl Default for CalibrationMatrix {
    fn default() -> Self {
        CalibrationMatrix {
            alphas: vec![1.5, 1.9, 2.0],
            degrees: vec![2, 3],
            amplitudes: vec![0.5, 1.0, 2.0],
            points_per_axis: 512,
            half_length: 32.0,
            dt: 1.0 / 512.0,
            min_exponent: -10,
            max_exponent: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub constant: f64,
    /// Every constant tried, with whether all cases contracted.
    pub scanned: Vec<(f64, bool)>,
}

fn case_contracts(grid: &Grid, alpha: f64, b: u32, amp: f64, c: f64, dt: f64) -> Result<bool> {
    let mut cfg = SolveConfig::new(alpha, grid);
    cfg.b = b;
    cfg.dt = dt;
    cfg.scheme_constant = c;
    let u0 = Field::from_fn(grid, |x| amp * (-(x[0] * x[0] + x[1] * x[1])).exp());
    let prop = Propagator::new(&cfg, dt)?;
    let phys = u0.real_values();
    let hat = prop.to_spectral(&phys);
    let t = existence_time(prop.l1_norm(&phys), prop.hs_norm(&hat), alpha, b, cfg.eta_abs(), c)?;
    let steps = ((t.min(1.0) / dt).floor() as usize).max(1);
    match picard_core(&prop, &phys, steps, cfg.picard_tol, cfg.picard_max_iter, 0.0) {
        Ok(_) => Ok(true),
        Err(Error::NonContraction { .. }) | Err(Error::BlowUp { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Smallest power of two `c` for which Picard iteration contracts on a
/// segment of length `min(existence_time, 1)` for every case of `matrix`.
pub fn calibrate_scheme_constant(matrix: &CalibrationMatrix) -> Result<Calibration> {
    let grid = Grid::new(1, matrix.points_per_axis, matrix.half_length)?;
    let cases: Vec<(f64, u32, f64)> = matrix
        .alphas
        .iter()
        .flat_map(|&a| {
            matrix
                .degrees
                .iter()
                .flat_map(move |&b| matrix.amplitudes.iter().map(move |&amp| (a, b, amp)))
        })
        .collect();
    if cases.is_empty() {
        return Err(Error::invalid("matrix", "no calibration cases"));
    }
    let mut scanned = Vec::new();
    for k in matrix.min_exponent..=matrix.max_exponent {
        let c = 2f64.powi(k);
        let ok = cases
            .par_iter()
            .map(|&(a, b, amp)| case_contracts(&grid, a, b, amp, c, matrix.dt))
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .all(|v| v);
        scanned.push((c, ok));
        if ok {
            return Ok(Calibration { constant: c, scanned });
        }
    }
    Err(Error::invalid(
        "matrix",
        format!("no constant up to 2^{} makes every case contract", matrix.max_exponent),
    ))
}
