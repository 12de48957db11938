use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Plain-data description of a grid, used for configuration and reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub dim: usize,
    pub points_per_axis: usize,
    pub half_length: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            dim: 1,
            points_per_axis: 1024,
            half_length: 32.0,
        }
    }
}

impl GridSpec {
    pub fn build(&self) -> Result<Grid> {
        Grid::new(self.dim, self.points_per_axis, self.half_length)
    }
}

/// Periodic box `[-L, L)^n` sampled with `N` points per axis.
///
/// Values are stored row-major (last axis fastest). Spectral coefficients use
/// the usual FFT ordering along each axis: index `i` carries the integer
/// wavenumber `j = i` for `i < N/2` and `j = i - N` otherwise, so the single
/// Nyquist index `N/2` maps to `j = -N/2`. The physical wavenumber is
/// `xi = (pi / L) * j`.
#[derive(Clone)]
pub struct Grid {
    dim: usize,
    n: usize,
    half_length: f64,
    dx: f64,
    // integer wavenumber per axis index
    modes: Arc<[i64]>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("dim", &self.dim)
            .field("points_per_axis", &self.n)
            .field("half_length", &self.half_length)
            .field("dx", &self.dx)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.n == other.n && self.half_length == other.half_length
    }
}

impl Grid {
    pub fn new(dim: usize, points_per_axis: usize, half_length: f64) -> Result<Grid> {
        if !(1..=2).contains(&dim) {
            return Err(Error::InvalidGrid(format!(
                "dimension {dim} unsupported (only 1 and 2)"
            )));
        }
        if points_per_axis < 8 || !points_per_axis.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be even and >= 8, got {points_per_axis}"
            )));
        }
        if !(half_length.is_finite() && half_length > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "half length must be positive, got {half_length}"
            )));
        }
        let n = points_per_axis;
        let half = (n / 2) as i64;
        let modes: Arc<[i64]> = (0..n as i64).map(|i| if i < half { i } else { i - n as i64 }).collect();
        let mut planner = FftPlanner::new();
        Ok(Grid {
            dim,
            n,
            half_length,
            dx: 2.0 * half_length / n as f64,
            modes,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        })
    }

    pub fn spec(&self) -> GridSpec {
        GridSpec {
            dim: self.dim,
            points_per_axis: self.n,
            half_length: self.half_length,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.n
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn spacing(&self) -> f64 {
        self.dx
    }

    /// Total number of samples, `N^n`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Quadrature weight of one physical cell, `dx^n`.
    pub fn cell_volume(&self) -> f64 {
        self.dx.powi(self.dim as i32)
    }

    /// Lattice spacing in frequency, `pi / L`.
    pub fn xi_spacing(&self) -> f64 {
        PI / self.half_length
    }

    /// Quadrature weight of one lattice cell in frequency, `(pi/L)^n`.
    pub fn xi_cell_volume(&self) -> f64 {
        self.xi_spacing().powi(self.dim as i32)
    }

    /// Largest wavenumber magnitude along one axis, `(pi/L) N/2`.
    pub fn xi_nyquist(&self) -> f64 {
        self.xi_spacing() * (self.n / 2) as f64
    }

    /// Largest `|xi|` on the lattice (the corner of the box in 2D).
    pub fn xi_max(&self) -> f64 {
        let axis = self.xi_spacing() * (self.n / 2) as f64;
        axis * (self.dim as f64).sqrt()
    }

    /// Integer wavenumber for an axis index.
    pub fn mode(&self, axis_index: usize) -> i64 {
        self.modes[axis_index]
    }

    /// Physical wavenumber for an axis index.
    pub fn wavenumber(&self, axis_index: usize) -> f64 {
        self.xi_spacing() * self.modes[axis_index] as f64
    }

    /// The sorted lattice `{(pi/L) j : -N/2 <= j < N/2}` of one axis.
    pub fn axis_wavenumbers(&self) -> Vec<f64> {
        let half = (self.n / 2) as i64;
        (-half..half).map(|j| self.xi_spacing() * j as f64).collect()
    }

    pub fn axis_coordinate(&self, axis_index: usize) -> f64 {
        -self.half_length + self.dx * axis_index as f64
    }

    /// Splits a flat index into per-axis indices (1D: `[i, 0]`).
    pub fn axis_indices(&self, flat: usize) -> [usize; 2] {
        match self.dim {
            1 => [flat, 0],
            _ => [flat / self.n, flat % self.n],
        }
    }

    /// Physical coordinates of a flat index (unused axes are zero).
    pub fn coordinates(&self, flat: usize) -> [f64; 2] {
        let [i, j] = self.axis_indices(flat);
        match self.dim {
            1 => [self.axis_coordinate(i), 0.0],
            _ => [self.axis_coordinate(i), self.axis_coordinate(j)],
        }
    }

    /// Wavenumber vector of a flat spectral index (unused axes are zero).
    pub fn wavevector(&self, flat: usize) -> [f64; 2] {
        let [i, j] = self.axis_indices(flat);
        match self.dim {
            1 => [self.wavenumber(i), 0.0],
            _ => [self.wavenumber(i), self.wavenumber(j)],
        }
    }

    pub fn xi_abs(&self, flat: usize) -> f64 {
        let [a, b] = self.wavevector(flat);
        a.hypot(b)
    }

    /// `|xi|` for every spectral index, in storage order.
    pub fn xi_abs_table(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.xi_abs(k)).collect()
    }

    /// Forward transform in place, normalized as
    /// `u_hat(xi_j) = dx^n (2 pi)^{-n/2} sum_k u(x_k) exp(-i xi_j . x_k)`,
    /// the Riemann sum of the unitary continuous Fourier transform.
    pub fn forward_in_place(&self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len(), self.len());
        self.along_axes(buf, true);
        let scale = (self.dx / (2.0 * PI).sqrt()).powi(self.dim as i32);
        self.apply_phase(buf, scale);
    }

    /// Exact inverse of [`Grid::forward_in_place`].
    pub fn inverse_in_place(&self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len(), self.len());
        let scale = ((2.0 * PI).sqrt() / (self.dx * self.n as f64)).powi(self.dim as i32);
        self.apply_phase(buf, scale);
        self.along_axes(buf, false);
    }

    // x_k = -L + k dx gives exp(-i xi_j x_k) = (-1)^j exp(-2 pi i j k / N), and
    // (-1)^j is its own inverse, so both directions share the same phase.
    fn apply_phase(&self, buf: &mut [Complex64], scale: f64) {
        for (k, v) in buf.iter_mut().enumerate() {
            let [i, j] = self.axis_indices(k);
            let parity = match self.dim {
                1 => self.modes[i],
                _ => self.modes[i] + self.modes[j],
            };
            let sign = if parity.rem_euclid(2) == 0 { scale } else { -scale };
            *v *= sign;
        }
    }

    fn along_axes(&self, buf: &mut [Complex64], forward: bool) {
        let plan = if forward { &self.forward } else { &self.inverse };
        let n = self.n;
        match self.dim {
            1 => plan.process(buf),
            _ => {
                // rows are contiguous
                plan.process(buf);
                let mut column = vec![Complex64::new(0.0, 0.0); n];
                for c in 0..n {
                    for r in 0..n {
                        column[r] = buf[r * n + c];
                    }
                    plan.process(&mut column);
                    for r in 0..n {
                        buf[r * n + c] = column[r];
                    }
                }
            }
        }
    }
}
