use crate::error::{Error, Result};
use crate::spectral::Grid;

/// Scheme constant `c` in the existence-time formula, calibrated with
/// [`calibrate_scheme_constant`](super::calibrate_scheme_constant) over the
/// default calibration matrix.
pub const DEFAULT_SCHEME_CONSTANT: f64 = 0.00390625;

/// Full statement of one Cauchy problem
/// `u_t + (-Δ)^{alpha/2} u + eta · grad(u^b) = 0`, `u(0) = u0`, together with
/// the stepping controls.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    pub alpha: f64,
    /// Degree of the nonlinearity, `b >= 2`.
    pub b: u32,
    /// Drift vector, one entry per spatial dimension.
    pub eta: Vec<f64>,
    /// Sobolev index of the `H^s` monitor, `s > n/2`.
    pub s: f64,
    pub horizon: f64,
    pub grid: Grid,
    /// Largest admissible micro-step.
    pub dt: f64,
    pub picard_tol: f64,
    pub picard_max_iter: usize,
    /// Fraction of the Nyquist wavenumber kept after forming `u^b` (b = 2).
    pub dealias_fraction: f64,
    /// Number of uniformly spaced snapshots, endpoints included.
    pub snapshots: usize,
    pub scheme_constant: f64,
}

impl SolveConfig {
    /// Defaults: `b = 2`, `eta = (1, .., 1)`, `s = n/2 + 1/2`, `T = 1`,
    /// `dt = 1/512`, 65 snapshots.
    pub fn new(alpha: f64, grid: &Grid) -> SolveConfig {
        SolveConfig {
            alpha,
            b: 2,
            eta: vec![1.0; grid.dim()],
            s: grid.dim() as f64 / 2.0 + 0.5,
            horizon: 1.0,
            grid: grid.clone(),
            dt: 1.0 / 512.0,
            picard_tol: 1e-10,
            picard_max_iter: 50,
            dealias_fraction: 2.0 / 3.0,
            snapshots: 65,
            scheme_constant: DEFAULT_SCHEME_CONSTANT,
        }
    }

    pub fn with_alpha(&self, alpha: f64) -> SolveConfig {
        SolveConfig { alpha, ..self.clone() }
    }

    pub fn eta_abs(&self) -> f64 {
        self.eta.iter().map(|e| e * e).sum::<f64>().sqrt()
    }

    /// Retained fraction of the Nyquist wavenumber for `u^b`: the configured
    /// fraction for `b = 2`, tightened to `2/(b+1)` for higher degrees so the
    /// aliased part of a degree-`b` product stays outside the kept band.
    pub fn effective_dealias_fraction(&self) -> f64 {
        self.dealias_fraction.min(2.0 / (self.b as f64 + 1.0))
    }

    /// Uniform micro-step count: the smallest multiple of the snapshot
    /// interval count with `horizon / steps <= dt`.
    pub fn micro_steps(&self) -> usize {
        let intervals = self.snapshots - 1;
        let per = (self.horizon / (self.dt * intervals as f64) * (1.0 - 1e-12))
            .ceil()
            .max(1.0) as usize;
        per * intervals
    }

    pub fn validate(&self) -> Result<()> {
        crate::kernel::semigroup::check_alpha(self.alpha)?;
        let n = self.grid.dim();
        if self.b < 2 {
            return Err(Error::invalid("b", format!("must be an integer >= 2, got {}", self.b)));
        }
        if self.eta.len() != n {
            return Err(Error::invalid(
                "eta",
                format!("needs {n} components, got {}", self.eta.len()),
            ));
        }
        if self.eta.iter().any(|e| !e.is_finite()) {
            return Err(Error::invalid("eta", "components must be finite"));
        }
        if !(self.s > n as f64 / 2.0) {
            return Err(Error::invalid(
                "s",
                format!("need s > n/2 = {}, got {}", n as f64 / 2.0, self.s),
            ));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::invalid(
                "horizon",
                format!("must be positive, got {}", self.horizon),
            ));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::invalid("dt", format!("must be positive, got {}", self.dt)));
        }
        if !(self.picard_tol > 0.0) {
            return Err(Error::invalid("picard_tol", "must be positive"));
        }
        if self.picard_max_iter == 0 {
            return Err(Error::invalid("picard_max_iter", "must be at least 1"));
        }
        if !(self.dealias_fraction > 0.0 && self.dealias_fraction <= 1.0) {
            return Err(Error::invalid(
                "dealias_fraction",
                format!("must lie in (0, 1], got {}", self.dealias_fraction),
            ));
        }
        if self.snapshots < 2 {
            return Err(Error::invalid("snapshots", "need at least the two endpoints"));
        }
        if !(self.scheme_constant > 0.0) {
            return Err(Error::invalid("scheme_constant", "must be positive"));
        }
        Ok(())
    }
}
