use num_complex::Complex64;

use super::config::SolveConfig;
use crate::error::{Error, Result};
use crate::kernel::{symbol, KernelSpec};
use crate::spectral::{Field, Grid, Representation};

/// Spectral factor `i (eta . xi)` restricted to the dealiasing band, with
/// the unpaired Nyquist modes removed.
fn drift_factor(grid: &Grid, eta: &[f64], fraction: f64) -> Vec<Complex64> {
    let n = grid.points_per_axis();
    let cutoff = fraction * (n / 2) as f64;
    let nyquist = -((n / 2) as i64);
    (0..grid.len())
        .map(|k| {
            let idx = grid.axis_indices(k);
            let keep = (0..grid.dim()).all(|a| {
                let j = grid.mode(idx[a]);
                j != nyquist && (j.unsigned_abs() as f64) <= cutoff
            });
            if !keep {
                return Complex64::new(0.0, 0.0);
            }
            let xi = grid.wavevector(k);
            let dot: f64 = eta.iter().zip(xi).map(|(e, x)| e * x).sum();
            Complex64::new(0.0, dot)
        })
        .collect()
}

/// Spectral coefficients of `eta . grad(u^b)` for a physical field `u`.
///
/// `u^b` is formed pointwise, transformed, and every coefficient whose
/// wavenumber exceeds `dealias_fraction` of the Nyquist wavenumber along any
/// axis is zeroed before the derivative is applied.
pub fn nonlinear_term(u: &Field, b: u32, eta: &[f64], dealias_fraction: f64) -> Result<Field> {
    u.expect(Representation::Physical)?;
    let grid = u.grid();
    if eta.len() != grid.dim() {
        return Err(Error::invalid("eta", format!("needs {} components", grid.dim())));
    }
    let factor = drift_factor(grid, eta, dealias_fraction);
    let mut buf: Vec<Complex64> = u
        .values()
        .iter()
        .map(|v| Complex64::new(v.re.powi(b as i32), 0.0))
        .collect();
    grid.forward_in_place(&mut buf);
    for (v, f) in buf.iter_mut().zip(&factor) {
        *v *= f;
    }
    Field::new(grid, buf, Representation::Spectral)
}

/// Precomputed tables for marching one configuration with a fixed micro-step.
#[derive(Debug, Clone)]
pub(crate) struct Propagator {
    pub grid: Grid,
    pub b: u32,
    pub step: f64,
    /// `exp(-step |xi|^alpha)`
    pub decay: Vec<f64>,
    /// `-i (eta . xi)` on the dealiased band, so that `F(u) = flux * FFT(u^b)`
    /// is the right-hand side of `u_t = -(-Δ)^{alpha/2} u + F(u)`.
    pub flux: Vec<Complex64>,
    /// `(1 + |xi|^2)^s`
    pub hs_weight: Vec<f64>,
    pub linear: bool,
}

impl Propagator {
    pub fn new(cfg: &SolveConfig, step: f64) -> Result<Propagator> {
        let grid = cfg.grid.clone();
        let spec = KernelSpec::new(cfg.alpha, step)?;
        let decay = (0..grid.len()).map(|k| symbol(&spec, grid.xi_abs(k))).collect();
        let flux = drift_factor(&grid, &cfg.eta, cfg.effective_dealias_fraction())
            .into_iter()
            .map(|f| -f)
            .collect();
        let hs_weight = (0..grid.len())
            .map(|k| {
                let [a, b] = grid.wavevector(k);
                (1.0 + a * a + b * b).powf(cfg.s)
            })
            .collect();
        Ok(Propagator {
            grid,
            b: cfg.b,
            step,
            decay,
            flux,
            hs_weight,
            linear: cfg.eta.iter().all(|&e| e == 0.0),
        })
    }

    /// Right-hand side `F(u) = -eta . grad(u^b)` in spectral form.
    pub fn forcing(&self, physical: &[f64], out: &mut [Complex64]) {
        if self.linear {
            out.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
            return;
        }
        let b = self.b as i32;
        for (o, &u) in out.iter_mut().zip(physical) {
            *o = Complex64::new(u.powi(b), 0.0);
        }
        self.grid.forward_in_place(out);
        for (o, f) in out.iter_mut().zip(&self.flux) {
            *o *= f;
        }
    }

    pub fn to_physical(&self, spectral: &[Complex64]) -> Vec<f64> {
        let mut buf = spectral.to_vec();
        self.grid.inverse_in_place(&mut buf);
        buf.into_iter().map(|v| v.re).collect()
    }

    pub fn to_spectral(&self, physical: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = physical.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.grid.forward_in_place(&mut buf);
        buf
    }

    pub fn hs_norm(&self, spectral: &[Complex64]) -> f64 {
        let sum: f64 = spectral
            .iter()
            .zip(&self.hs_weight)
            .map(|(v, w)| w * v.norm_sqr())
            .sum();
        (sum * self.grid.xi_cell_volume()).sqrt()
    }

    pub fn l1_norm(&self, physical: &[f64]) -> f64 {
        physical.iter().map(|v| v.abs()).sum::<f64>() * self.grid.cell_volume()
    }

    /// One explicit interaction-picture step of length `self.step`:
    /// predictor `E (u + h F(u))`, corrector `E u + h/2 (E F(u) + F(u*))`.
    pub fn heun_step(&self, spectral: &[Complex64], physical: &[f64]) -> (Vec<Complex64>, Vec<f64>) {
        let h = self.step;
        let len = spectral.len();
        let mut f0 = vec![Complex64::new(0.0, 0.0); len];
        self.forcing(physical, &mut f0);
        let predictor: Vec<Complex64> = (0..len).map(|k| self.decay[k] * (spectral[k] + h * f0[k])).collect();
        let predictor_phys = self.to_physical(&predictor);
        let mut f1 = vec![Complex64::new(0.0, 0.0); len];
        self.forcing(&predictor_phys, &mut f1);
        let next: Vec<Complex64> = (0..len)
            .map(|k| self.decay[k] * spectral[k] + 0.5 * h * (self.decay[k] * f0[k] + f1[k]))
            .collect();
        let next_phys = self.to_physical(&next);
        (next, next_phys)
    }
}
