use num_complex::Complex64;
use rayon::prelude::*;

use super::config::SolveConfig;
use super::nonlinear::Propagator;
use crate::error::{Error, Result};
use crate::spectral::Field;

fn check_dt(cfg: &SolveConfig, dt: f64) -> Result<()> {
    if !(dt > 0.0 && dt <= cfg.dt * (1.0 + 1e-12)) {
        return Err(Error::invalid("dt", format!("must lie in (0, {}], got {dt}", cfg.dt)));
    }
    Ok(())
}

fn physical_input(u: &Field, cfg: &SolveConfig) -> Result<Vec<f64>> {
    if u.grid() != &cfg.grid {
        return Err(Error::GridMismatch);
    }
    Ok(u.to_physical().real_values())
}

/// One step of the two-stage exponential integrator.
///
/// With `E = exp(-dt |xi|^alpha)` and `F(u) = -eta . grad(u^b)`:
/// predictor `u* = E (u + dt F(u))`, corrector
/// `u(dt) = E u + dt/2 (E F(u) + F(u*))`. For `eta = 0` this is exactly the
/// semigroup.
pub fn duhamel_step(u: &Field, cfg: &SolveConfig, dt: f64) -> Result<Field> {
    cfg.validate()?;
    check_dt(cfg, dt)?;
    let phys = physical_input(u, cfg)?;
    let prop = Propagator::new(cfg, dt)?;
    let hat = prop.to_spectral(&phys);
    let (_, next) = prop.heun_step(&hat, &phys);
    if next.iter().any(|v| !v.is_finite()) {
        return Err(Error::BlowUp { time: dt });
    }
    Field::from_real(&cfg.grid, &next)
}

/// Result of a Picard solve over one segment, sampled at every micro-step.
#[derive(Debug, Clone)]
pub struct SegmentSolution {
    /// Absolute times, `start + m h`.
    pub times: Vec<f64>,
    /// Physical states at `times`; the first is the segment datum.
    pub states: Vec<Field>,
    pub iterations: usize,
    /// `E_T` residual of each iteration.
    pub residuals: Vec<f64>,
}

pub(crate) struct RawSegment {
    pub phys: Vec<Vec<f64>>,
    pub iterations: usize,
    pub residuals: Vec<f64>,
}

fn e_norm_gap(prop: &Propagator, a_hat: &[Complex64], b_hat: &[Complex64], a: &[f64], b: &[f64]) -> f64 {
    let dh: Vec<Complex64> = a_hat.iter().zip(b_hat).map(|(x, y)| x - y).collect();
    let dp: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    prop.l1_norm(&dp) + prop.hs_norm(&dh)
}

/// Picard iteration of the discretized Duhamel map over `steps` micro-steps.
///
/// Iterate `k` holds the whole trajectory `u_m`, `m = 0..=steps`. The
/// Duhamel integral is accumulated with the interaction-picture trapezoid
/// rule, `D_{m+1} = E D_m + h/2 (E F(u_m) + F(u_{m+1}))`, and the next iterate
/// is `E^m u_0 + D_m`. The fixed point is the implicit exponential trapezoid
/// scheme.
pub(crate) fn picard_core(
    prop: &Propagator,
    u0_phys: &[f64],
    steps: usize,
    tol: f64,
    max_iter: usize,
    start: f64,
) -> Result<RawSegment> {
    let h = prop.step;
    let len = u0_phys.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut linear = Vec::with_capacity(steps + 1);
    linear.push(prop.to_spectral(u0_phys));
    for m in 0..steps {
        let next: Vec<Complex64> = linear[m].iter().zip(&prop.decay).map(|(v, e)| v * e).collect();
        linear.push(next);
    }
    let mut hats = linear.clone();
    let mut phys: Vec<Vec<f64>> = hats.par_iter().map(|v| prop.to_physical(v)).collect();
    phys[0] = u0_phys.to_vec();

    let mut residuals = Vec::new();
    for k in 1..=max_iter {
        let forcing: Vec<Vec<Complex64>> = phys
            .par_iter()
            .map(|p| {
                let mut f = vec![zero; len];
                prop.forcing(p, &mut f);
                f
            })
            .collect();
        let mut next_hats = Vec::with_capacity(steps + 1);
        next_hats.push(linear[0].clone());
        let mut acc = vec![zero; len];
        for m in 0..steps {
            for i in 0..len {
                let e = prop.decay[i];
                acc[i] = e * acc[i] + 0.5 * h * (e * forcing[m][i] + forcing[m + 1][i]);
            }
            next_hats.push(linear[m + 1].iter().zip(&acc).map(|(l, d)| l + d).collect());
        }
        let mut next_phys: Vec<Vec<f64>> = next_hats.par_iter().map(|v| prop.to_physical(v)).collect();
        next_phys[0] = u0_phys.to_vec();

        if let Some(m) = next_phys.iter().position(|p| p.iter().any(|v| !v.is_finite())) {
            return Err(Error::BlowUp {
                time: start + m as f64 * h,
            });
        }
        let residual = (0..=steps)
            .into_par_iter()
            .map(|m| e_norm_gap(prop, &next_hats[m], &hats[m], &next_phys[m], &phys[m]))
            .reduce(|| 0.0, f64::max);
        hats = next_hats;
        phys = next_phys;
        let ratio = residuals.last().map_or(0.0, |&prev: &f64| residual / prev);
        residuals.push(residual);
        if !residual.is_finite() {
            return Err(Error::BlowUp { time: start });
        }
        if residual < tol {
            return Ok(RawSegment {
                phys,
                iterations: k,
                residuals,
            });
        }
        if k > 2 && ratio >= 1.0 {
            return Err(Error::NonContraction {
                start,
                length: steps as f64 * h,
                iterations: k,
                residual,
                ratio,
            });
        }
    }
    let n = residuals.len();
    Err(Error::NonContraction {
        start,
        length: steps as f64 * h,
        iterations: n,
        residual: residuals[n - 1],
        ratio: if n > 1 {
            residuals[n - 1] / residuals[n - 2]
        } else {
            f64::NAN
        },
    })
}

/// Solves the mild formulation on `[0, segment_t]` by Picard iteration, with
/// the micro-step `segment_t / ceil(segment_t / cfg.dt)`.
pub fn picard_solve_segment(u0: &Field, cfg: &SolveConfig, segment_t: f64) -> Result<SegmentSolution> {
    cfg.validate()?;
    if !(segment_t > 0.0 && segment_t.is_finite()) {
        return Err(Error::invalid(
            "segment_t",
            format!("must be positive, got {segment_t}"),
        ));
    }
    let phys = physical_input(u0, cfg)?;
    let steps = ((segment_t / cfg.dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    let h = segment_t / steps as f64;
    let prop = Propagator::new(cfg, h)?;
    let raw = picard_core(&prop, &phys, steps, cfg.picard_tol, cfg.picard_max_iter, 0.0)?;
    let states = raw
        .phys
        .iter()
        .map(|p| Field::from_real(&cfg.grid, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(SegmentSolution {
        times: (0..=steps).map(|m| m as f64 * h).collect(),
        states,
        iterations: raw.iterations,
        residuals: raw.residuals,
    })
}
