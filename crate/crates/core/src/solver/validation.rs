//! Measurements behind the solver's invariants. Each returns the measured
//! defect; tolerances are the caller's business.

use serde::{Deserialize, Serialize};

use super::config::SolveConfig;
use super::solve::{solve, Trajectory};
use crate::error::{Error, Result};
use crate::kernel::{apply_semigroup, KernelSpec};
use crate::spectral::{lp_norm, Field};

fn sup_gap(a: &Field, b: &Field) -> Result<f64> {
    lp_norm(&a.sub(b)?, f64::INFINITY)
}

/// Largest snapshot sup-distance between two trajectories on one schedule.
pub fn trajectory_gap(a: &Trajectory, b: &Trajectory) -> Result<f64> {
    if !a.same_schedule(b) {
        return Err(Error::ScheduleMismatch);
    }
    a.states
        .iter()
        .zip(&b.states)
        .try_fold(0.0, |acc: f64, (x, y)| Ok(acc.max(sup_gap(x, y)?)))
}

/// `max_t ||solve(u0)(t) - p_alpha(t) * u0||_inf` with the drift switched off.
pub fn linear_exactness_defect(u0: &Field, cfg: &SolveConfig) -> Result<f64> {
    let cfg = SolveConfig {
        eta: vec![0.0; cfg.grid.dim()],
        ..cfg.clone()
    };
    let traj = solve(u0, &cfg)?;
    let mut worst: f64 = 0.0;
    for (u, &t) in traj.states.iter().zip(&traj.times).skip(1) {
        let exact = apply_semigroup(u0, &KernelSpec::new(cfg.alpha, t)?).to_physical();
        worst = worst.max(sup_gap(u, &exact)?);
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelfConvergence {
    pub dt: f64,
    /// Final-time sup error at `dt` against the `dt / 8` reference.
    pub error_coarse: f64,
    /// The same at `dt / 2`.
    pub error_fine: f64,
    pub ratio: f64,
    /// `log2(ratio)`
    pub order: f64,
}

/// Richardson self-convergence at the final time. `cfg.horizon` should be a
/// multiple of `8 cfg.dt` so that every run steps exactly.
pub fn self_convergence(u0: &Field, cfg: &SolveConfig) -> Result<SelfConvergence> {
    let at = |dt: f64| -> Result<Field> {
        // only the final state is compared, so one interval keeps h = dt
        let c = SolveConfig {
            dt,
            snapshots: 2,
            ..cfg.clone()
        };
        Ok(solve(u0, &c)?.final_state().clone())
    };
    let coarse = at(cfg.dt)?;
    let fine = at(cfg.dt / 2.0)?;
    let reference = at(cfg.dt / 8.0)?;
    let error_coarse = sup_gap(&coarse, &reference)?;
    let error_fine = sup_gap(&fine, &reference)?;
    let ratio = error_coarse / error_fine;
    Ok(SelfConvergence {
        dt: cfg.dt,
        error_coarse,
        error_fine,
        ratio,
        order: ratio.log2(),
    })
}

fn mean(u: &Field) -> f64 {
    let v = u.real_values();
    v.iter().sum::<f64>() / v.len() as f64
}

/// Largest deviation of the spatial mean from its initial value.
pub fn mean_drift(traj: &Trajectory) -> f64 {
    let m0 = mean(&traj.states[0]);
    traj.states.iter().map(|u| (mean(u) - m0).abs()).fold(0.0, f64::max)
}

/// `max_t ||u(t)||_1 / ||u0||_1 - 1`, negative when the norm only shrinks.
pub fn l1_excess(traj: &Trajectory) -> f64 {
    let l0 = traj.diagnostics[0].l1;
    if l0 == 0.0 {
        return 0.0;
    }
    traj.diagnostics
        .iter()
        .skip(1)
        .map(|d| d.l1 / l0 - 1.0)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Bitwise comparison of every snapshot value, time and diagnostic.
pub fn bit_identical(a: &Trajectory, b: &Trajectory) -> bool {
    let bits = |t: &Trajectory| -> Vec<u64> {
        let mut out: Vec<u64> = t.times.iter().map(|v| v.to_bits()).collect();
        for u in &t.states {
            out.extend(u.values().iter().flat_map(|c| [c.re.to_bits(), c.im.to_bits()]));
        }
        for d in &t.diagnostics {
            out.extend([d.l1, d.l2, d.linf, d.hs].iter().map(|v| v.to_bits()));
        }
        out
    };
    bits(a) == bits(b)
}
