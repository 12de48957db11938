use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::SolveConfig;
use super::existence::existence_time;
use super::nonlinear::Propagator;
use super::stepper::picard_core;
use crate::error::{Error, Result};
use crate::spectral::{lp_norm, sobolev_norm, Field, Grid, SobolevFlavor};

/// Norms of one snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
    pub hs: f64,
}

/// One Picard segment of a chained solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentRecord {
    pub start: f64,
    /// Existence time of the segment datum (`inf` for the linear problem).
    pub existence_time: f64,
    /// Length actually used, a whole number of micro-steps.
    pub length: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub grid: Grid,
    pub times: Vec<f64>,
    /// Physical snapshots at `times`.
    pub states: Vec<Field>,
    pub diagnostics: Vec<Diagnostics>,
    pub segments: Vec<SegmentRecord>,
    /// Micro-step used throughout.
    pub step: f64,
    /// Largest relative increase of the `L^1` norm between consecutive
    /// snapshots (0 when it never increases).
    pub l1_max_growth: f64,
}

impl Trajectory {
    pub fn same_schedule(&self, other: &Trajectory) -> bool {
        self.grid == other.grid && self.times == other.times
    }

    pub fn final_state(&self) -> &Field {
        self.states.last().expect("trajectory has at least one snapshot")
    }

    fn build(grid: &Grid, times: Vec<f64>, states: Vec<Field>, s: f64, step: f64) -> Result<Trajectory> {
        let diagnostics = states
            .par_iter()
            .map(|u| {
                Ok(Diagnostics {
                    l1: lp_norm(u, 1.0)?,
                    l2: lp_norm(u, 2.0)?,
                    linf: lp_norm(u, f64::INFINITY)?,
                    hs: sobolev_norm(u, s, SobolevFlavor::Inhomogeneous)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        for (d, &t) in diagnostics.iter().zip(&times) {
            if ![d.l1, d.l2, d.linf, d.hs].iter().all(|v| v.is_finite()) {
                return Err(Error::BlowUp { time: t });
            }
        }
        let l1_max_growth = diagnostics
            .windows(2)
            .map(|w| {
                if w[0].l1 > 0.0 {
                    (w[1].l1 - w[0].l1) / w[0].l1
                } else {
                    0.0
                }
            })
            .fold(0.0, f64::max);
        Ok(Trajectory {
            grid: grid.clone(),
            times,
            states,
            diagnostics,
            segments: Vec::new(),
            step,
            l1_max_growth,
        })
    }
}

struct Schedule {
    steps: usize,
    stride: usize,
    step: f64,
}

fn prepare(u0: &Field, cfg: &SolveConfig) -> Result<(Schedule, Vec<f64>)> {
    cfg.validate()?;
    if u0.grid() != &cfg.grid {
        return Err(Error::GridMismatch);
    }
    let phys = u0.to_physical().real_values();
    if phys.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("u0", "datum has non-finite values"));
    }
    let steps = cfg.micro_steps();
    Ok((
        Schedule {
            steps,
            stride: steps / (cfg.snapshots - 1),
            step: cfg.horizon / steps as f64,
        },
        phys,
    ))
}

fn snapshot_times(cfg: &SolveConfig) -> Vec<f64> {
    let intervals = cfg.snapshots - 1;
    (0..=intervals)
        .map(|k| k as f64 * cfg.horizon / intervals as f64)
        .collect()
}

/// Solves `u_t + (-Δ)^{alpha/2} u + eta . grad(u^b) = 0` on `[0, horizon]`.
///
/// The horizon is covered by consecutive Picard segments; each segment is
/// as long as the existence time of its own datum allows (at least one
/// micro-step, at most the remaining horizon).
pub fn solve(u0: &Field, cfg: &SolveConfig) -> Result<Trajectory> {
    let (sched, phys0) = prepare(u0, cfg)?;
    let times = snapshot_times(cfg);
    if phys0.iter().all(|&v| v == 0.0) {
        let zero = Field::from_real(&cfg.grid, &phys0)?;
        let states = vec![zero; times.len()];
        return Trajectory::build(&cfg.grid, times, states, cfg.s, sched.step);
    }
    let prop = Propagator::new(cfg, sched.step)?;
    let mut states = vec![Field::from_real(&cfg.grid, &phys0)?];
    let mut segments = Vec::new();
    let mut current = phys0;
    let mut done = 0;
    while done < sched.steps {
        let start = done as f64 * sched.step;
        let t_exist = if prop.linear {
            f64::INFINITY
        } else {
            let hat = prop.to_spectral(&current);
            existence_time(
                prop.l1_norm(&current),
                prop.hs_norm(&hat),
                cfg.alpha,
                cfg.b,
                cfg.eta_abs(),
                cfg.scheme_constant,
            )?
        };
        let remaining = sched.steps - done;
        let take = if t_exist.is_finite() {
            ((t_exist / sched.step).floor() as usize).clamp(1, remaining)
        } else {
            remaining
        };
        let raw = picard_core(&prop, &current, take, cfg.picard_tol, cfg.picard_max_iter, start)?;
        segments.push(SegmentRecord {
            start,
            existence_time: t_exist,
            length: take as f64 * sched.step,
            iterations: raw.iterations,
        });
        for m in 1..=take {
            if (done + m) % sched.stride == 0 {
                states.push(Field::from_real(&cfg.grid, &raw.phys[m])?);
            }
        }
        current = raw.phys.into_iter().nth(take).expect("segment has take + 1 states");
        done += take;
    }
    let mut traj = Trajectory::build(&cfg.grid, times, states, cfg.s, sched.step)?;
    traj.segments = segments;
    Ok(traj)
}

/// Marches the explicit two-stage integrator with the same micro-step and
/// snapshot schedule as [`solve`]; no segmentation.
pub fn march(u0: &Field, cfg: &SolveConfig) -> Result<Trajectory> {
    let (sched, phys0) = prepare(u0, cfg)?;
    let prop = Propagator::new(cfg, sched.step)?;
    let mut states = vec![Field::from_real(&cfg.grid, &phys0)?];
    let mut hat = prop.to_spectral(&phys0);
    let mut phys = phys0;
    for k in 1..=sched.steps {
        let (h, p) = prop.heun_step(&hat, &phys);
        if p.iter().any(|v| !v.is_finite()) {
            return Err(Error::BlowUp {
                time: k as f64 * sched.step,
            });
        }
        hat = h;
        phys = p;
        if k % sched.stride == 0 {
            states.push(Field::from_real(&cfg.grid, &phys)?);
        }
    }
    Trajectory::build(&cfg.grid, snapshot_times(cfg), states, cfg.s, sched.step)
}

/// Per-`alpha` supremum over snapshots of `||u_alpha^b||_{H^s}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HsBoundProbe {
    pub alphas: Vec<f64>,
    pub sups: Vec<f64>,
    /// `max / min` of `sups`.
    pub spread: f64,
}

/// Solves every member of `family` on `[0, horizon]` and records
/// `sup_t ||u_alpha(t)^b||_{H^s}`.
pub fn uniform_hs_bound_probe(
    cfg: &SolveConfig,
    alphas: &[f64],
    family: impl Fn(f64) -> Field + Sync,
    horizon: f64,
) -> Result<HsBoundProbe> {
    if alphas.is_empty() {
        return Err(Error::DegenerateSweep("empty alpha list".into()));
    }
    let sups = alphas
        .par_iter()
        .map(|&alpha| {
            let member = SolveConfig {
                alpha,
                horizon,
                ..cfg.clone()
            };
            let wrap = |e| Error::MemberFailed {
                alpha,
                source: Box::new(e),
            };
            let traj = solve(&family(alpha), &member).map_err(wrap)?;
            let b = cfg.b as i32;
            traj.states
                .iter()
                .map(|u| {
                    let pow =
                        Field::from_real(u.grid(), &u.real_values().iter().map(|v| v.powi(b)).collect::<Vec<_>>())?;
                    sobolev_norm(&pow, cfg.s, SobolevFlavor::Inhomogeneous)
                })
                .try_fold(0.0, |acc: f64, v| v.map(|v| acc.max(v)))
                .map_err(wrap)
        })
        .collect::<Result<Vec<f64>>>()?;
    let max = sups.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = sups.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(HsBoundProbe {
        alphas: alphas.to_vec(),
        sups,
        spread: max / min,
    })
}
