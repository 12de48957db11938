use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::errors::{mixed_norm_error, sup_error};
use super::family::{make_data_family, DataFamilySpec};
use super::fit::{fit_rate, RateFit};
use crate::error::{Error, Result};
use crate::solver::{solve, SolveConfig, Trajectory};

/// `alpha` values approaching 2 geometrically: `2 - alpha` halves every
/// other entry.
pub const DEFAULT_SWEEP: [f64; 7] = [1.80, 1.875, 1.90, 1.9375, 1.95, 1.96875, 1.975];

/// Segment count above which a member is flagged as close to the edge of the
/// small-data regime.
pub const SEGMENT_WARNING: usize = 20;

/// Error functional measured between `u_alpha` and `u_2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NormSpec {
    /// `sup_t ||.||_inf`
    Sup,
    /// `||.||_{L^p_t L^q_x}`
    Mixed { p: f64, q: f64 },
}

impl NormSpec {
    pub fn id(&self) -> String {
        match self {
            NormSpec::Sup => "sup".to_string(),
            NormSpec::Mixed { p, q } => format!("L{}_L{}", fmt_exp(*p), fmt_exp(*q)),
        }
    }

    /// `min(gamma, 1)` for the sup norm, `min(gamma, 1)(1 - 1/q)` otherwise.
    pub fn predicted_rate(&self, gamma: f64) -> f64 {
        match self {
            NormSpec::Sup => gamma.min(1.0),
            NormSpec::Mixed { q, .. } => gamma.min(1.0) * (1.0 - 1.0 / q),
        }
    }

    fn measure(&self, a: &Trajectory, b: &Trajectory) -> Result<f64> {
        match *self {
            NormSpec::Sup => sup_error(a, b),
            NormSpec::Mixed { p, q } => Ok(mixed_norm_error(a, b, p, q)?.value),
        }
    }
}

fn fmt_exp(v: f64) -> String {
    if v.is_infinite() {
        "inf".into()
    } else {
        format!("{v}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateStudySpec {
    pub family: DataFamilySpec,
    pub alphas: Vec<f64>,
    pub norms: Vec<NormSpec>,
    /// Members must satisfy `1 + eps < alpha < 2`.
    pub eps: f64,
    /// Times `dt` may be halved by the discretization-floor check.
    pub max_refinements: usize,
}

impl Default for RateStudySpec {
    fn default() -> Self {
        RateStudySpec {
            family: DataFamilySpec::default(),
            alphas: DEFAULT_SWEEP.to_vec(),
            norms: vec![NormSpec::Sup],
            eps: 0.2,
            max_refinements: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedRate {
    pub norm: NormSpec,
    pub predicted: f64,
    pub fit: RateFit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FloorCheck {
    pub dt: f64,
    /// `sup_t ||u_2^{dt} - u_2^{dt/4}||_inf`
    pub floor: f64,
    /// Smallest sup-norm `alpha` error of the sweep.
    pub smallest_error: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateStudy {
    /// Sorted decreasingly toward 2.
    pub alphas: Vec<f64>,
    /// `errors[i][k]`: norm `i`, member `k`.
    pub errors: Vec<Vec<f64>>,
    pub segments: Vec<usize>,
    pub fits: Vec<FittedRate>,
    pub floor_checks: Vec<FloorCheck>,
    pub dt: f64,
    pub warnings: Vec<String>,
}

fn validate_sweep(alphas: &[f64], eps: f64) -> Result<Vec<f64>> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid("eps", format!("must lie in (0, 1), got {eps}")));
    }
    let mut sorted: Vec<f64> = alphas.iter().copied().filter(|&a| a != 2.0).collect();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    if let Some(a) = sorted.iter().find(|&&a| !(a > 1.0 + eps && a < 2.0)) {
        return Err(Error::DegenerateSweep(format!(
            "alpha = {a} outside (1 + eps, 2) with eps = {eps}"
        )));
    }
    if sorted.len() < 4 {
        return Err(Error::DegenerateSweep(format!(
            "{} distinct alpha values below 2, need at least 4",
            sorted.len()
        )));
    }
    Ok(sorted)
}

/// Solves the family at every sweep value and at `alpha = 2` with a common
/// grid, step and snapshot schedule, measures each requested norm of
/// `u_alpha - u_2` and fits its rate in `2 - alpha`.
///
/// Before fitting, the `alpha = 2` solve is repeated at `dt / 4`; if the
/// discrepancy is not 10x below the smallest sup-norm error, `dt` is halved
/// and the whole sweep repeated (at most `max_refinements` times).
pub fn run_rate_study(spec: &RateStudySpec, template: &SolveConfig) -> Result<RateStudy> {
    let alphas = validate_sweep(&spec.alphas, spec.eps)?;
    if spec.norms.is_empty() {
        return Err(Error::invalid("norms", "no error functional requested"));
    }
    let mut all = alphas.clone();
    all.push(2.0);
    let family = make_data_family(&spec.family, &all, &template.grid)?;

    let mut cfg = template.clone();
    let mut floor_checks = Vec::new();
    let mut warnings = Vec::new();
    loop {
        let trajs = all
            .par_iter()
            .zip(&family.members)
            .map(|(&alpha, (_, u0))| {
                solve(u0, &cfg.with_alpha(alpha)).map_err(|e| Error::MemberFailed {
                    alpha,
                    source: Box::new(e),
                })
            })
            .collect::<Result<Vec<Trajectory>>>()?;
        let (members, reference) = trajs.split_at(alphas.len());
        let reference = &reference[0];

        let errors = spec
            .norms
            .iter()
            .map(|n| {
                members
                    .iter()
                    .map(|m| n.measure(m, reference))
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let sups = members
            .iter()
            .map(|m| sup_error(m, reference))
            .collect::<Result<Vec<f64>>>()?;
        let smallest_error = sups.iter().cloned().fold(f64::INFINITY, f64::min);

        let fine_cfg = SolveConfig {
            dt: cfg.dt / 4.0,
            ..cfg.with_alpha(2.0)
        };
        let fine =
            solve(family.member(2.0).expect("reference member"), &fine_cfg).map_err(|e| Error::MemberFailed {
                alpha: 2.0,
                source: Box::new(e),
            })?;
        let floor = sup_error(reference, &fine)?;
        let passed = 10.0 * floor <= smallest_error;
        floor_checks.push(FloorCheck {
            dt: cfg.dt,
            floor,
            smallest_error,
            passed,
        });
        if !passed && floor_checks.len() <= spec.max_refinements {
            cfg.dt /= 2.0;
            continue;
        }
        if !passed {
            warnings.push(format!(
                "time-discretization floor {floor:.3e} is not 10x below the smallest error {smallest_error:.3e}"
            ));
        }

        let segments: Vec<usize> = members.iter().map(|m| m.segments.len()).collect();
        for (a, s) in alphas.iter().zip(&segments) {
            if *s > SEGMENT_WARNING {
                warnings.push(format!(
                    "alpha = {a}: {s} existence-time segments, close to the small-data limit"
                ));
            }
        }
        for n in &spec.norms {
            if let NormSpec::Mixed { q, .. } = n {
                if *q == 1.0 || q.is_infinite() {
                    warnings.push(format!("{}: no rate is claimed for q = {}", n.id(), fmt_exp(*q)));
                }
            }
        }

        let gaps: Vec<f64> = alphas.iter().map(|a| 2.0 - a).collect();
        let fits = spec
            .norms
            .iter()
            .zip(&errors)
            .map(|(n, e)| {
                Ok(FittedRate {
                    norm: *n,
                    predicted: n.predicted_rate(spec.family.gamma),
                    fit: fit_rate(&n.id(), &gaps, e)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        return Ok(RateStudy {
            alphas,
            errors,
            segments,
            fits,
            floor_checks,
            dt: cfg.dt,
            warnings,
        });
    }
}
