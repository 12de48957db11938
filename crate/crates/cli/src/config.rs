//! Run configuration: a TOML document with flat sections.
//!
//! ```toml
//! study = "solution-rate"        # kernel-rate | solution-rate | kernel-properties | solver-validate
//! output_dir = "out"             # optional, `--out` wins
//!
//! [grid]        # dim, points_per_axis, half_length
//! [solver]      # alpha, b, eta, s, horizon, dt, picard_tol, picard_max_iter,
//!               # dealias_fraction, snapshots, scheme_constant
//! [family]      # gamma, c_pert, base = { kind = "gaussian", ... }, perturbation = { ... }
//! [sweep]       # alphas, norms, eps, max_refinements, slope_tolerance
//! [kernel]      # variants, s, horizon, time_samples, dim, slope_tolerance, [kernel.quadrature]
//! [properties]  # alphas, times, points_per_axis, half_length, holder_pairs, tolerances
//! [validation]  # convergence_dt, tolerances
//! ```
//!
//! Every key is optional; unknown keys are rejected.

use std::path::PathBuf;

use fracheat_core::kernel::KernelVariant;
use fracheat_core::lab::DEFAULT_SWEEP;
use fracheat_core::solver::DEFAULT_SCHEME_CONSTANT;
use fracheat_core::{DataFamilySpec, Error as CoreError, GridSpec, NormSpec, QuadratureSpec, SolveConfig};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StudyKind {
    KernelRate,
    SolutionRate,
    #[serde(alias = "kernel-props")]
    KernelProperties,
    SolverValidate,
}

impl StudyKind {
    pub fn id(&self) -> &'static str {
        match self {
            StudyKind::KernelRate => "kernel-rate",
            StudyKind::SolutionRate => "solution-rate",
            StudyKind::KernelProperties => "kernel-properties",
            StudyKind::SolverValidate => "solver-validate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSection {
    /// Only used by `solver-validate`; rate studies sweep `alpha`.
    pub alpha: f64,
    pub b: u32,
    /// Empty means `(1, .., 1)`.
    pub eta: Vec<f64>,
    /// Defaults to `n/2 + 1/2`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    pub horizon: f64,
    pub dt: f64,
    pub picard_tol: f64,
    pub picard_max_iter: usize,
    pub dealias_fraction: f64,
    pub snapshots: usize,
    pub scheme_constant: f64,
}

impl Default for SolverSection {
    fn default() -> Self {
        SolverSection {
            alpha: 1.7,
            b: 2,
            eta: Vec::new(),
            s: None,
            horizon: 1.0,
            dt: 1.0 / 512.0,
            picard_tol: 1e-10,
            picard_max_iter: 50,
            dealias_fraction: 2.0 / 3.0,
            snapshots: 65,
            scheme_constant: DEFAULT_SCHEME_CONSTANT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub alphas: Vec<f64>,
    /// `"sup"` or `"L<p>_L<q>"`, with `inf` for infinity.
    pub norms: Vec<String>,
    pub eps: f64,
    pub max_refinements: usize,
    pub slope_tolerance: f64,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection {
            alphas: DEFAULT_SWEEP.to_vec(),
            norms: vec!["sup".into()],
            eps: 0.2,
            max_refinements: 2,
            slope_tolerance: 0.15,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelSection {
    pub variants: Vec<KernelVariant>,
    pub s: f64,
    pub horizon: f64,
    pub time_samples: usize,
    pub dim: usize,
    pub slope_tolerance: f64,
    pub quadrature: QuadratureSpec,
}

impl Default for KernelSection {
    fn default() -> Self {
        KernelSection {
            variants: vec![KernelVariant::Value],
            s: 1.0,
            horizon: 1.0,
            time_samples: 64,
            dim: 1,
            slope_tolerance: 0.1,
            quadrature: QuadratureSpec::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PropertiesSection {
    pub alphas: Vec<f64>,
    pub times: Vec<f64>,
    /// The property grid is one-dimensional and wide, so the algebraic tail is
    /// visible before periodization sets in.
    pub points_per_axis: usize,
    pub half_length: f64,
    pub holder_pairs: Vec<[f64; 2]>,
    pub mass_tolerance: f64,
    pub exponent_tolerance: f64,
    pub semigroup_tolerance: f64,
    /// Relative tolerance between the far-field scaled kernel and `c_alpha`.
    pub tail_tolerance: f64,
}

impl Default for PropertiesSection {
    fn default() -> Self {
        PropertiesSection {
            alphas: vec![1.5, 1.9],
            times: vec![0.5, 1.0, 2.0, 4.0, 8.0],
            points_per_axis: 4096,
            half_length: 256.0,
            holder_pairs: vec![
                [0.1, 0.2],
                [0.1, 0.1001],
                [0.5, 0.75],
                [1.0, 3.0],
                [0.2, 0.21],
                [2.0, 2.5],
            ],
            mass_tolerance: 1e-8,
            exponent_tolerance: 0.05,
            semigroup_tolerance: 1e-12,
            tail_tolerance: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ValidationSection {
    /// Coarsest step of the `dt, dt/2` vs `dt/8` self-convergence test.
    pub convergence_dt: f64,
    pub min_order: f64,
    pub linear_tolerance: f64,
    pub mean_tolerance: f64,
    pub l1_tolerance: f64,
}

impl Default for ValidationSection {
    fn default() -> Self {
        ValidationSection {
            convergence_dt: 1.0 / 32.0,
            min_order: 1.9,
            linear_tolerance: 1e-10,
            mean_tolerance: 1e-10,
            l1_tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub study: Option<StudyKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    pub grid: GridSpec,
    pub solver: SolverSection,
    pub family: DataFamilySpec,
    pub sweep: SweepSection,
    pub kernel: KernelSection,
    pub properties: PropertiesSection,
    pub validation: ValidationSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        let mut cfg = RunConfig {
            study: None,
            output_dir: None,
            grid: GridSpec::default(),
            solver: SolverSection::default(),
            family: DataFamilySpec::default(),
            sweep: SweepSection::default(),
            kernel: KernelSection::default(),
            properties: PropertiesSection::default(),
            validation: ValidationSection::default(),
        };
        cfg.apply_defaults();
        cfg
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, col)
}

/// Parses, defaults and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let mut cfg: RunConfig = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |r| line_col(text, r.start));
        CliError::Parse {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    cfg.apply_defaults();
    cfg.validate()?;
    Ok(cfg)
}

/// `"sup"`, `"L2_L2"`, `"Linf_L4"`, ...
pub fn parse_norm(id: &str) -> Option<NormSpec> {
    if id == "sup" {
        return Some(NormSpec::Sup);
    }
    let exponent = |s: &str| -> Option<f64> {
        let v = s.strip_prefix('L')?;
        if v == "inf" {
            Some(f64::INFINITY)
        } else {
            v.parse().ok()
        }
    };
    let (p, q) = id.split_once('_')?;
    Some(NormSpec::Mixed {
        p: exponent(p)?,
        q: exponent(q)?,
    })
}

fn invalid(field: &str, reason: impl Into<String>) -> CliError {
    CliError::Invalid {
        field: field.to_string(),
        reason: reason.into(),
    }
}

/// Re-labels a core validation error with the config section it came from.
fn in_section(section: &str, err: CoreError) -> CliError {
    match err {
        CoreError::InvalidArgument { name, reason } => invalid(&format!("{section}.{name}"), reason),
        CoreError::InvalidGrid(reason) => invalid("grid", reason),
        other => invalid(section, other.to_string()),
    }
}

fn positive(field: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(field, format!("must be positive, got {v}")))
    }
}

impl RunConfig {
    fn apply_defaults(&mut self) {
        let n = self.grid.dim;
        if self.solver.eta.is_empty() {
            self.solver.eta = vec![1.0; n];
        }
        if self.solver.s.is_none() {
            self.solver.s = Some(n as f64 / 2.0 + 0.5);
        }
    }

    /// The solver template; `alpha` is the `[solver]` value.
    pub fn solve_config(&self) -> Result<SolveConfig, CliError> {
        let grid = self.grid.build().map_err(|e| in_section("grid", e))?;
        let s = &self.solver;
        let mut cfg = SolveConfig::new(s.alpha, &grid);
        cfg.b = s.b;
        cfg.eta = s.eta.clone();
        cfg.s = s.s.unwrap_or(cfg.s);
        cfg.horizon = s.horizon;
        cfg.dt = s.dt;
        cfg.picard_tol = s.picard_tol;
        cfg.picard_max_iter = s.picard_max_iter;
        cfg.dealias_fraction = s.dealias_fraction;
        cfg.snapshots = s.snapshots;
        cfg.scheme_constant = s.scheme_constant;
        Ok(cfg)
    }

    pub fn norms(&self) -> Result<Vec<NormSpec>, CliError> {
        self.sweep
            .norms
            .iter()
            .map(|id| parse_norm(id).ok_or_else(|| invalid("sweep.norms", format!("unknown norm `{id}`"))))
            .collect()
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.solve_config()?.validate().map_err(|e| in_section("solver", e))?;
        self.family.validate().map_err(|e| in_section("family", e))?;

        for &a in &self.sweep.alphas {
            if !(a > 1.0 && a <= 2.0) {
                return Err(invalid(
                    "sweep.alphas",
                    format!("each alpha must lie in (1, 2], got {a}"),
                ));
            }
        }
        if !(self.sweep.eps > 0.0 && self.sweep.eps < 1.0) {
            return Err(invalid(
                "sweep.eps",
                format!("must lie in (0, 1), got {}", self.sweep.eps),
            ));
        }
        for (i, n) in self.norms()?.iter().enumerate() {
            if let NormSpec::Mixed { p, q } = *n {
                if !(p >= 1.0 && q >= 1.0) {
                    return Err(invalid("sweep.norms", format!("entry {i}: exponents must be >= 1")));
                }
            }
        }
        positive("sweep.slope_tolerance", self.sweep.slope_tolerance)?;

        let k = &self.kernel;
        if k.variants.is_empty() {
            return Err(invalid("kernel.variants", "needs at least one variant"));
        }
        if !(k.dim == 1 || k.dim == 2) {
            return Err(invalid("kernel.dim", format!("must be 1 or 2, got {}", k.dim)));
        }
        if !(k.s > k.dim as f64 / 2.0) {
            return Err(invalid(
                "kernel.s",
                format!("need s > n/2 = {}, got {}", k.dim as f64 / 2.0, k.s),
            ));
        }
        positive("kernel.horizon", k.horizon)?;
        positive("kernel.slope_tolerance", k.slope_tolerance)?;
        if k.time_samples < 2 {
            return Err(invalid("kernel.time_samples", "needs at least 2 samples"));
        }

        let p = &self.properties;
        for &a in &p.alphas {
            if !(a > 1.0 && a <= 2.0) {
                return Err(invalid(
                    "properties.alphas",
                    format!("each alpha must lie in (1, 2], got {a}"),
                ));
            }
        }
        if p.times.len() < 2 {
            return Err(invalid("properties.times", "needs at least two times"));
        }
        for &t in &p.times {
            positive("properties.times", t)?;
        }
        for pair in &p.holder_pairs {
            positive("properties.holder_pairs", pair[0])?;
            positive("properties.holder_pairs", pair[1])?;
            if pair[0] == pair[1] {
                return Err(invalid(
                    "properties.holder_pairs",
                    "the two times of a pair must differ",
                ));
            }
        }
        fracheat_core::Grid::new(1, p.points_per_axis, p.half_length).map_err(|e| in_section("properties", e))?;

        let v = &self.validation;
        positive("validation.convergence_dt", v.convergence_dt)?;
        let steps = self.solver.horizon / (8.0 * v.convergence_dt);
        if (steps - steps.round()).abs() > 1e-9 {
            return Err(invalid(
                "validation.convergence_dt",
                "solver.horizon must be a multiple of 8 convergence_dt",
            ));
        }
        Ok(())
    }

    /// The resolved configuration as TOML, with every default filled in.
    pub fn echo(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the canonical JSON form. The output directory is left out:
    /// it does not influence any result.
    pub fn hash(&self) -> String {
        let canonical = RunConfig {
            output_dir: None,
            ..self.clone()
        };
        let json = serde_json::to_string(&canonical).expect("config serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_is_fully_defaulted() {
        let cfg = parse_config("study = \"kernel-rate\"\n").unwrap();
        assert_eq!(cfg.study, Some(StudyKind::KernelRate));
        assert_eq!(cfg.sweep.alphas, DEFAULT_SWEEP.to_vec());
        assert_eq!(cfg.solver.eta, vec![1.0]);
        assert_eq!(cfg.solver.s, Some(1.0));
        let echoed = parse_config(&cfg.echo()).unwrap();
        assert_eq!(echoed, cfg);
    }

    #[test]
    fn alias_for_the_properties_study() {
        let cfg = parse_config("study = \"kernel-props\"").unwrap();
        assert_eq!(cfg.study, Some(StudyKind::KernelProperties));
    }

    #[test]
    fn norm_ids_round_trip() {
        for id in ["sup", "L2_L2", "Linf_L4", "L1.5_L3"] {
            assert_eq!(parse_norm(id).unwrap().id(), id);
        }
        assert!(parse_norm("L2").is_none());
        assert!(parse_norm("Lx_L2").is_none());
    }

    #[test]
    fn line_and_column_are_one_based() {
        assert_eq!(line_col("ab\ncd", 4), (2, 2));
        assert_eq!(line_col("ab", 0), (1, 1));
    }

    #[test]
    fn hash_ignores_output_dir() {
        let a = RunConfig::default();
        let b = RunConfig {
            output_dir: Some("elsewhere".into()),
            ..a.clone()
        };
        assert_eq!(a.hash(), b.hash());
        let c = RunConfig {
            family: DataFamilySpec { gamma: 2.0, ..a.family },
            ..a.clone()
        };
        assert_ne!(a.hash(), c.hash());
    }
}
