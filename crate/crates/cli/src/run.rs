//! Study drivers. Each study measures, fills a [`StudyReport`], and hands
//! every file to a single writer at the end.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use fracheat_core::kernel::properties::{
    decay_envelope, holder_constant_bound, holder_ratios, lp_decay_fit, mass_defect, min_relative_value,
    semigroup_defect, tail_coefficient,
};
use fracheat_core::kernel::{kernel_rate_sweep, KernelSpec, SweepOptions};
use fracheat_core::lab::run_rate_study;
use fracheat_core::solver::solve;
use fracheat_core::solver::validation::{
    bit_identical, l1_excess, linear_exactness_defect, mean_drift, self_convergence,
};
use fracheat_core::{Grid, RateStudySpec, SolveConfig};
use log::info;

use crate::config::{RunConfig, StudyKind};
use crate::error::CliError;
use crate::report::{render_all, Check, FitSummary, StudyReport, Table, Timings};

pub struct StudyOutput {
    pub report: StudyReport,
    pub timings: Timings,
    pub files: BTreeMap<String, String>,
}

struct Clock {
    start: Instant,
    last: Instant,
    phases: Vec<(String, f64)>,
}

impl Clock {
    fn new() -> Clock {
        let now = Instant::now();
        Clock {
            start: now,
            last: now,
            phases: Vec::new(),
        }
    }

    fn lap(&mut self, name: &str) {
        let now = Instant::now();
        self.phases.push((name.into(), (now - self.last).as_secs_f64()));
        self.last = now;
        info!("{name}: {:.2}s", self.phases.last().unwrap().1);
    }

    fn finish(self, hash: &str) -> Timings {
        Timings {
            config_hash: hash.into(),
            total_seconds: self.start.elapsed().as_secs_f64(),
            phases: self.phases,
        }
    }
}

/// Fails unless `path` is (or can be made) a writable directory.
pub fn prepare_output_dir(path: &Path) -> Result<(), CliError> {
    let bad = |reason: String| CliError::OutputDir {
        path: path.to_path_buf(),
        reason,
    };
    if path.exists() && !path.is_dir() {
        return Err(bad("exists and is not a directory".into()));
    }
    fs::create_dir_all(path).map_err(|e| bad(format!("cannot create: {e}")))?;
    let probe = path.join(".fracheat-write-probe");
    fs::write(&probe, b"").map_err(|e| bad(format!("not writable: {e}")))?;
    fs::remove_file(&probe).map_err(|e| bad(format!("cannot clean up probe: {e}")))?;
    Ok(())
}

/// Runs one study in memory.
pub fn run_study(kind: StudyKind, cfg: &RunConfig, strict: bool) -> Result<StudyOutput, CliError> {
    cfg.validate()?;
    let hash = cfg.hash();
    let mut report = StudyReport::new(kind.id(), hash.clone(), strict);
    let mut clock = Clock::new();
    let study = |source| CliError::Study {
        study: kind.id(),
        source,
    };
    match kind {
        StudyKind::KernelRate => kernel_rate(cfg, &mut report, &mut clock).map_err(study)?,
        StudyKind::SolutionRate => solution_rate(cfg, &mut report, &mut clock).map_err(study)?,
        StudyKind::KernelProperties => kernel_properties(cfg, &mut report, &mut clock).map_err(study)?,
        StudyKind::SolverValidate => solver_validate(cfg, &mut report, &mut clock).map_err(study)?,
    }
    report.finish();
    let timings = clock.finish(&hash);
    let files = render_all(&report, &timings, &cfg.echo());
    Ok(StudyOutput { report, timings, files })
}

/// Checks the output directory, runs the study, and writes its files. When
/// the study fails, only an `INCOMPLETE` marker holding the error is written.
pub fn execute(kind: StudyKind, cfg: &RunConfig, out: &Path, strict: bool) -> Result<StudyReport, CliError> {
    prepare_output_dir(out)?;
    let write = |name: &str, contents: &str| {
        let path = out.join(name);
        fs::write(&path, contents).map_err(|source| CliError::Io { path, source })
    };
    match run_study(kind, cfg, strict) {
        Ok(output) => {
            let stale = out.join("INCOMPLETE");
            if stale.exists() {
                fs::remove_file(&stale).map_err(|source| CliError::Io { path: stale, source })?;
            }
            for (name, contents) in &output.files {
                write(name, contents)?;
            }
            Ok(output.report)
        }
        Err(e) => {
            write(
                "INCOMPLETE",
                &format!("study {}\nconfig_hash {}\nerror {e}\n", kind.id(), cfg.hash()),
            )?;
            Err(e)
        }
    }
}

type Step = fracheat_core::Result<()>;

fn kernel_rate(cfg: &RunConfig, report: &mut StudyReport, clock: &mut Clock) -> Step {
    let k = &cfg.kernel;
    let mut columns = vec!["alpha".to_string(), "2-alpha".to_string()];
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for variant in &k.variants {
        let options = SweepOptions {
            dim: k.dim,
            variant: *variant,
            time_samples: k.time_samples,
            quadrature: k.quadrature,
        };
        let sweep = kernel_rate_sweep(&cfg.sweep.alphas, k.horizon, k.s, &options)?;
        clock.lap(variant.id());
        if rows.is_empty() {
            rows = sweep.samples.iter().map(|p| vec![p.alpha, 2.0 - p.alpha]).collect();
        }
        for (row, p) in rows.iter_mut().zip(&sweep.samples) {
            row.push(p.sup);
        }
        columns.push(variant.id().to_string());
        report.fits.push(FitSummary::new(&sweep.fit, 1.0, k.slope_tolerance));
    }
    report.tables.push(Table {
        name: "errors".into(),
        columns,
        rows,
    });
    Ok(())
}

fn solution_rate(cfg: &RunConfig, report: &mut StudyReport, clock: &mut Clock) -> Step {
    let spec = RateStudySpec {
        family: cfg.family,
        alphas: cfg.sweep.alphas.clone(),
        norms: cfg.norms().expect("validated"),
        eps: cfg.sweep.eps,
        max_refinements: cfg.sweep.max_refinements,
    };
    let template = cfg.solve_config().expect("validated").with_alpha(2.0);
    let study = run_rate_study(&spec, &template)?;
    clock.lap("sweep");

    let mut columns = vec!["alpha".to_string(), "2-alpha".to_string()];
    columns.extend(study.fits.iter().map(|f| f.norm.id()));
    let rows = study
        .alphas
        .iter()
        .enumerate()
        .map(|(k, &a)| {
            let mut row = vec![a, 2.0 - a];
            row.extend(study.errors.iter().map(|e| e[k]));
            row
        })
        .collect();
    report.tables.push(Table {
        name: "errors".into(),
        columns,
        rows,
    });
    report.tables.push(Table {
        name: "members".into(),
        columns: vec!["alpha".into(), "data_gap".into(), "segments".into()],
        rows: study
            .alphas
            .iter()
            .zip(&study.segments)
            .map(|(&a, &s)| vec![a, cfg.family.gap(a), s as f64])
            .collect(),
    });
    report.tables.push(Table {
        name: "floor_checks".into(),
        columns: vec!["dt".into(), "floor".into(), "smallest_error".into()],
        rows: study
            .floor_checks
            .iter()
            .map(|f| vec![f.dt, f.floor, f.smallest_error])
            .collect(),
    });
    for rate in &study.fits {
        report
            .fits
            .push(FitSummary::from_study(rate, cfg.sweep.slope_tolerance));
    }
    let last = study.floor_checks.last().expect("at least one floor check");
    report.checks.push(Check::at_most(
        format!("time-discretization floor at dt {}", last.dt),
        last.floor,
        last.smallest_error / 10.0,
    ));
    report.warnings.extend(study.warnings);
    Ok(())
}

fn kernel_properties(cfg: &RunConfig, report: &mut StudyReport, clock: &mut Clock) -> Step {
    let p = &cfg.properties;
    let grid = Grid::new(1, p.points_per_axis, p.half_length)?;
    let u = cfg.family.base.sample(&grid);
    let pairs: Vec<(f64, f64)> = p.holder_pairs.iter().map(|q| (q[0], q[1])).collect();
    let eps = pairs.iter().map(|q| q.0.min(q.1)).fold(f64::INFINITY, f64::min);
    let holder_bound = holder_constant_bound(eps);
    let s = cfg.solver.s.expect("defaulted");
    let mut rows = Vec::new();

    for &alpha in &p.alphas {
        let mut mass: f64 = 0.0;
        let mut low = f64::INFINITY;
        for &t in &p.times {
            let spec = KernelSpec::new(alpha, t)?;
            mass = mass.max(mass_defect(&spec, &grid)?);
            low = low.min(min_relative_value(&spec, &grid)?);
        }
        report.checks.push(Check::at_most(
            format!("alpha {alpha}: mass defect"),
            mass,
            p.mass_tolerance,
        ));
        if alpha < 2.0 {
            report.checks.push(Check {
                name: format!("alpha {alpha}: min P / max P"),
                measured: low,
                target: "> 0".into(),
                tolerance: 0.0,
                passed: low > 0.0,
            });
        } else {
            // the Gaussian tail underflows, leaving rounding-level negatives
            report
                .checks
                .push(Check::at_least(format!("alpha {alpha}: min P / max P"), low, -1e-15));
        }

        let env = decay_envelope(alpha, &grid)?;
        report.checks.push(Check::at_most(
            format!("alpha {alpha}: envelope constant over the inner-region fit"),
            env.constant / env.inner_constant,
            1.0 + 1e-9,
        ));
        let tail = tail_coefficient(alpha);
        if alpha < 2.0 {
            report.checks.push(Check::near(
                format!("alpha {alpha}: far-field scaled kernel / c_alpha"),
                env.outer_min / tail,
                1.0,
                p.tail_tolerance,
            ));
        }

        let mut exponents = Vec::new();
        for q in [1.0, 2.0, f64::INFINITY] {
            let slope = lp_decay_fit(alpha, q, &p.times, &grid)?.slope;
            let want = -(1.0 / alpha) * (1.0 - 1.0 / q);
            report.checks.push(Check::near(
                format!("alpha {alpha}: L{q} decay exponent"),
                slope,
                want,
                p.exponent_tolerance,
            ));
            exponents.push(slope);
        }

        let law = semigroup_defect(&u, alpha, p.times[0], p.times[1])?;
        report.checks.push(Check::at_most(
            format!("alpha {alpha}: semigroup law"),
            law,
            p.semigroup_tolerance,
        ));
        let holder = holder_ratios(&u, alpha, s, &pairs)?.into_iter().fold(0.0, f64::max);
        report.checks.push(Check::at_most(
            format!("alpha {alpha}: half-Holder ratio"),
            holder,
            holder_bound,
        ));

        let mut row = vec![alpha, mass, low, env.inner_constant, env.outer_min, tail];
        row.extend(exponents);
        row.extend([law, holder]);
        rows.push(row);
        clock.lap(&format!("alpha {alpha}"));
    }
    report.tables.push(Table {
        name: "properties".into(),
        columns: [
            "alpha",
            "mass_defect",
            "min_relative",
            "envelope_constant",
            "outer_min",
            "tail_coefficient",
            "L1_exponent",
            "L2_exponent",
            "Linf_exponent",
            "semigroup_defect",
            "holder_max",
        ]
        .iter()
        .map(|c| c.to_string())
        .collect(),
        rows,
    });
    Ok(())
}

fn solver_validate(cfg: &RunConfig, report: &mut StudyReport, clock: &mut Clock) -> Step {
    let solve_cfg = cfg.solve_config().expect("validated");
    let v = &cfg.validation;
    let u0 = cfg.family.base.sample(&solve_cfg.grid);

    let linear = linear_exactness_defect(&u0, &solve_cfg)?;
    report
        .checks
        .push(Check::at_most("linear exactness (eta = 0)", linear, v.linear_tolerance));
    clock.lap("linear");

    let conv = self_convergence(
        &u0,
        &SolveConfig {
            dt: v.convergence_dt,
            ..solve_cfg.clone()
        },
    )?;
    report
        .checks
        .push(Check::at_least("self-convergence order", conv.order, v.min_order));
    clock.lap("self-convergence");

    let a = solve(&u0, &solve_cfg)?;
    let b = solve(&u0, &solve_cfg)?;
    clock.lap("solves");
    report
        .checks
        .push(Check::at_most("mean conservation", mean_drift(&a), v.mean_tolerance));
    if u0.real_values().iter().all(|x| *x >= 0.0) {
        report
            .checks
            .push(Check::at_most("L1 non-expansion", l1_excess(&a), v.l1_tolerance));
    } else {
        report.warnings.push(format!(
            "datum changes sign; L1 non-expansion not asserted (max L1 growth {:.3e})",
            a.l1_max_growth
        ));
    }
    report
        .checks
        .push(Check::holds("bit-identical rerun", bit_identical(&a, &b)));

    report.tables.push(Table {
        name: "diagnostics".into(),
        columns: ["t", "L1", "L2", "Linf", "Hs"].iter().map(|c| c.to_string()).collect(),
        rows: a
            .times
            .iter()
            .zip(&a.diagnostics)
            .map(|(t, d)| vec![*t, d.l1, d.l2, d.linf, d.hs])
            .collect(),
    });
    report.tables.push(Table {
        name: "segments".into(),
        columns: ["start", "existence_time", "length", "iterations"]
            .iter()
            .map(|c| c.to_string())
            .collect(),
        rows: a
            .segments
            .iter()
            .map(|s| vec![s.start, s.existence_time, s.length, s.iterations as f64])
            .collect(),
    });
    report.tables.push(Table {
        name: "self_convergence".into(),
        columns: ["dt", "error_dt", "error_dt_half", "ratio", "order"]
            .iter()
            .map(|c| c.to_string())
            .collect(),
        rows: vec![vec![
            conv.dt,
            conv.error_coarse,
            conv.error_fine,
            conv.ratio,
            conv.order,
        ]],
    });
    Ok(())
}
