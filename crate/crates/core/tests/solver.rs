use fracheat_core::kernel::{apply_semigroup, KernelSpec};
use fracheat_core::lab::fit_rate;
use fracheat_core::solver::validation::{bit_identical, l1_excess, mean_drift, trajectory_gap};
use fracheat_core::solver::{
    calibrate_scheme_constant, duhamel_step, march, nonlinear_term, picard_solve_segment, solve, CalibrationMatrix,
    SolveConfig, DEFAULT_SCHEME_CONSTANT,
};
use fracheat_core::spectral::{lp_norm, Field, Grid, Representation};
use fracheat_core::Error;

fn gaussian(grid: &Grid, amp: f64) -> Field {
    Field::from_fn(grid, |x| amp * (-(x[0] * x[0] + x[1] * x[1])).exp())
}

fn sup(f: &Field) -> f64 {
    lp_norm(f, f64::INFINITY).unwrap()
}

#[test]
fn cubic_nonlinearity_trig_oracle() {
    // d/dx sin^3 x = 3 sin^2 x cos x = (3/4)(cos x - cos 3x), both modes kept
    let g = Grid::new(1, 32, std::f64::consts::PI).unwrap();
    let u = Field::from_fn(&g, |x| x[0].sin());
    let d = nonlinear_term(&u, 3, &[2.0], 0.5).unwrap().to_physical();
    for (k, v) in d.values().iter().enumerate() {
        let x = g.axis_coordinate(k);
        assert!((v.re - 2.0 * 3.0 * x.sin().powi(2) * x.cos()).abs() < 1e-10);
    }
}

#[test]
fn linear_problem_is_the_semigroup() {
    for (dim, n, alpha) in [(1, 256, 1.3), (1, 256, 2.0), (2, 32, 1.6)] {
        let g = Grid::new(dim, n, 8.0).unwrap();
        let mut cfg = SolveConfig::new(alpha, &g);
        cfg.eta = vec![0.0; dim];
        cfg.horizon = 0.5;
        cfg.snapshots = 9;
        let u0 = gaussian(&g, 1.3);
        let traj = solve(&u0, &cfg).unwrap();
        assert_eq!(traj.segments.len(), 1);
        assert_eq!(traj.segments[0].iterations, 1);
        for (u, &t) in traj.states.iter().zip(&traj.times) {
            let exact = apply_semigroup(&u0, &KernelSpec::new(alpha, t.max(1e-300)).unwrap()).to_physical();
            assert!(sup(&u.sub(&exact).unwrap()) <= 1e-10);
        }
    }
}

#[test]
fn step_is_first_order_consistent() {
    let g = Grid::new(1, 256, 16.0).unwrap();
    let mut cfg = SolveConfig::new(1.6, &g);
    cfg.dt = 1.0 / 64.0;
    let u = gaussian(&g, 1.0);
    let dts: Vec<f64> = (12..=18).map(|k| 2f64.powi(-k)).collect();
    let gaps: Vec<f64> = dts
        .iter()
        .map(|&dt| lp_norm(&duhamel_step(&u, &cfg, dt).unwrap().sub(&u).unwrap(), 2.0).unwrap())
        .collect();
    let fit = fit_rate("step", &dts, &gaps).unwrap();
    assert!(fit.slope >= 0.99, "{}", fit.slope);
}

#[test]
fn explicit_march_self_convergence() {
    let g = Grid::new(1, 256, 16.0).unwrap();
    let mut cfg = SolveConfig::new(1.8, &g);
    cfg.horizon = 0.5;
    cfg.snapshots = 2;
    let u0 = gaussian(&g, 1.0);
    let at = |dt: f64| {
        let c = SolveConfig { dt, ..cfg.clone() };
        march(&u0, &c).unwrap().final_state().clone()
    };
    let dt = 1.0 / 32.0;
    let reference = at(dt / 8.0);
    let e1 = sup(&at(dt).sub(&reference).unwrap());
    let e2 = sup(&at(dt / 2.0).sub(&reference).unwrap());
    assert!(e1 / e2 >= 3.7, "{e1} {e2}");
}

#[test]
fn oversized_segment_is_reported() {
    let g = Grid::new(1, 128, 16.0).unwrap();
    let mut cfg = SolveConfig::new(1.5, &g);
    cfg.b = 3;
    cfg.eta = vec![4.0];
    let u0 = gaussian(&g, 5.0);
    match picard_solve_segment(&u0, &cfg, 1.0) {
        Err(Error::NonContraction { iterations, .. }) => assert!(iterations >= 1),
        Err(Error::BlowUp { .. }) => {}
        other => panic!("expected a contraction failure, got {other:?}"),
    }
}

#[test]
fn fine_reference_agreement() {
    let g = Grid::new(1, 1024, 32.0).unwrap();
    let cfg = SolveConfig::new(2.0, &g);
    let u0 = gaussian(&g, 1.0);
    let coarse = solve(&u0, &cfg).unwrap();
    let fine = solve(
        &u0,
        &SolveConfig {
            dt: cfg.dt / 16.0,
            ..cfg.clone()
        },
    )
    .unwrap();
    let gap = trajectory_gap(&coarse, &fine).unwrap();
    assert!(gap <= 1e-6, "{gap}");
}

#[test]
fn picard_and_explicit_march_agree_for_small_data() {
    let g = Grid::new(1, 512, 32.0).unwrap();
    let cfg = SolveConfig::new(1.7, &g);
    let u0 = gaussian(&g, 0.1);
    let a = solve(&u0, &cfg).unwrap();
    let b = march(&u0, &cfg).unwrap();
    assert!(trajectory_gap(&a, &b).unwrap() <= 1e-7);
}

#[test]
fn sup_norm_decays_like_the_linear_flow() {
    // large box so the torus mean stays negligible over the window
    let g = Grid::new(1, 2048, 256.0).unwrap();
    let mut cfg = SolveConfig::new(1.5, &g);
    cfg.horizon = 64.0;
    cfg.snapshots = 65;
    cfg.dt = 1.0 / 32.0;
    let u0 = gaussian(&g, 1.0);
    let traj = solve(&u0, &cfg).unwrap();
    let mean = traj.diagnostics[0].l1 / (2.0 * g.half_length());
    let (ts, ns): (Vec<f64>, Vec<f64>) = traj
        .times
        .iter()
        .zip(&traj.diagnostics)
        .filter(|(t, _)| **t >= 8.0)
        .map(|(t, d)| (*t, d.linf - mean))
        .unzip();
    let fit = fit_rate("linf", &ts, &ns).unwrap();
    assert!((fit.slope + 1.0 / 1.5).abs() <= 0.1, "{}", fit.slope);
}

#[test]
fn conservation_and_determinism_in_two_dimensions() {
    let g = Grid::new(2, 64, 8.0).unwrap();
    let mut cfg = SolveConfig::new(1.8, &g);
    cfg.eta = vec![1.0, -0.5];
    cfg.horizon = 0.25;
    cfg.snapshots = 5;
    let u0 = gaussian(&g, 1.0);
    let a = solve(&u0, &cfg).unwrap();
    let b = solve(&u0, &cfg).unwrap();
    assert!(bit_identical(&a, &b));
    assert!(mean_drift(&a) <= 1e-10);
    assert!(l1_excess(&a) <= 1e-6);
}

#[test]
fn sign_changing_data_is_monitored_not_rejected() {
    let g = Grid::new(1, 256, 16.0).unwrap();
    let mut cfg = SolveConfig::new(1.7, &g);
    cfg.horizon = 0.25;
    cfg.snapshots = 5;
    let u0 = Field::from_fn(&g, |x| x[0] * (-x[0] * x[0]).exp());
    let traj = solve(&u0, &cfg).unwrap();
    assert!(traj.l1_max_growth.is_finite());
    assert!(traj.diagnostics.iter().all(|d| d.l1.is_finite() && d.hs.is_finite()));
}

#[test]
fn zero_datum_gives_zero_trajectory() {
    let g = Grid::new(1, 64, 8.0).unwrap();
    let cfg = SolveConfig::new(1.5, &g);
    let traj = solve(&Field::zeros(&g, Representation::Physical), &cfg).unwrap();
    assert!(traj.states.iter().all(|u| sup(u) == 0.0));
}

#[test]
fn default_scheme_constant_is_the_calibrated_one() {
    let cal = calibrate_scheme_constant(&CalibrationMatrix::default()).unwrap();
    assert_eq!(cal.constant, DEFAULT_SCHEME_CONSTANT);
    assert!(cal.scanned.iter().rev().skip(1).all(|(_, ok)| !ok));
}
