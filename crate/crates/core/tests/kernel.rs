use std::f64::consts::PI;

use fracheat_core::kernel::properties::{mass_defect, semigroup_defect};
use fracheat_core::kernel::{
    apply_gradient_semigroup, kernel_field, kernel_hs_distance, kernel_rate_sweep, self_similarity_check,
    sup_over_time, HsDistance, KernelSpec, KernelVariant, SweepOptions,
};
use fracheat_core::lab::fit_rate;
use fracheat_core::spectral::{lp_norm, Field, Grid};
use fracheat_core::{Error, QuadratureSpec};
use num_complex::Complex64;

/// Trapezoid rule for the squared distance on `[0, 200]` with 10^7 panels.
fn brute_force(alpha: f64, t: f64, s: f64, grad: bool, dim: usize) -> f64 {
    let m = 10_000_000usize;
    let h = 200.0 / m as f64;
    let angular = if dim == 1 { 2.0 } else { 2.0 * PI };
    let f = |r: f64| {
        let d = (-t * r.powf(alpha)).exp() - (-t * r * r).exp();
        let mut w = (1.0 + r * r).powf(-s);
        if grad {
            w *= r * r;
        }
        if dim == 2 {
            w *= r;
        }
        d * d * w
    };
    let inner: f64 = (1..m).map(|k| f(k as f64 * h)).sum();
    (angular * h * (inner + 0.5 * (f(0.0) + f(200.0)))).sqrt()
}

#[test]
fn hs_distance_matches_brute_force_quadrature() {
    let quad = QuadratureSpec::default();
    let cases = [
        (1.7, 0.5, 1.0, false, 1),
        (1.95, 0.05, 1.0, false, 1),
        (1.5, 1.0, 1.0, true, 1),
        (1.8, 0.2, 1.5, false, 2),
    ];
    for (alpha, t, s, grad, dim) in cases {
        let mut q = HsDistance::new(alpha, t, s).in_dim(dim);
        if grad {
            q = q.gradient();
        }
        let fast = kernel_hs_distance(&q, &quad).unwrap();
        let slow = brute_force(alpha, t, s, grad, dim);
        assert!(((fast - slow) / slow).abs() < 1e-6, "{alpha} {t}: {fast} vs {slow}");
    }
}

#[test]
fn distance_shrinks_toward_the_heat_kernel() {
    let quad = QuadratureSpec::default();
    let mut prev = f64::INFINITY;
    for alpha in [1.5, 1.8, 1.9, 1.99, 1.999] {
        let d = kernel_hs_distance(&HsDistance::new(alpha, 0.3, 1.0), &quad).unwrap();
        assert!(d > 0.0 && d < prev);
        prev = d;
    }
}

#[test]
fn gradient_distance_needs_a_time_floor() {
    let opts = SweepOptions {
        variant: KernelVariant::Gradient,
        ..Default::default()
    };
    assert!(!HsDistance::new(1.9, 1.0, 1.0).gradient().bounded_near_zero_time());
    assert!(HsDistance::new(1.9, 1.0, 1.0).bounded_near_zero_time());
    let sample = sup_over_time(1.9, 1.0, 1.0, &opts).unwrap();
    assert!(sample.argmax_time >= 1.0 / 64.0);
    let value = sup_over_time(1.9, 1.0, 1.0, &SweepOptions::default()).unwrap();
    assert!(value.argmax_time > 0.0 && value.argmax_time < 1.0);
}

#[test]
fn rate_sweep_is_order_insensitive() {
    let opts = SweepOptions::default();
    let a = kernel_rate_sweep(&[1.8, 1.9, 1.95, 1.975], 1.0, 1.5, &opts).unwrap();
    let b = kernel_rate_sweep(&[1.975, 1.9, 1.8, 1.95, 1.9], 1.0, 1.5, &opts).unwrap();
    assert_eq!(a, b);
    assert!((a.fit.slope - 1.0).abs() < 0.1);
    assert!(matches!(
        kernel_rate_sweep(&[1.9, 1.95], 1.0, 1.0, &opts),
        Err(Error::DegenerateSweep(_))
    ));
}

#[test]
fn self_similarity() {
    let g = Grid::new(1, 4096, 256.0).unwrap();
    assert!(self_similarity_check(2.0, 4.0, &g).unwrap() <= 1e-6);
    // the periodized algebraic tail breaks exact scaling at O(L^{-1-alpha})
    let g = Grid::new(1, 8192, 512.0).unwrap();
    assert!(self_similarity_check(1.5, 2.0, &g).unwrap() <= 1e-6);
    let g2 = Grid::new(2, 256, 32.0).unwrap();
    assert!(self_similarity_check(2.0, 2.0, &g2).unwrap() <= 1e-6);
}

#[test]
fn heat_gradient_closed_form() {
    // d/dx (h(t) * exp(-x^2)) = -2x (1+4t)^{-3/2} exp(-x^2/(1+4t))
    let g = Grid::new(1, 1024, 32.0).unwrap();
    let u = Field::from_fn(&g, |x| (-x[0] * x[0]).exp());
    let t = 0.7;
    let d = apply_gradient_semigroup(&u, &KernelSpec::new(2.0, t).unwrap(), 0)
        .unwrap()
        .to_physical();
    let s = 1.0 + 4.0 * t;
    for (k, v) in d.values().iter().enumerate() {
        let x = g.axis_coordinate(k);
        let exact = -2.0 * x * s.powf(-1.5) * (-x * x / s).exp();
        assert!((v.re - exact).abs() < 1e-12);
    }
}

#[test]
fn gradient_l1_decay_exponent() {
    let g = Grid::new(1, 4096, 256.0).unwrap();
    let delta = Field::spectral_from_fn(&g, |_| Complex64::new((2.0 * PI).powf(-0.5), 0.0));
    let times = [0.5, 1.0, 2.0, 4.0, 8.0];
    for alpha in [1.5, 1.9] {
        let norms: Vec<f64> = times
            .iter()
            .map(|&t| {
                let grad = apply_gradient_semigroup(&delta, &KernelSpec::new(alpha, t).unwrap(), 0).unwrap();
                lp_norm(&grad.to_physical(), 1.0).unwrap()
            })
            .collect();
        let fit = fit_rate("grad_L1", &times, &norms).unwrap();
        assert!((fit.slope + 1.0 / alpha).abs() <= 0.05, "{alpha}: {}", fit.slope);
    }
}

#[test]
fn gaussian_kernel_closed_form() {
    let g = Grid::new(1, 1024, 32.0).unwrap();
    let t = 0.8;
    let k = kernel_field(&KernelSpec::new(2.0, t).unwrap(), &g).unwrap();
    for (i, v) in k.values().iter().enumerate() {
        let x = g.axis_coordinate(i);
        let exact = (4.0 * PI * t).powf(-0.5) * (-x * x / (4.0 * t)).exp();
        assert!((v.re - exact).abs() < 1e-12);
    }
}

#[test]
fn two_dimensional_mass_and_semigroup_law() {
    let g = Grid::new(2, 256, 32.0).unwrap();
    for alpha in [1.4, 1.8] {
        assert!(mass_defect(&KernelSpec::new(alpha, 1.0).unwrap(), &g).unwrap() < 1e-8);
    }
    let u = Field::from_fn(&g, |x| (-(x[0] * x[0] + 2.0 * x[1] * x[1])).exp());
    assert!(semigroup_defect(&u, 1.6, 0.2, 0.7).unwrap() < 1e-12);
}

#[test]
fn under_resolved_kernel_is_rejected() {
    let g = Grid::new(1, 64, 32.0).unwrap();
    assert!(matches!(
        kernel_field(&KernelSpec::new(1.2, 0.01).unwrap(), &g),
        Err(Error::UnderResolvedKernel { .. })
    ));
}
