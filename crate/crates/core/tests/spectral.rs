use fracheat_core::spectral::{lp_norm, sobolev_norm, Field, Grid, SobolevFlavor};
use proptest::prelude::*;

fn field_from(grid: &Grid, coeffs: &[f64]) -> Field {
    // smooth periodic profile built from a few random modes
    Field::from_fn(grid, |x| {
        coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * ((k as f64 + 1.0) * x[0] * std::f64::consts::PI / grid.half_length()).cos())
            .sum::<f64>()
            + (-x[0] * x[0]).exp()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn plancherel(coeffs in prop::collection::vec(-2.0f64..2.0, 1..6)) {
        let g = Grid::new(1, 128, 8.0).unwrap();
        let u = field_from(&g, &coeffs);
        let l2 = lp_norm(&u, 2.0).unwrap();
        let h0 = sobolev_norm(&u, 0.0, SobolevFlavor::Inhomogeneous).unwrap();
        prop_assert!((l2 - h0).abs() <= 1e-12 * l2.max(1.0));
    }

    #[test]
    fn sobolev_monotone_in_s(coeffs in prop::collection::vec(-2.0f64..2.0, 1..6), s in -2.0f64..2.0, ds in 0.01f64..1.0) {
        let g = Grid::new(1, 64, 4.0).unwrap();
        let u = field_from(&g, &coeffs);
        let a = sobolev_norm(&u, s, SobolevFlavor::Inhomogeneous).unwrap();
        let b = sobolev_norm(&u, s + ds, SobolevFlavor::Inhomogeneous).unwrap();
        prop_assert!(a <= b * (1.0 + 1e-14));
    }

    #[test]
    fn shift_invariance(coeffs in prop::collection::vec(-2.0f64..2.0, 1..6), cells in 0usize..128, s in 0.0f64..2.0) {
        let g = Grid::new(1, 128, 8.0).unwrap();
        let u = field_from(&g, &coeffs);
        let v = u.cyclic_shift(cells).unwrap();
        for p in [1.0, 2.0, f64::INFINITY] {
            let a = lp_norm(&u, p).unwrap();
            prop_assert!((a - lp_norm(&v, p).unwrap()).abs() <= 1e-12 * a.max(1.0));
        }
        let a = sobolev_norm(&u, s, SobolevFlavor::Inhomogeneous).unwrap();
        prop_assert!((a - sobolev_norm(&v, s, SobolevFlavor::Inhomogeneous).unwrap()).abs() <= 1e-11 * a.max(1.0));
    }

    #[test]
    fn round_trip(values in prop::collection::vec(-10.0f64..10.0, 64)) {
        let g = Grid::new(1, 64, 3.0).unwrap();
        let u = Field::from_real(&g, &values).unwrap();
        let back = u.to_spectral().to_physical();
        for (a, b) in u.values().iter().zip(back.values()) {
            prop_assert!((a - b).norm() <= 1e-12 * 10.0);
        }
    }

    #[test]
    fn real_fields_have_hermitian_spectra(values in prop::collection::vec(-1.0f64..1.0, 256)) {
        let g = Grid::new(2, 16, 2.0).unwrap();
        let u = Field::from_real(&g, &values).unwrap().to_spectral();
        prop_assert!(u.hermitian_defect().unwrap() <= 1e-13);
    }
}

#[test]
fn gaussian_h1_norm_against_quadrature() {
    // ||exp(-x^2)||_{H^1}^2 = ||u||_2^2 + ||u'||_2^2 = sqrt(pi/2) + sqrt(pi/2)
    let exact = (2.0 * (std::f64::consts::PI / 2.0).sqrt()).sqrt();
    // independent check by the trapezoid rule on [-40, 40]
    let m = 400_000;
    let h = 80.0 / m as f64;
    let quad: f64 = (0..=m)
        .map(|k| {
            let x = -40.0 + k as f64 * h;
            let w = if k == 0 || k == m { 0.5 } else { 1.0 };
            let u = (-x * x).exp();
            w * (u * u + 4.0 * x * x * u * u)
        })
        .sum::<f64>()
        * h;
    assert!((quad.sqrt() - exact).abs() < 1e-10);
    assert!((exact - (2.0 * std::f64::consts::PI).powf(0.25)).abs() < 1e-15);

    let g = Grid::new(1, 512, 20.0).unwrap();
    let u = Field::from_fn(&g, |x| (-x[0] * x[0]).exp());
    let h1 = sobolev_norm(&u, 1.0, SobolevFlavor::Inhomogeneous).unwrap();
    assert!((h1 - exact).abs() < 1e-12, "{h1} vs {exact}");
}

#[test]
fn two_dimensional_gaussian_norms() {
    let g = Grid::new(2, 64, 10.0).unwrap();
    let u = Field::from_fn(&g, |x| (-(x[0] * x[0] + x[1] * x[1])).exp());
    // L1 = pi, L2^2 = pi/2
    assert!((lp_norm(&u, 1.0).unwrap() - std::f64::consts::PI).abs() < 1e-12);
    assert!((lp_norm(&u, 2.0).unwrap() - (std::f64::consts::PI / 2.0).sqrt()).abs() < 1e-12);
}
