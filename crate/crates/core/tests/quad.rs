use std::f64::consts::{PI, SQRT_2};

use circlelab_core::eulermac::{f_sin2, FMethod, FunctionModel};
use circlelab_core::quad::*;
use circlelab_core::specfun::si;
use circlelab_core::EvalConfig;
use proptest::prelude::*;

#[test]
fn polynomials_are_exact() {
    let r = integrate(|x| 3.0 * x * x - 2.0 * x + 1.0, -1.0, 2.0, 1e-13).unwrap();
    assert!((r.value - 9.0).abs() < 1e-13);
    let r = integrate(|x| x.powi(9), 0.0, 1.0, 1e-13).unwrap();
    assert!((r.value - 0.1).abs() < 1e-13);
}

#[test]
fn full_period_cancels() {
    let r = integrate(|t| t.sin(), 0.0, 2.0 * PI, 1e-13).unwrap();
    assert!(r.value.abs() < 1e-12);
}

#[test]
fn gauss_legendre_nodes() {
    let (x, w) = gauss_legendre(5);
    assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    let quartic: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
    assert!((quartic - 2.0 / 9.0).abs() < 1e-14);
}

#[test]
fn sinc_tail() {
    // int_x^inf sin t/t dt = pi/2 - Si(x).
    let cfg = EvalConfig::default();
    for &x in &[1.0, 10.0, 55.0] {
        let p = paired_tail(|t| t.sin() / t, x, 0.0, PI).unwrap();
        let o = PI / 2.0 - si(x, &cfg).unwrap().value;
        assert!((p.averaged.value - o).abs() < 1e-10, "x={x}");
        assert!(p.agree());
    }
}

#[test]
fn sin2_lower_integral_routes() {
    for (y, tol) in [(1.0, 1e-8), (10.0, 1e-7), (0.3, 1e-8)] {
        let d = sin2_lower_integral(y).unwrap();
        assert!((d.paired.value - d.closed.value).abs() <= tol, "Y={y}");
    }
    let small = sin2_lower_integral(1e-3).unwrap();
    assert!(small.closed.value < 2e-3);
    assert!(sin2_lower_integral(0.0).is_err());
}

#[test]
fn kelvin_matches_lattice_function() {
    for (y, tol) in [(0.5, 1e-4), (1.0, 1e-4), (2.0, 1e-4), (5.0, 1e-4)] {
        let k = kelvin_integral(y).unwrap();
        let f = f_sin2(y, FMethod::Lattice).unwrap();
        assert!((f.value + SQRT_2 * k.value).abs() <= tol, "Y={y}");
    }
    assert!(kelvin_integral(KELVIN_Y_MAX + 1.0).is_err());
}

#[test]
fn kelvin_error_follows_tolerance() {
    for &y in &[0.5, 2.0, 6.0] {
        let loose = kelvin_integral_tol(y, 1e-4).unwrap();
        let tight = kelvin_integral_tol(y, 1e-6).unwrap();
        assert!(
            tight.est_error * 10.0 <= loose.est_error.max(1e-15) || tight.est_error < 1e-12,
            "Y={y}"
        );
    }
}

#[test]
fn iterated_integrals() {
    let lin = FunctionModel::Monomial {
        coeff: 1.0,
        power: 1,
    };
    assert!((iterated_integral(&lin, 1, 1.0).unwrap().value - 0.5).abs() < 1e-14);
    assert!((iterated_integral(&lin, 1, 3.0).unwrap().value - 1.5).abs() < 1e-13);
    // x^{-2} int_0^3 int_0^w sin^2 = (9/4 + (cos 6 - 1)/8) / 9.
    let s2 = FunctionModel::Sin2 { a: 1.0 };
    let exact = (2.25 + ((6.0f64).cos() - 1.0) / 8.0) / 9.0;
    assert!((iterated_integral(&s2, 2, 3.0).unwrap().value - exact).abs() < 1e-8);
    assert!(iterated_integral(&s2, MAX_ITERATED + 1, 3.0).is_err());
}

#[test]
fn iterated_sin2_approaches_leading_term() {
    // Scaled n-fold integral of sin^2 tends to 1/(2 n!) for large x.
    let s2 = FunctionModel::Sin2 { a: 1.0 };
    let mut fact = 1.0;
    for n in 1..=MAX_ITERATED {
        fact *= n as f64;
        let v = iterated_integral(&s2, n, 200.0).unwrap().value;
        assert!((v * 2.0 * fact - 1.0).abs() < 0.05, "n={n}: {v}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cubic_exact(a in -3.0f64..3.0, b in -3.0f64..3.0, lo in -2.0f64..0.0, hi in 0.0f64..2.0) {
        let f = |x: f64| a * x * x * x + b * x;
        let exact = a / 4.0 * (hi.powi(4) - lo.powi(4)) + b / 2.0 * (hi * hi - lo * lo);
        let r = integrate_with(f, lo, hi, QuadOptions::best_effort(1e-13, 1e-15)).unwrap();
        prop_assert!((r.value - exact).abs() <= 1e-13 * (1.0 + exact.abs()));
    }

    #[test]
    fn sin2_routes_agree(y in 0.05f64..12.0) {
        let d = sin2_lower_integral(y).unwrap();
        prop_assert!((d.paired.value - d.closed.value).abs() <= d.paired.est_error + d.closed.est_error + 1e-9);
    }
}
