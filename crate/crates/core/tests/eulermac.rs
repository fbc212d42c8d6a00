use circlelab_core::eulermac::*;
use circlelab_core::specfun::{si, zeta_minus_pole, EULER_GAMMA};
use circlelab_core::{Error, EvalConfig};
use proptest::prelude::*;

const ZETA2_M1: f64 = 0.644_934_066_848_226_4;

/// Composite Simpson.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        s += f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// `sum_{k<=M} sin^2(Y/k) - int_1^M sin^2(Y/t) dt - sin^2(Y/M)/2`, the
/// last term removing the leading boundary bias of the finite difference.
fn c_sin2_by_sum(y: f64, m: usize) -> f64 {
    let s: f64 = (1..=m).rev().map(|k| (y / k as f64).sin().powi(2)).sum();
    // int_1^M sin^2(Y/t) dt = Y int_{Y/M}^Y sin^2 u / u^2 du
    let i = y * simpson(|u| (u.sin() / u).powi(2), y / m as f64, y, 200_000);
    s - i - 0.5 * (y / m as f64).sin().powi(2)
}

#[test]
fn c_of_square_is_zeta_two_minus_one() {
    let c = c_constant(&FunctionModel::Monomial {
        coeff: 1.0,
        power: 2,
    })
    .unwrap();
    assert!((c.value - ZETA2_M1).abs() < 1e-14);
    let l = limit_diff(
        &FunctionModel::Monomial {
            coeff: 1.0,
            power: 2,
        },
        100_000,
        IntegralFrom::One,
    )
    .unwrap();
    assert!((l.value - ZETA2_M1).abs() <= l.est_error);
    assert!(l.est_error < 1e-4);
}

#[test]
fn c_of_linear_is_euler_gamma() {
    let c = c_constant(&FunctionModel::Monomial {
        coeff: 1.0,
        power: 1,
    })
    .unwrap();
    assert!((c.value - EULER_GAMMA).abs() < 1e-14);
}

#[test]
fn c_sin2_routes_against_summation() {
    for &y in &[0.5, 1.0, 2.0, 2.5, 4.0] {
        let closed = c_sin2_closed(y).unwrap();
        let oracle = c_sin2_by_sum(y, 200_000);
        assert!(
            (closed.value - oracle).abs() < 1e-9,
            "Y={y}: {} vs {oracle}",
            closed.value
        );
        let l = limit_diff(&FunctionModel::Sin2 { a: y }, 100_000, IntegralFrom::One).unwrap();
        assert!(
            (closed.value - l.value).abs() <= closed.est_error + l.est_error,
            "Y={y}"
        );
    }
    let z = c_sin2_zeta(0.5).unwrap();
    assert!((z.value - c_sin2_closed(0.5).unwrap().value).abs() < 1e-9);
}

#[test]
fn zeta_series_refuses_large_arguments() {
    assert!(matches!(c_sin2_zeta(40.0), Err(Error::Cancellation { .. })));
}

#[test]
fn lattice_function_reference_values() {
    for (x, v) in [(1.0, 1.326_324_405_266_653_4), (2.5, 3.486_800_676_255_890)] {
        for m in [FMethod::Lattice, FMethod::Bernoulli] {
            let f = f_sin2(x, m).unwrap();
            assert!((f.value - v).abs() < 1e-13, "{m:?} f({x}) = {}", f.value);
        }
    }
    assert_eq!(f_sin2(0.0, FMethod::Lattice).unwrap().value, 0.0);
}

#[test]
fn lattice_function_derivative_matches_difference_quotient() {
    for &x in &[0.5, 2.0, 7.0, 20.0] {
        let h = 1e-5;
        let d = (f_sin2(x + h, FMethod::Lattice).unwrap().value
            - f_sin2(x - h, FMethod::Lattice).unwrap().value)
            / (2.0 * h);
        assert!((f_sin2_deriv(x).unwrap().value - d).abs() < 1e-6, "x={x}");
    }
}

#[test]
fn identity_of_the_two_lattice_routes() {
    for &x in &[0.5, 1.0, 2.0, 5.0, 10.0] {
        let a = f_sin2(x, FMethod::Lattice).unwrap();
        let b = f_sin2(x, FMethod::Bernoulli).unwrap();
        assert!((a.value - b.value).abs() <= 1e-8, "x={x}");
    }
    assert!(f_sin2(BERNOULLI_X_MAX * 2.0, FMethod::Bernoulli).is_err());
}

#[test]
fn one_term_bracket_contains_c() {
    for p in 2..=4 {
        for &x in &[0.5f64, 1.0, 3.0] {
            let m = FunctionModel::Monomial {
                coeff: 1.0,
                power: p,
            };
            let exact = x.powi(p as i32) * zeta_minus_pole(p as f64).unwrap();
            let (lo, hi) = lemma2_estimate(&m, x).unwrap();
            assert!(
                lo <= exact && exact <= hi,
                "u^{p} at {x}: [{lo}, {hi}] vs {exact}"
            );
        }
    }
    let (lo, hi) = lemma2_estimate(
        &FunctionModel::Monomial {
            coeff: 3.0,
            power: 0,
        },
        2.0,
    )
    .unwrap();
    assert_eq!(lo, hi);
    assert!(matches!(
        lemma2_estimate(&FunctionModel::Sin2 { a: 1.0 }, 1.0),
        Err(Error::SignCondition { .. })
    ));
}

#[test]
fn factorial_series_coefficients() {
    let c = cf_coeffs(2).unwrap();
    assert_eq!(c.c, vec![1.0, -1.0, -0.25]);
    assert!(c.provenance.iter().all(|p| *p == Provenance::Fixed));
    let c = cf_coeffs(6).unwrap();
    assert_eq!(&c.c[..3], &[1.0, -1.0, -0.25]);
    assert!(c.provenance[3..].iter().all(|p| *p == Provenance::Fitted));
    assert!(c.condition < CF_CONDITION_LIMIT);
    // Zero order leaves the constant term alone.
    assert_eq!(cf_coeffs(0).unwrap().eval(5.0), 1.0);
    assert!(cf_coeffs(CF_MAX_ORDER + 1).is_err());
}

#[test]
fn factorial_series_at_held_out_points() {
    let c = cf_coeffs(6).unwrap();
    let last = c.c[6].abs();
    for &s in &[2.5, 3.5, 4.5, 5.5, 6.5, 7.5] {
        let r = (c.eval(s) - zeta_minus_pole(s).unwrap()).abs();
        let next: f64 = (1..=7).map(|j| s + j as f64).product();
        assert!(r < last / next, "s={s}: {r}");
    }
}

#[test]
fn second_order_expansion_of_sin2() {
    // int_0^2 sin^2 = 1 - sin 4/4; int_0^2 int_0^w sin^2 = 1 + (cos 4 - 1)/8.
    let x = 2.0f64;
    let one = 1.0 - (4.0f64).sin() / 4.0;
    let two = 1.0 + ((4.0f64).cos() - 1.0) / 8.0;
    let expected = x.sin().powi(2) - one / x - 0.25 * two / (x * x);
    let v = cf_expansion_eval(&FunctionModel::Sin2 { a: 1.0 }, x, 2).unwrap();
    assert!(
        (v.value - expected).abs() < 1e-10,
        "{} vs {expected}",
        v.value
    );
    assert_eq!(
        cf_expansion_eval(&FunctionModel::Zero, x, 2).unwrap().value,
        0.0
    );
}

#[test]
fn zeta_tails() {
    let direct = |s: i32, x: u64| {
        (x + 1..2_000_000)
            .rev()
            .map(|k| (k as f64).powi(-s))
            .sum::<f64>()
            + 1.0 / ((s - 1) as f64 * 2e6f64.powi(s - 1))
    };
    let t = zeta_tail(2.0, 10).unwrap();
    assert!((t.value - direct(2, 10)).abs() < 1e-6);
    let t = zeta_tail(4.0, 20).unwrap();
    assert!((t.value - direct(4, 20)).abs() < 1e-9);
    assert!((zeta_tail_direct(2.0, 10).unwrap().value - direct(2, 10)).abs() < 1e-12);
    for x in [10, 20, 40] {
        let v = zeta_tail_eq43(1, x).unwrap().value;
        assert!(
            (v - direct(2, x) - 1.0 / x as f64).abs() < 1e-3 / x as f64,
            "x={x}"
        );
    }
    assert!(zeta_tail(1.0, 10).is_err());
}

#[test]
fn tail_error_shrinks_at_its_order() {
    let direct = |x: u64| zeta_tail_direct(2.0, x).unwrap().value;
    let r = |x| (zeta_tail(2.0, x).unwrap().value - direct(x)).abs();
    // Error term ~ x^{-5}: ratio 1/32 within a factor 4.
    let q = r(20) / r(10);
    assert!(q > 1.0 / 128.0 && q < 1.0 / 8.0, "{q}");
}

#[test]
fn harmonic_numbers() {
    let h = harmonic_asymptotic(10).unwrap();
    assert!((h.value - 7381.0 / 2520.0).abs() < 1e-6);
    let h100: f64 = (1..=100).rev().map(|k| 1.0 / k as f64).sum();
    let a = harmonic_asymptotic(100).unwrap();
    assert!((a.value - h100).abs() <= a.est_error);
    assert!(a.est_error < 1e-10);
}

#[test]
fn expansion_residuals() {
    let lin = generalized_expansion_check(
        &FunctionModel::Monomial {
            coeff: 1.0,
            power: 1,
        },
        100,
    )
    .unwrap();
    assert!(lin < 1e-8, "{lin}");
    let m = FunctionModel::Sin2 { a: 0.25 };
    let r4 = generalized_expansion_check(&m, 4).unwrap();
    let r8 = generalized_expansion_check(&m, 8).unwrap();
    assert!(r8 / r4 <= 0.5);
    assert!(r8 / r4 >= 1.0 / 128.0);
    assert_eq!(
        generalized_expansion_check(&FunctionModel::Zero, 7).unwrap(),
        0.0
    );
}

#[test]
fn reference_integrals_have_closed_forms() {
    let cfg = EvalConfig::default();
    let half_pi = std::f64::consts::FRAC_PI_2;
    // int_1^inf sin^2 u/u^2 du = sin^2 1 + pi/2 - Si(2) and int_1^inf sin u/u du = pi/2 - Si(1).
    let sin2 = 1f64.sin().powi(2) + half_pi - si(2.0, &cfg).unwrap().value;
    let sinc = half_pi - si(1.0, &cfg).unwrap().value;
    let r = reference_integrals().unwrap();
    assert!((r.sin2.0 - sin2).abs() < 1e-10);
    assert!((r.sinc.0 - sinc).abs() < 1e-10);
    assert!((r.sin2.0 - r.sin2.1).abs() < REFERENCE_AGREEMENT);
}

#[test]
fn riemann_sum_errors() {
    let cfg = EvalConfig::default();
    let sinc = std::f64::consts::FRAC_PI_2 - si(1.0, &cfg).unwrap().value;
    for &x in &[50.0f64, 100.0, 200.0, 400.0] {
        assert!(e1(x).unwrap().abs() < 2.0 / x, "E1({x})");
        let n = (2.0 * x) as u64;
        let s: f64 = (1..=n)
            .map(|k| 2.0 * x / k as f64)
            .map(|u| u * u.sin())
            .sum();
        assert!(
            (e2(x).unwrap() - (s / (2.0 * x) - sinc)).abs() < 1e-9,
            "E2({x})"
        );
    }
    assert!(e1(0.5).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lattice_routes_agree(x in 0.01f64..10.0) {
        let a = f_sin2(x, FMethod::Lattice).unwrap();
        let b = f_sin2(x, FMethod::Bernoulli).unwrap();
        prop_assert!((a.value - b.value).abs() <= 1e-8);
    }

    #[test]
    fn c_of_monomials(p in 2u32..12, coeff in -5.0f64..5.0) {
        let c = c_constant(&FunctionModel::Monomial { coeff, power: p }).unwrap();
        prop_assert!((c.value - coeff * zeta_minus_pole(p as f64).unwrap()).abs() <= 1e-14 * (1.0 + coeff.abs()));
    }

    #[test]
    fn c_of_constant_is_the_constant(v in -10.0f64..10.0) {
        let c = c_constant(&FunctionModel::Monomial { coeff: v, power: 0 }).unwrap();
        prop_assert_eq!(c.value, v);
    }

    #[test]
    fn c_sin2_closed_and_zeta_series_agree(y in 0.05f64..2.0) {
        let a = c_sin2_closed(y).unwrap();
        let b = c_sin2_zeta(y).unwrap();
        prop_assert!((a.value - b.value).abs() <= a.est_error + b.est_error + 1e-13);
    }

    #[test]
    fn scaling_matches_direct_evaluation(a in 0.1f64..3.0, x in 0.1f64..3.0, u in 0.0f64..1.0) {
        let m = FunctionModel::Sin2 { a };
        prop_assert!((m.scaled(x).value(u) - m.value(x * u)).abs() < 1e-14);
    }
}
