//! The Kelvin function `ber` and its derivative.

use core::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::{Method, SpecialValue};
use crate::sum::Accumulator;
use crate::{Error, EvalConfig, Result};

pub const KELVIN_SWITCH: f64 = 18.0;

/// Relative agreement demanded of the two series paths.
const DUAL_REL_TOL: f64 = 1e-9;

pub fn ber(u: f64, cfg: &EvalConfig) -> Result<SpecialValue> {
    check(u)?;
    // sum (-1)^k (u/2)^{4k} / ((2k)!)^2
    let q = (0.5 * u).powi(4);
    let mut t = 1.0;
    let mut acc = Accumulator::new();
    let mut k = 0usize;
    while k < cfg.max_terms {
        acc.add(if k % 2 == 0 { t } else { -t });
        let m = (2 * k + 1) as f64 * (2 * k + 2) as f64;
        t *= q / (m * m);
        k += 1;
        if t <= 1e-18 * acc.value().abs().max(1e-300) {
            break;
        }
    }
    let v = acc.value();
    Ok(SpecialValue::new(
        v,
        t + 2.0 * acc.rounding() + 2.0 * f64::EPSILON * acc.abs_total(),
        Method::PowerSeries,
    ))
}

fn check(u: f64) -> Result<()> {
    if u >= 0.0 && u.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "ber_deriv",
            value: u,
            reason: "argument must be finite and nonnegative",
        })
    }
}

/// Termwise derivative of the `ber` series.
fn deriv_series(u: f64, max_terms: usize) -> (f64, f64) {
    // sum_{k>=1} (-1)^k 2k (u/2)^{4k-1} / ((2k)!)^2
    let h = 0.5 * u;
    let q = h.powi(4);
    // p_k = (u/2)^{4k-1} / ((2k)!)^2, starting at k = 1.
    let mut p = h.powi(3) / 4.0;
    let mut acc = Accumulator::new();
    let mut k = 1usize;
    let mut last = 0.0;
    while k < max_terms {
        let term = 2.0 * k as f64 * p;
        acc.add(if k % 2 == 0 { term } else { -term });
        let m = (2 * k + 1) as f64 * (2 * k + 2) as f64;
        p *= q / (m * m);
        last = 2.0 * (k + 1) as f64 * p;
        k += 1;
        if last <= 1e-18 * acc.value().abs().max(1e-300) {
            break;
        }
    }
    (acc.value(), last + 2.0 * f64::EPSILON * acc.abs_total())
}

/// Phase factors `cos((2k+3) pi/4)` and `sin((2k+3) pi/4)` as exact signs of
/// `1/sqrt 2`.
fn phase(k: usize) -> (f64, f64) {
    match (2 * k + 3) % 8 {
        1 => (1.0, 1.0),
        3 => (-1.0, 1.0),
        5 => (-1.0, -1.0),
        _ => (1.0, -1.0),
    }
}

/// `(ber_1(u) + bei_1(u)) / sqrt 2` from the order-one Kelvin series.
fn deriv_order_one(u: f64, max_terms: usize) -> (f64, f64) {
    let h = 0.5 * u;
    let q = h * h;
    // r_k = (u/2) (u^2/4)^k / (k! (k+1)!)
    let mut r = h;
    let mut ber1 = Accumulator::new();
    let mut bei1 = Accumulator::new();
    let mut k = 0usize;
    while k < max_terms {
        let (c, s) = phase(k);
        ber1.add(c * FRAC_1_SQRT_2 * r);
        bei1.add(s * FRAC_1_SQRT_2 * r);
        r *= q / ((k + 1) as f64 * (k + 2) as f64);
        k += 1;
        if k as f64 > h && r <= 1e-18 * (ber1.value().abs() + bei1.value().abs()).max(1e-300) {
            break;
        }
    }
    let v = (ber1.value() + bei1.value()) / SQRT_2;
    let err = r + 2.0 * f64::EPSILON * (ber1.abs_total() + bei1.abs_total());
    (v, err)
}

/// Large-argument form `Re(e^{i pi/4} I_1(u e^{i pi/4}))`, including the
/// exponentially small `e^{-z}` companion.
fn deriv_asymptotic(u: f64, max_terms: usize) -> (f64, f64) {
    let w = Complex64::from_polar(1.0, PI / 4.0);
    let z = w * u;
    let pref = (2.0 * PI * z).sqrt().inv();
    let mut dom = Complex64::new(1.0, 0.0);
    let mut sub = Complex64::new(1.0, 0.0);
    let mut a = Complex64::new(1.0, 0.0);
    let mut prev = f64::INFINITY;
    let mut omitted = 0.0;
    for k in 1..max_terms.max(2) {
        let odd = (2 * k - 1) as f64;
        a = a * (4.0 - odd * odd) / (k as f64 * 8.0) / z;
        let mag = a.norm();
        if mag >= prev {
            omitted = mag;
            break;
        }
        dom += if k % 2 == 0 { a } else { -a };
        sub += a;
        prev = mag;
        omitted = mag;
        if mag < 1e-18 {
            break;
        }
    }
    let ez = z.exp();
    let i1 = pref * (ez * dom - Complex64::i() * ez.inv() * sub);
    let v = (w * i1).re;
    let scale = (pref * ez).norm();
    (v, scale * omitted + 8.0 * f64::EPSILON * scale)
}

/// Both series evaluations of `ber'(u)`: the termwise derivative and the
/// order-one Kelvin combination.
pub fn ber_deriv_dual(u: f64, cfg: &EvalConfig) -> Result<(SpecialValue, SpecialValue)> {
    check(u)?;
    let (a, ea) = deriv_series(u, cfg.max_terms);
    let (b, eb) = deriv_order_one(u, cfg.max_terms);
    Ok((
        SpecialValue::new(a, ea, Method::PowerSeries),
        SpecialValue::new(b, eb, Method::PowerSeries),
    ))
}

/// `ber'(u)` with its error estimate, without tolerance checks: the series
/// below the switch, the asymptotic form above it. Used inside integrands
/// where relative accuracy near zeros of `ber'` is irrelevant.
pub(crate) fn ber_deriv_raw(u: f64, max_terms: usize) -> (f64, f64) {
    if u < KELVIN_SWITCH {
        deriv_series(u, max_terms)
    } else {
        deriv_asymptotic(u, max_terms)
    }
}

/// `d/du ber(u)`.
pub fn ber_deriv(u: f64, cfg: &EvalConfig) -> Result<SpecialValue> {
    check(u)?;
    if u == 0.0 {
        return Ok(SpecialValue::new(0.0, 0.0, Method::PowerSeries));
    }
    let (v, e, m) = if u < cfg.switch_or(KELVIN_SWITCH) {
        let (a, b) = ber_deriv_dual(u, cfg)?;
        let gap = (a.value - b.value).abs();
        if gap > DUAL_REL_TOL * a.value.abs().max(1.0) {
            return Err(Error::Inconsistent {
                what: "ber_deriv",
                a: a.value,
                b: b.value,
                tol: DUAL_REL_TOL * a.value.abs().max(1.0),
            });
        }
        (a.value, a.est_error.max(gap), Method::PowerSeries)
    } else {
        let (v, e) = deriv_asymptotic(u, cfg.max_terms);
        (v, e, Method::Asymptotic)
    };
    if cfg.accepts(v, e) {
        Ok(SpecialValue::new(v, e, m))
    } else {
        Err(Error::ToleranceNotMet {
            what: "ber_deriv",
            best: v,
            est_error: e,
        })
    }
}
