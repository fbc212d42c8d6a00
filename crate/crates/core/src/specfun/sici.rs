//! Sine and cosine integrals.
//!
//! Three regimes: power series up to the switch (8 by default), the
//! continued fraction for `E_1(ix)` up to 40, and the divergent asymptotic
//! expansion beyond, truncated at its smallest term. At 8 the asymptotic
//! series cannot get below about 1e-3, so the middle regime is needed.

use core::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::{Method, SpecialValue, EULER_GAMMA};
use crate::sum::Accumulator;
use crate::{Error, EvalConfig, Result};

pub const SICI_SWITCH: f64 = 8.0;
pub const SICI_ASYMPTOTIC_FROM: f64 = 40.0;

#[derive(Clone, Copy)]
struct Pair {
    si: f64,
    ci: f64,
    si_err: f64,
    ci_err: f64,
    method: Method,
}

fn series(x: f64, max_terms: usize) -> Pair {
    let mut si = Accumulator::new();
    let mut ci = Accumulator::new();
    // t = x^m / m!; odd m feed Si, even m feed Ci.
    let mut t = x;
    let mut m = 1usize;
    while m < max_terms {
        let term = t / m as f64;
        if m % 2 == 1 {
            si.add(if (m / 2) % 2 == 0 { term } else { -term });
        } else {
            ci.add(if (m / 2) % 2 == 0 { term } else { -term });
        }
        t *= x / (m + 1) as f64;
        m += 1;
        if m as f64 > x && (t == 0.0 || t <= 1e-17 * si.value().abs().min(1.0)) {
            break;
        }
    }
    let lnx = x.ln();
    Pair {
        si: si.value(),
        ci: EULER_GAMMA + lnx + ci.value(),
        si_err: t + 2.0 * f64::EPSILON * si.abs_total(),
        ci_err: t + 2.0 * f64::EPSILON * (ci.abs_total() + lnx.abs() + EULER_GAMMA),
        method: Method::PowerSeries,
    }
}

fn continued_fraction(x: f64, max_terms: usize) -> Result<Pair> {
    const TINY: f64 = 1e-300;
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = b.inv();
    let mut h = d;
    let mut converged = false;
    for i in 2..max_terms.max(3) {
        let a = -(((i - 1) * (i - 1)) as f64);
        b += Complex64::new(2.0, 0.0);
        d = (d * a + b).inv();
        c = b + c.inv() * a;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::BudgetExceeded {
            what: "sici continued fraction",
            budget: max_terms,
        });
    }
    let (s, co) = x.sin_cos();
    h *= Complex64::new(co, -s);
    let si = FRAC_PI_2 + h.im;
    let ci = -h.re;
    let e = 32.0 * f64::EPSILON * (h.norm() + 1.0);
    Ok(Pair {
        si,
        ci,
        si_err: e,
        ci_err: e,
        method: Method::ContinuedFraction,
    })
}

fn asymptotic(x: f64, max_terms: usize) -> Pair {
    // u_m = m!/x^m; even m build f(x), odd m build g(x), each times 1/x.
    let mut f = 0.0;
    let mut g = 0.0;
    let mut u = 1.0;
    let mut m = 0usize;
    while m < max_terms {
        let sign = if (m / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if m % 2 == 0 {
            f += sign * u;
        } else {
            g += sign * u;
        }
        let next = u * (m + 1) as f64 / x;
        m += 1;
        if next >= u {
            u = next;
            break;
        }
        u = next;
        if u < 1e-18 {
            break;
        }
    }
    let f = f / x;
    let g = g / x;
    let (s, c) = x.sin_cos();
    let e = u / x + 4.0 * f64::EPSILON * (f.abs() + g.abs());
    Pair {
        si: FRAC_PI_2 - f * c - g * s,
        ci: f * s - g * c,
        si_err: e + f64::EPSILON,
        ci_err: e,
        method: Method::Asymptotic,
    }
}

fn pair(x: f64, cfg: &EvalConfig) -> Result<Pair> {
    if x < cfg.switch_or(SICI_SWITCH) {
        Ok(series(x, cfg.max_terms))
    } else if x < SICI_ASYMPTOTIC_FROM {
        continued_fraction(x, cfg.max_terms)
    } else {
        Ok(asymptotic(x, cfg.max_terms))
    }
}

fn finish(what: &'static str, v: f64, e: f64, m: Method, cfg: &EvalConfig) -> Result<SpecialValue> {
    if cfg.accepts(v, e) {
        Ok(SpecialValue::new(v, e, m))
    } else {
        Err(Error::ToleranceNotMet {
            what,
            best: v,
            est_error: e,
        })
    }
}

/// `Si(x) = int_0^x sin t / t dt`.
pub fn si(x: f64, cfg: &EvalConfig) -> Result<SpecialValue> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            what: "si",
            value: x,
            reason: "argument must be finite and nonnegative",
        });
    }
    if x == 0.0 {
        return Ok(SpecialValue::new(0.0, 0.0, Method::PowerSeries));
    }
    let p = pair(x, cfg)?;
    finish("si", p.si, p.si_err, p.method, cfg)
}

/// `Ci(x) = -int_x^inf cos t / t dt`.
pub fn ci(x: f64, cfg: &EvalConfig) -> Result<SpecialValue> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            what: "ci",
            value: x,
            reason: "argument must be finite and positive",
        });
    }
    let p = pair(x, cfg)?;
    finish("ci", p.ci, p.ci_err, p.method, cfg)
}
