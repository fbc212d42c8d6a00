//! Summation constants `c(f) = lim (sum_{k<=M} f(1/k) - int_1^M f(1/t) dt)`,
//! the lattice function `f(Y) = sum_a sin^2(Y/a)`, and related tails.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_bigint::BigInt;
use num_rational::BigRational;
#[allow(unused_imports)]
use num_traits::{Float, One, ToPrimitive, Zero};
use once_cell::race::OnceBox;

use crate::quad::{
    integrate_with, iterated_integral, iterated_integral_fn, paired_tail, QuadOptions,
};
use crate::specfun::{bernoulli, ci, si, zeta_minus_pole, EULER_GAMMA, MAX_BERNOULLI_INDEX};
use crate::sum::{Accumulator, DoubleDouble as DD};
use crate::{Error, EvalConfig, Result, SeriesValue};

/// A function given in closed form together with its Taylor coefficients at
/// zero. The coefficient of `u^s` is `prefactor * a^s * q_s` with `q_s`
/// rational.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FunctionModel {
    Zero,
    /// `coeff * u^power`.
    Monomial {
        coeff: f64,
        power: u32,
    },
    /// `sin(a u)`.
    Sin {
        a: f64,
    },
    /// `sin^2(a u)`.
    Sin2 {
        a: f64,
    },
    /// `a u sin(a u)`.
    XSin {
        a: f64,
    },
    /// Even-`k` half of `sin^2`: `(cosh v - cos v)/4`, `v = 2 a u`. All
    /// Taylor coefficients are nonnegative.
    Sin2Plus {
        a: f64,
    },
    /// `-(cosh v + cos v - 2)/4`, `v = 2 a u`; nonpositive coefficients.
    Sin2Minus {
        a: f64,
    },
    /// `(sin v + sinh v)/2`, `v = a u`.
    SinPlus {
        a: f64,
    },
    /// `(sin v - sinh v)/2`, `v = a u`.
    SinMinus {
        a: f64,
    },
}

/// Shape of a Taylor coefficient: `sign * mult * base^s / fact!`.
struct Coef {
    sign: f64,
    base: f64,
    fact: u32,
    mult: f64,
}

impl FunctionModel {
    pub fn name(&self) -> &'static str {
        match self {
            FunctionModel::Zero => "zero",
            FunctionModel::Monomial { .. } => "monomial",
            FunctionModel::Sin { .. } => "sin",
            FunctionModel::Sin2 { .. } => "sin2",
            FunctionModel::XSin { .. } => "xsin",
            FunctionModel::Sin2Plus { .. } => "sin2_plus",
            FunctionModel::Sin2Minus { .. } => "sin2_minus",
            FunctionModel::SinPlus { .. } => "sin_plus",
            FunctionModel::SinMinus { .. } => "sin_minus",
        }
    }

    /// The scale `a` (1 for monomials and zero).
    pub fn param(&self) -> f64 {
        match *self {
            FunctionModel::Zero | FunctionModel::Monomial { .. } => 1.0,
            FunctionModel::Sin { a }
            | FunctionModel::Sin2 { a }
            | FunctionModel::XSin { a }
            | FunctionModel::Sin2Plus { a }
            | FunctionModel::Sin2Minus { a }
            | FunctionModel::SinPlus { a }
            | FunctionModel::SinMinus { a } => a,
        }
    }

    pub fn prefactor(&self) -> f64 {
        match *self {
            FunctionModel::Monomial { coeff, .. } => coeff,
            _ => 1.0,
        }
    }

    /// Degree when the model is a polynomial.
    pub fn degree(&self) -> Option<u32> {
        match *self {
            FunctionModel::Zero => Some(0),
            FunctionModel::Monomial { power, .. } => Some(power),
            _ => None,
        }
    }

    pub fn value(&self, u: f64) -> f64 {
        match *self {
            FunctionModel::Zero => 0.0,
            FunctionModel::Monomial { coeff, power } => coeff * u.powi(power as i32),
            FunctionModel::Sin { a } => (a * u).sin(),
            FunctionModel::Sin2 { a } => {
                let s = (a * u).sin();
                s * s
            }
            FunctionModel::XSin { a } => a * u * (a * u).sin(),
            FunctionModel::Sin2Plus { a } => {
                let v = 2.0 * a * u;
                0.25 * (v.cosh() - v.cos())
            }
            FunctionModel::Sin2Minus { a } => {
                let v = 2.0 * a * u;
                // cosh v - 1 and 1 - cos v without cancellation near 0
                let h = (0.5 * v).sinh();
                let s = (0.5 * v).sin();
                -0.25 * (2.0 * h * h - 2.0 * s * s)
            }
            FunctionModel::SinPlus { a } => {
                let v = a * u;
                0.5 * (v.sin() + v.sinh())
            }
            FunctionModel::SinMinus { a } => {
                let v = a * u;
                0.5 * (v.sin() - v.sinh())
            }
        }
    }

    pub fn deriv(&self, u: f64) -> f64 {
        match *self {
            FunctionModel::Zero => 0.0,
            FunctionModel::Monomial { coeff, power } => {
                if power == 0 {
                    0.0
                } else {
                    coeff * power as f64 * u.powi(power as i32 - 1)
                }
            }
            FunctionModel::Sin { a } => a * (a * u).cos(),
            FunctionModel::Sin2 { a } => a * (2.0 * a * u).sin(),
            FunctionModel::XSin { a } => a * (a * u).sin() + a * a * u * (a * u).cos(),
            FunctionModel::Sin2Plus { a } => {
                let v = 2.0 * a * u;
                0.5 * a * (v.sinh() + v.sin())
            }
            FunctionModel::Sin2Minus { a } => {
                let v = 2.0 * a * u;
                -0.5 * a * (v.sinh() - v.sin())
            }
            FunctionModel::SinPlus { a } => {
                let v = a * u;
                0.5 * a * (v.cos() + v.cosh())
            }
            FunctionModel::SinMinus { a } => {
                let v = a * u;
                0.5 * a * (v.cos() - v.cosh())
            }
        }
    }

    fn coef(&self, s: u32) -> Option<Coef> {
        let alt = |k: u32| if k % 2 == 0 { 1.0 } else { -1.0 };
        match *self {
            FunctionModel::Zero => None,
            FunctionModel::Monomial { coeff, power } => (s == power).then_some(Coef {
                sign: 1.0,
                base: 1.0,
                fact: 0,
                mult: coeff,
            }),
            FunctionModel::Sin { a } => (s % 2 == 1).then(|| Coef {
                sign: alt((s - 1) / 2),
                base: a,
                fact: s,
                mult: 1.0,
            }),
            FunctionModel::Sin2 { a } => (s >= 2 && s % 2 == 0).then(|| Coef {
                sign: alt(s / 2 + 1),
                base: 2.0 * a,
                fact: s,
                mult: 0.5,
            }),
            FunctionModel::XSin { a } => (s >= 2 && s % 2 == 0).then(|| Coef {
                sign: alt((s - 2) / 2),
                base: a,
                fact: s - 1,
                mult: 1.0,
            }),
            FunctionModel::Sin2Plus { a } => (s % 4 == 2).then_some(Coef {
                sign: 1.0,
                base: 2.0 * a,
                fact: s,
                mult: 0.5,
            }),
            FunctionModel::Sin2Minus { a } => (s >= 4 && s % 4 == 0).then_some(Coef {
                sign: -1.0,
                base: 2.0 * a,
                fact: s,
                mult: 0.5,
            }),
            FunctionModel::SinPlus { a } => (s % 4 == 1).then_some(Coef {
                sign: 1.0,
                base: a,
                fact: s,
                mult: 1.0,
            }),
            FunctionModel::SinMinus { a } => (s % 4 == 3).then_some(Coef {
                sign: -1.0,
                base: a,
                fact: s,
                mult: 1.0,
            }),
        }
    }

    /// `f^{(s)}(0) / s!`.
    pub fn taylor(&self, s: u32) -> f64 {
        let Some(c) = self.coef(s) else {
            return 0.0;
        };
        // base^s / fact! as a running product, then the leftover powers.
        let mut v = c.sign * c.mult;
        for k in 1..=c.fact {
            v *= c.base / k as f64;
        }
        v * c.base.powi((s - c.fact) as i32)
    }

    /// The rational part `q_s` of the coefficient `prefactor * a^s * q_s`.
    pub fn taylor_rational(&self, s: u32) -> BigRational {
        let Some(c) = self.coef(s) else {
            return BigRational::zero();
        };
        let fact: BigInt = (1..=c.fact).fold(BigInt::one(), |p, k| p * BigInt::from(k));
        // base is a multiple of a: 2a for the sin^2 family.
        let two_pow = if (c.base - 2.0 * self.param()).abs() == 0.0 && self.param() != 0.0 {
            BigInt::from(2).pow(s)
        } else {
            BigInt::one()
        };
        let mult = if c.mult == 0.5 {
            BigRational::new(BigInt::one(), BigInt::from(2))
        } else {
            BigRational::one()
        };
        let sign = if c.sign < 0.0 {
            -BigRational::one()
        } else {
            BigRational::one()
        };
        sign * mult * BigRational::new(two_pow, fact)
    }

    /// Sign of `f^{(s)}(0)`: -1, 0 or 1.
    pub fn derivative_sign(&self, s: u32) -> i8 {
        let t = self.taylor(s);
        if t > 0.0 {
            1
        } else if t < 0.0 {
            -1
        } else {
            0
        }
    }

    /// The common sign of `f^{(s)}(0)` for `s` in `from..=to`, ignoring zero
    /// coefficients. `None` when two signs occur.
    pub fn common_sign(&self, from: u32, to: u32) -> Option<i8> {
        let mut seen = 0i8;
        for s in from..=to {
            match (seen, self.derivative_sign(s)) {
                (_, 0) => {}
                (0, d) => seen = d,
                (p, d) if p != d => return None,
                _ => {}
            }
        }
        Some(seen)
    }

    /// The model of `u -> f(x u)`.
    pub fn scaled(&self, x: f64) -> FunctionModel {
        match *self {
            FunctionModel::Zero => FunctionModel::Zero,
            FunctionModel::Monomial { coeff, power } => FunctionModel::Monomial {
                coeff: coeff * x.powi(power as i32),
                power,
            },
            FunctionModel::Sin { a } => FunctionModel::Sin { a: a * x },
            FunctionModel::Sin2 { a } => FunctionModel::Sin2 { a: a * x },
            FunctionModel::XSin { a } => FunctionModel::XSin { a: a * x },
            FunctionModel::Sin2Plus { a } => FunctionModel::Sin2Plus { a: a * x },
            FunctionModel::Sin2Minus { a } => FunctionModel::Sin2Minus { a: a * x },
            FunctionModel::SinPlus { a } => FunctionModel::SinPlus { a: a * x },
            FunctionModel::SinMinus { a } => FunctionModel::SinMinus { a: a * x },
        }
    }

    /// `int_0^1 f(1/t) dt` in closed form, with an error estimate. Fails for
    /// models whose integral diverges.
    pub fn lower_integral(&self) -> Result<(f64, f64)> {
        let cfg = EvalConfig::default();
        let diverges = || Error::Domain {
            what: "lower_integral",
            value: self.param(),
            reason: "int_0^1 f(1/t) dt diverges for this model",
        };
        match *self {
            FunctionModel::Zero => Ok((0.0, 0.0)),
            FunctionModel::Monomial { coeff, power: 0 } => Ok((coeff, 0.0)),
            FunctionModel::Monomial { .. } => Err(diverges()),
            FunctionModel::Sin { a } => {
                if a == 0.0 {
                    return Ok((0.0, 0.0));
                }
                let b = a.abs();
                let c = ci(b, &cfg)?;
                let v = b.sin() - b * c.value;
                Ok((
                    a.signum() * v,
                    b * c.est_error + 4.0 * f64::EPSILON * (1.0 + (b * c.value).abs()),
                ))
            }
            FunctionModel::Sin2 { a } => {
                if a == 0.0 {
                    return Ok((0.0, 0.0));
                }
                let b = a.abs();
                let s = si(2.0 * b, &cfg)?;
                let sb = b.sin();
                let v = sb * sb + b * (FRAC_PI_2 - s.value);
                Ok((
                    v,
                    b * s.est_error + 4.0 * f64::EPSILON * (1.0 + b * FRAC_PI_2),
                ))
            }
            FunctionModel::XSin { a } => {
                if a == 0.0 {
                    return Ok((0.0, 0.0));
                }
                let b = a.abs();
                let s = si(b, &cfg)?;
                Ok((
                    b * (FRAC_PI_2 - s.value),
                    b * s.est_error + 4.0 * f64::EPSILON * b * FRAC_PI_2,
                ))
            }
            _ => Err(diverges()),
        }
    }
}

/// Largest Taylor index summed by the zeta series.
const ZETA_SERIES_MAX_S: u32 = 600;

/// Intermediate terms above this multiple of the result trigger a
/// cancellation error.
pub const CANCELLATION_RATIO: f64 = 1e8;

/// `sum_{s >= 2} t_s (zeta(s) - 1/(s-1))` with `t_s = taylor(s)`.
fn zeta_series(
    model: &FunctionModel,
    what: &'static str,
) -> Result<(Accumulator, f64, f64, usize)> {
    let mut acc = Accumulator::new();
    let mut max_term: f64 = 0.0;
    let mut last = 0.0;
    let mut used = 0;
    let limit = match model.degree() {
        Some(p) => p.max(1),
        None => ZETA_SERIES_MAX_S,
    };
    let base = 2.0 * model.param().abs() + 2.0;
    let mut s = 2;
    while s <= limit {
        let t = model.taylor(s);
        if t != 0.0 {
            let term = t * zeta_minus_pole(s as f64)?;
            acc.add(term);
            max_term = max_term.max(term.abs());
            last = term.abs();
            used += 1;
            if model.degree().is_none()
                && s as f64 > base
                && last <= 1e-17 * acc.value().abs().max(1e-300)
            {
                break;
            }
        }
        s += 1;
    }
    if s > limit && model.degree().is_none() {
        return Err(Error::BudgetExceeded {
            what,
            budget: ZETA_SERIES_MAX_S as usize,
        });
    }
    Ok((acc, max_term, last, used))
}

/// `c(f) = f(0) + f'(0) gamma + sum_{s>=2} f^{(s)}(0)/s! (zeta(s) - 1/(s-1))`.
pub fn c_constant(model: &FunctionModel) -> Result<SeriesValue> {
    let (mut acc, mut max_term, last, used) = zeta_series(model, "c_constant")?;
    let g0 = model.taylor(0);
    let g1 = model.taylor(1) * EULER_GAMMA;
    acc.add(g0);
    acc.add(g1);
    max_term = max_term.max(g0.abs()).max(g1.abs());
    let v = acc.value();
    if max_term > CANCELLATION_RATIO * v.abs() && max_term > 0.0 {
        return Err(Error::Cancellation {
            what: "c_constant",
            max_term,
            result: v,
        });
    }
    let est = 2.0 * last + 4.0 * f64::EPSILON * acc.abs_total();
    Ok(SeriesValue::new(v, est, used + 2, "zeta_series"))
}

/// Lower limit of the integral in [`limit_diff`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntegralFrom {
    Zero,
    One,
}

/// `int_a^b g` split at powers of two.
fn geometric_integral<G: FnMut(f64) -> f64>(mut g: G, a: f64, b: f64) -> Result<(f64, f64)> {
    let mut acc = Accumulator::new();
    let mut err = 0.0;
    let mut lo = a;
    while lo < b {
        let hi = (2.0 * lo).min(b);
        let r = integrate_with(&mut g, lo, hi, QuadOptions::best_effort(1e-17, 1e-15))?;
        acc.add(r.value);
        err += r.est_error;
        lo = hi;
    }
    Ok((acc.value(), err + acc.rounding()))
}

/// `sum_{k<=M} f(1/k) - int_a^M f(1/t) dt`. The error estimate is twice the
/// change from `M/2` to `M`, plus quadrature errors.
pub fn limit_diff(model: &FunctionModel, m: usize, from: IntegralFrom) -> Result<SeriesValue> {
    if m < 10 {
        return Err(Error::Domain {
            what: "limit_diff",
            value: m as f64,
            reason: "M must be at least 10",
        });
    }
    if matches!(model, FunctionModel::Zero) {
        return Ok(SeriesValue::new(0.0, 0.0, m, "limit_difference"));
    }
    let half = m / 2;
    let mut sum = Accumulator::new();
    let mut sum_half = 0.0;
    for k in 1..=m {
        sum.add(model.value(1.0 / k as f64));
        if k == half {
            sum_half = sum.value();
        }
    }
    let g = |t: f64| model.value(1.0 / t);
    let (i_half, e_half) = geometric_integral(g, 1.0, half as f64)?;
    let (i_rest, e_rest) = geometric_integral(g, half as f64, m as f64)?;
    let (lower, e_lower) = match from {
        IntegralFrom::One => (0.0, 0.0),
        IntegralFrom::Zero => model.lower_integral()?,
    };
    let d_half = sum_half - i_half - lower;
    let d = sum.value() - (i_half + i_rest) - lower;
    let est = 2.0 * (d - d_half).abs()
        + e_half
        + e_rest
        + e_lower
        + sum.rounding()
        + f64::EPSILON * sum.abs_total();
    Ok(SeriesValue::new(d, est, m, "limit_difference"))
}

/// Highest Taylor index inspected by the sign condition.
const SIGN_CHECK_TO: u32 = 80;

/// Interval for `c(f, x)` (the constant of `u -> f(x u)`) from the
/// same-sign bound `1/(s+1) <= 1 - zeta(s) + 1/(s-1) <= 2/(s+1)`, in the
/// sharpened form `(s+1)(s+2) (1 - zeta(s) + 1/(s-1) - 1/(s+1)) in [1/4, 3]`.
pub fn lemma2_estimate(model: &FunctionModel, x: f64) -> Result<(f64, f64)> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            what: "lemma2_estimate",
            value: x,
            reason: "x must be finite and positive",
        });
    }
    if model.common_sign(2, SIGN_CHECK_TO).is_none() {
        return Err(Error::SignCondition {
            what: "lemma2_estimate",
        });
    }
    let fx = model.scaled(x);
    let g0 = fx.taylor(0);
    let g1 = fx.taylor(1);
    let slope = model.taylor(1);
    let mean = iterated_integral(model, 1, x)?;
    // sum_{s>=2} g_s / ((s+1)(s+2)) as the double integral of f minus its
    // linear part.
    let r = iterated_integral_fn(|t| model.value(t) - g0 - slope * t, 2, x)?;
    let base = model.value(x) - mean.value + g0 + g1 * (EULER_GAMMA - 0.5);
    let a = base - 3.0 * r.value;
    let b = base - 0.25 * r.value;
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    Ok((lo - r.est_error * 3.0, hi + r.est_error * 3.0))
}

/// Where a factorial-series coefficient comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Fixed,
    Fitted,
}

/// The fixed values of `c_0, c_1, c_2`.
pub const CF_FIXED: [f64; 3] = [1.0, -1.0, -0.25];

/// Largest order [`cf_coeffs`] will fit.
pub const CF_MAX_ORDER: usize = 12;

/// Condition number above which the fit is rejected.
pub const CF_CONDITION_LIMIT: f64 = 1e13;

/// Coefficients of `zeta(s) - 1/(s-1) = sum_n c_n / ((s+1)...(s+n))`.
#[derive(Debug, Clone, PartialEq)]
pub struct CfSeriesCoeffs {
    pub c: Vec<f64>,
    pub provenance: Vec<Provenance>,
    /// Condition estimate of the scaled least-squares matrix (1 when nothing
    /// was fitted).
    pub condition: f64,
}

impl CfSeriesCoeffs {
    /// The truncated factorial series at `s`.
    pub fn eval(&self, s: f64) -> f64 {
        let mut acc = Accumulator::new();
        let mut den = 1.0;
        for (n, c) in self.c.iter().enumerate() {
            if n > 0 {
                den *= s + n as f64;
            }
            acc.add(c / den);
        }
        acc.value()
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }
}

fn rising(s: f64, n: usize) -> f64 {
    (1..=n).map(|j| s + j as f64).product()
}

/// `c_0..c_2` fixed and `c_3..c_{n_max}` fitted by least squares to
/// `zeta(s) - 1/(s-1)` at `s = 2, ..., n_max + 2`.
pub fn cf_coeffs(n_max: usize) -> Result<CfSeriesCoeffs> {
    if n_max > CF_MAX_ORDER {
        return Err(Error::Domain {
            what: "cf_coeffs",
            value: n_max as f64,
            reason: "order above 12",
        });
    }
    let fixed = n_max.min(2) + 1;
    let mut c: Vec<f64> = CF_FIXED[..fixed].to_vec();
    let mut provenance = alloc::vec![Provenance::Fixed; fixed];
    if n_max <= 2 {
        return Ok(CfSeriesCoeffs {
            c,
            provenance,
            condition: 1.0,
        });
    }
    let unknowns = n_max - 2;
    let rows = n_max + 1;
    let mut a = alloc::vec![alloc::vec![0.0; unknowns]; rows];
    let mut rhs = alloc::vec![0.0; rows];
    for (i, s) in (2..=n_max + 2).enumerate() {
        let s = s as f64;
        let known: f64 = (0..3).map(|n| CF_FIXED[n] / rising(s, n)).sum();
        rhs[i] = zeta_minus_pole(s)? - known;
        for j in 0..unknowns {
            a[i][j] = 1.0 / rising(s, j + 3);
        }
    }
    let (x, condition) = least_squares(a, rhs)?;
    c.extend(x);
    provenance.extend(core::iter::repeat_n(Provenance::Fitted, unknowns));
    Ok(CfSeriesCoeffs {
        c,
        provenance,
        condition,
    })
}

/// Householder QR least squares with unit-norm column scaling. Returns the
/// solution and `max|R_ii| / min|R_ii|`.
fn least_squares(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<(Vec<f64>, f64)> {
    let m = a.len();
    let n = a[0].len();
    let mut scale = alloc::vec![0.0; n];
    for j in 0..n {
        let norm = (0..m).map(|i| a[i][j] * a[i][j]).sum::<f64>().sqrt();
        scale[j] = if norm > 0.0 { norm } else { 1.0 };
        for row in a.iter_mut() {
            row[j] /= scale[j];
        }
    }
    for k in 0..n {
        let norm = (k..m).map(|i| a[i][k] * a[i][k]).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::IllConditioned {
                condition: f64::INFINITY,
            });
        }
        let alpha = if a[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..m).map(|i| a[i][k]).collect();
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|t| t * t).sum();
        for j in k..n {
            let dot: f64 = (k..m).map(|i| v[i - k] * a[i][j]).sum();
            let f = 2.0 * dot / vv;
            for i in k..m {
                a[i][j] -= f * v[i - k];
            }
        }
        let dot: f64 = (k..m).map(|i| v[i - k] * b[i]).sum();
        let f = 2.0 * dot / vv;
        for i in k..m {
            b[i] -= f * v[i - k];
        }
    }
    let diag: Vec<f64> = (0..n).map(|i| a[i][i].abs()).collect();
    let hi = diag.iter().copied().fold(0.0, f64::max);
    let lo = diag.iter().copied().fold(f64::INFINITY, f64::min);
    let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if condition > CF_CONDITION_LIMIT {
        return Err(Error::IllConditioned { condition });
    }
    let mut x = alloc::vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    for j in 0..n {
        x[j] /= scale[j];
    }
    Ok((x, condition))
}

/// `c_0 f(x) + sum_{n=1}^{order} c_n x^{-n} (n-fold integral of f)`, with the
/// fixed coefficients up to order 2 and fitted ones beyond.
pub fn cf_expansion_eval(model: &FunctionModel, x: f64, order: usize) -> Result<SeriesValue> {
    if order > crate::quad::MAX_ITERATED as usize {
        return Err(Error::Domain {
            what: "cf_expansion_eval",
            value: order as f64,
            reason: "order above the available iterated integrals (4)",
        });
    }
    if matches!(model, FunctionModel::Zero) {
        return Ok(SeriesValue::new(0.0, 0.0, order + 1, "factorial_series"));
    }
    let coeffs = cf_coeffs(order)?;
    let mut acc = Accumulator::new();
    let mut err = 0.0;
    acc.add(coeffs.c[0] * model.value(x));
    for n in 1..=order {
        let r = iterated_integral(model, n as u32, x)?;
        acc.add(coeffs.c[n] * r.value);
        err += coeffs.c[n].abs() * r.est_error;
    }
    Ok(SeriesValue::new(
        acc.value(),
        err + acc.rounding(),
        order + 1,
        "factorial_series",
    ))
}

/// Route for the lattice function `f(Y) = sum_a sin^2(Y/a)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FMethod {
    /// Direct sum with an Euler-Maclaurin tail.
    Lattice,
    /// `(1/4) sum B_{2n} (4 pi Y)^{2n} / ((2n)!)^2`.
    Bernoulli,
}

/// Largest argument accepted by the Bernoulli route.
pub const BERNOULLI_X_MAX: f64 = 30.0;

/// Number of Euler-Maclaurin correction terms tried by the lattice route.
const EM_TERMS: usize = 12;

fn lattice_cutoff(x: f64) -> usize {
    (3.0 * x.sqrt()).ceil().max(32.0) as usize
}

/// Taylor jet of `h(eps) = c / (a0 + eps)`.
fn reciprocal_jet(c: f64, a0: f64, len: usize) -> Vec<f64> {
    let mut h = Vec::with_capacity(len);
    let mut v = c / a0;
    for _ in 0..len {
        h.push(v);
        v *= -1.0 / a0;
    }
    h
}

/// Jets of `cos(h)` and `sin(h)` from that of `h`, via `c' = -s h'` and
/// `s' = c h'`.
fn cos_sin_jet(h: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let len = h.len();
    let mut c = alloc::vec![0.0; len];
    let mut s = alloc::vec![0.0; len];
    c[0] = h[0].cos();
    s[0] = h[0].sin();
    for m in 0..len - 1 {
        let mut dc = 0.0;
        let mut ds = 0.0;
        for i in 0..=m {
            let hd = (m + 1 - i) as f64 * h[m + 1 - i];
            dc -= s[i] * hd;
            ds += c[i] * hd;
        }
        c[m + 1] = dc / (m + 1) as f64;
        s[m + 1] = ds / (m + 1) as f64;
    }
    (c, s)
}

/// `-sum_j B_{2j}/(2j)! g^{(2j-1)}(a0)` from the jet `g_m = g^{(m)}(a0)/m!`,
/// stopping at the smallest term. Returns the sum and the size of the first
/// omitted term.
fn em_correction(jet: &[f64]) -> Result<(f64, f64)> {
    let mut acc = Accumulator::new();
    let mut prev = f64::INFINITY;
    let mut omitted = 0.0;
    for j in 1..=EM_TERMS {
        if 2 * j - 1 >= jet.len() {
            break;
        }
        // B_{2j}/(2j)! * (2j-1)! g_{2j-1} = B_{2j}/(2j) g_{2j-1}
        let b = bernoulli(2 * j)?.to_f64().unwrap_or(0.0);
        let term = b / (2 * j) as f64 * jet[2 * j - 1];
        if term.abs() >= prev {
            omitted = term.abs();
            break;
        }
        acc.add(-term);
        prev = term.abs();
        omitted = term.abs();
        if term == 0.0 {
            break;
        }
    }
    Ok((acc.value(), omitted))
}

fn check_f_arg(what: &'static str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            value: x,
            reason: "argument must be finite and nonnegative",
        })
    }
}

fn f_lattice(x: f64) -> Result<SeriesValue> {
    let a0 = lattice_cutoff(x);
    let mut head = Accumulator::new();
    for a in 1..a0 {
        let s = (x / a as f64).sin();
        head.add(s * s);
    }
    let a0f = a0 as f64;
    let v = x / a0f;
    let cfg = EvalConfig::default();
    let s2 = si(2.0 * v, &cfg)?;
    let sv = v.sin();
    // int_{a0}^inf sin^2(x/t) dt = x (Si(2v) - sin^2 v / v)
    let integral = x * (s2.value - sv * sv / v);
    let h = reciprocal_jet(2.0 * x, a0f, 2 * EM_TERMS);
    let (c, _) = cos_sin_jet(&h);
    let mut g: Vec<f64> = c.iter().map(|cm| -0.5 * cm).collect();
    g[0] += 0.5;
    let (corr, omitted) = em_correction(&g)?;
    let mut acc = head;
    acc.add(integral);
    acc.add(0.5 * sv * sv);
    acc.add(corr);
    let val = acc.value();
    let est =
        omitted + x * s2.est_error + 4.0 * f64::EPSILON * (acc.abs_total() + x * s2.value.abs());
    Ok(SeriesValue::new(val, est, a0 + EM_TERMS, "lattice"))
}

static BERNOULLI_RATIOS: OnceBox<Vec<DD>> = OnceBox::new();

/// `B_{2n}/(2n)!` as double-double numbers, `n = 0..=160`.
fn bernoulli_ratios() -> &'static [DD] {
    BERNOULLI_RATIOS.get_or_init(|| {
        let mut out = Vec::with_capacity(MAX_BERNOULLI_INDEX + 1);
        let mut fact = BigInt::one();
        for n in 0..=MAX_BERNOULLI_INDEX {
            if n > 0 {
                fact *= BigInt::from(2 * n - 1) * BigInt::from(2 * n);
            }
            let q = bernoulli(2 * n).unwrap_or_else(|_| BigRational::zero())
                / BigRational::from_integer(fact.clone());
            let hi = q.to_f64().unwrap_or(0.0);
            let lo = BigRational::from_float(hi)
                .map(|h| (&q - h).to_f64().unwrap_or(0.0))
                .unwrap_or(0.0);
            out.push(DD::from_parts(hi, lo));
        }
        alloc::boxed::Box::new(out)
    })
}

fn f_bernoulli(x: f64) -> Result<SeriesValue> {
    if x > BERNOULLI_X_MAX {
        return Err(Error::Domain {
            what: "f_sin2",
            value: x,
            reason: "Bernoulli route needs x <= 30 in binary64",
        });
    }
    let ratios = bernoulli_ratios();
    let q = (DD::PI.mul_f64(4.0 * x)) * (DD::PI.mul_f64(4.0 * x));
    // w_n = (4 pi x)^{2n} / (4 (2n)!)
    let mut w = DD::from(0.25);
    let mut sum = DD::ZERO;
    let mut max_term: f64 = 0.0;
    let mut last = 0.0;
    let mut n = 0;
    for k in 1..=MAX_BERNOULLI_INDEX {
        w = (w * q).div_f64(((2 * k - 1) * (2 * k)) as f64);
        let t = ratios[k] * w;
        sum = sum + t;
        max_term = max_term.max(t.hi.abs());
        last = t.hi.abs();
        n = k;
        if k as f64 > 2.0 * x && last <= 1e-34 * max_term.max(sum.hi.abs()) {
            break;
        }
    }
    if n == MAX_BERNOULLI_INDEX && last > 1e-20 * sum.hi.abs() {
        return Err(Error::BudgetExceeded {
            what: "f_sin2",
            budget: MAX_BERNOULLI_INDEX,
        });
    }
    let v = sum.to_f64();
    let est = 1e-30 * n as f64 * max_term + last + f64::EPSILON * v.abs();
    Ok(SeriesValue::new(v, est, n, "bernoulli"))
}

/// `f(x) = sum_{a>=1} sin^2(x/a)`.
pub fn f_sin2(x: f64, method: FMethod) -> Result<SeriesValue> {
    check_f_arg("f_sin2", x)?;
    if x == 0.0 {
        return Ok(SeriesValue::exact(0.0, "exact"));
    }
    match method {
        FMethod::Lattice => f_lattice(x),
        FMethod::Bernoulli => f_bernoulli(x),
    }
}

/// `f'(x) = sum_{a>=1} sin(2x/a)/a`, by the lattice route.
pub fn f_sin2_deriv(x: f64) -> Result<SeriesValue> {
    check_f_arg("f_sin2_deriv", x)?;
    if x == 0.0 {
        return Ok(SeriesValue::exact(0.0, "exact"));
    }
    let a0 = lattice_cutoff(x);
    let mut head = Accumulator::new();
    for a in 1..a0 {
        let af = a as f64;
        head.add((2.0 * x / af).sin() / af);
    }
    let a0f = a0 as f64;
    let hv = 2.0 * x / a0f;
    let cfg = EvalConfig::default();
    let s = si(hv, &cfg)?;
    let len = 2 * EM_TERMS;
    let h = reciprocal_jet(2.0 * x, a0f, len);
    let (_, sj) = cos_sin_jet(&h);
    let r = reciprocal_jet(1.0, a0f, len);
    let q: Vec<f64> = (0..len)
        .map(|m| (0..=m).map(|i| sj[i] * r[m - i]).sum())
        .collect();
    let (corr, omitted) = em_correction(&q)?;
    let mut acc = head;
    acc.add(s.value);
    acc.add(0.5 * q[0]);
    acc.add(corr);
    let v = acc.value();
    let est = omitted + s.est_error + 4.0 * f64::EPSILON * acc.abs_total();
    Ok(SeriesValue::new(v, est, a0 + EM_TERMS, "lattice"))
}

/// `c(sin^2, Y) = f(Y) + sin^2 Y - Y Si(2Y)`.
pub fn c_sin2_closed(y: f64) -> Result<SeriesValue> {
    check_f_arg("c_sin2_closed", y)?;
    if y == 0.0 {
        return Ok(SeriesValue::exact(0.0, "exact"));
    }
    let f = f_sin2(y, FMethod::Lattice)?;
    let s = si(2.0 * y, &EvalConfig::default())?;
    let sy = y.sin();
    let si_part = y * s.value;
    let v = f.value + sy * sy - si_part;
    let est =
        f.est_error + y * s.est_error + 4.0 * f64::EPSILON * (f.value.abs() + si_part.abs() + 1.0);
    Ok(SeriesValue::new(v, est, f.terms_used, "closed_form"))
}

/// `c(sin^2, Y)` from the zeta series of `sin^2(Y u)`.
pub fn c_sin2_zeta(y: f64) -> Result<SeriesValue> {
    c_constant(&FunctionModel::Sin2 { a: y })
}

fn check_tail_args(what: &'static str, s: f64, x: u64) -> Result<()> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::Domain {
            what,
            value: s,
            reason: "s must be finite and exceed 1",
        });
    }
    if x < 5 {
        return Err(Error::Domain {
            what,
            value: x as f64,
            reason: "x must be at least 5",
        });
    }
    Ok(())
}

/// `sum_{k>x} k^{-s} ~ 1/((s-1) x^{s-1}) - 1/(2 x^s) + s/(12 x^{s+1})`.
pub fn zeta_tail(s: f64, x: u64) -> Result<SeriesValue> {
    check_tail_args("zeta_tail", s, x)?;
    let xf = x as f64;
    let v = xf.powf(1.0 - s) / (s - 1.0) - 0.5 * xf.powf(-s) + s / 12.0 * xf.powf(-s - 1.0);
    let next = s * (s + 1.0) * (s + 2.0) / 720.0 * xf.powf(-s - 3.0);
    Ok(SeriesValue::new(
        v,
        next + 4.0 * f64::EPSILON * v.abs(),
        3,
        "euler_maclaurin",
    ))
}

/// The variant with an extra leading `1/x^{2n-1}` and `n/6` in the third
/// term, for `s = 2n`. Kept to compare against direct tails.
pub fn zeta_tail_eq43(n: u32, x: u64) -> Result<SeriesValue> {
    check_tail_args("zeta_tail_eq43", 2.0 * n as f64, x)?;
    let xf = x as f64;
    let s = 2.0 * n as f64;
    let v = xf.powf(1.0 - s) + xf.powf(1.0 - s) / (s - 1.0) - 0.5 * xf.powf(-s)
        + n as f64 / 6.0 * xf.powf(-s - 1.0);
    Ok(SeriesValue::new(
        v,
        xf.powf(-s - 3.0),
        4,
        "euler_maclaurin_variant",
    ))
}

/// `sum_{k>x} k^{-s}` summed explicitly to `64 x` with a short
/// Euler-Maclaurin tail beyond.
pub fn zeta_tail_direct(s: f64, x: u64) -> Result<SeriesValue> {
    check_tail_args("zeta_tail_direct", s, x)?;
    let k_max = 64 * x;
    let mut acc = Accumulator::new();
    for k in (x + 1..=k_max).rev() {
        acc.add((k as f64).powf(-s));
    }
    let n = k_max as f64;
    // sum_{k > N} = N^{1-s}/(s-1) - N^{-s}/2 + s N^{-s-1}/12 - s(s+1)(s+2) N^{-s-3}/720
    let tail = n.powf(1.0 - s) / (s - 1.0) - 0.5 * n.powf(-s) + s / 12.0 * n.powf(-s - 1.0)
        - s * (s + 1.0) * (s + 2.0) / 720.0 * n.powf(-s - 3.0);
    acc.add(tail);
    let next = s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) / 30240.0 * n.powf(-s - 5.0);
    let v = acc.value();
    Ok(SeriesValue::new(
        v,
        next + acc.rounding() + f64::EPSILON * v,
        (k_max - x) as usize,
        "direct_sum",
    ))
}

/// `log x + gamma + 1/(2x) - 1/(12 x^2)`.
pub fn harmonic_asymptotic(x: u64) -> Result<SeriesValue> {
    if x < 5 {
        return Err(Error::Domain {
            what: "harmonic_asymptotic",
            value: x as f64,
            reason: "x must be at least 5",
        });
    }
    let xf = x as f64;
    let v = xf.ln() + EULER_GAMMA + 0.5 / xf - 1.0 / (12.0 * xf * xf);
    Ok(SeriesValue::new(
        v,
        1.0 / (120.0 * xf.powi(4)) + 4.0 * f64::EPSILON * v,
        4,
        "euler_maclaurin",
    ))
}

/// The two reference integrals behind `E_1` and `E_2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceIntegrals {
    /// `int_0^1 sin^2(1/t) dt` from the averaged and extrapolated schemes.
    pub sin2: (f64, f64),
    /// `int_0^1 sin(1/t)/t dt`, likewise.
    pub sinc: (f64, f64),
    pub sin2_err: f64,
    pub sinc_err: f64,
}

/// Agreement demanded between the two quadrature schemes.
pub const REFERENCE_AGREEMENT: f64 = 1e-8;

static REFERENCES: OnceBox<ReferenceIntegrals> = OnceBox::new();

fn compute_references() -> Result<ReferenceIntegrals> {
    // int_1^inf sin^2 u/u^2 du = 1/2 - int_1^inf cos(2u)/(2u^2) du
    let p = paired_tail(
        |u| (2.0 * u).cos() / (2.0 * u * u),
        1.0,
        FRAC_PI_4,
        FRAC_PI_2,
    )?;
    let sin2 = (0.5 - p.averaged.value, 0.5 - p.extrapolated.value);
    // int_1^inf sin u/u du, conditionally convergent
    let q = paired_tail(|u| u.sin() / u, 1.0, 0.0, PI)?;
    let sinc = (q.averaged.value, q.extrapolated.value);
    for (what, (a, b)) in [
        ("reference sin^2 integral", sin2),
        ("reference sin/t integral", sinc),
    ] {
        if (a - b).abs() > REFERENCE_AGREEMENT {
            return Err(Error::Inconsistent {
                what,
                a,
                b,
                tol: REFERENCE_AGREEMENT,
            });
        }
    }
    Ok(ReferenceIntegrals {
        sin2,
        sinc,
        sin2_err: p.averaged.est_error.max((sin2.0 - sin2.1).abs()),
        sinc_err: q.averaged.est_error.max((sinc.0 - sinc.1).abs()),
    })
}

/// The memoized reference integrals.
pub fn reference_integrals() -> Result<&'static ReferenceIntegrals> {
    REFERENCES.get_or_try_init(|| compute_references().map(alloc::boxed::Box::new))
}

fn check_e_arg(what: &'static str, x: f64) -> Result<()> {
    if x >= 1.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            value: x,
            reason: "x must be finite and at least 1",
        })
    }
}

/// `E_1(x) = (1/x) sum_{k<=x} sin^2(x/k) - int_0^1 sin^2(1/t) dt`.
pub fn e1(x: f64) -> Result<f64> {
    check_e_arg("e1", x)?;
    let r = reference_integrals()?;
    let n = x.floor() as u64;
    let s: Accumulator = (1..=n)
        .map(|k| {
            let v = (x / k as f64).sin();
            v * v
        })
        .collect();
    Ok(s.value() / x - r.sin2.0)
}

/// `E_2(x) = (1/(2x)) sum_{k<=2x} (2x/k) sin(2x/k) - int_0^1 sin(1/t)/t dt`.
pub fn e2(x: f64) -> Result<f64> {
    check_e_arg("e2", x)?;
    let r = reference_integrals()?;
    let n = (2.0 * x).floor() as u64;
    let s: Accumulator = (1..=n)
        .map(|k| {
            let u = 2.0 * x / k as f64;
            u * u.sin()
        })
        .collect();
    Ok(s.value() / (2.0 * x) - r.sinc.0)
}

/// `|LHS - RHS|` of the expansion
/// `(1/x) sum_{k<=x} f(x/k) - int_1^x f(u)/u^2 du = f(0)/x
///  + f'(0)(gamma + 1/(2x) - 1/(12x^2)) + c(f,x)/x
///  + (f(1) - f(0) - f'(0))/(2x) - (f'(1) - f'(0))/(12x^2) + O(x^{-4})`
/// with `c(f,x) = sum_{s>=2} f^{(s)}(0) x^s/s! (zeta(s) - 1/(s-1))`.
/// The sum runs over `k <= x`, so `x` is an integer.
pub fn generalized_expansion_check(model: &FunctionModel, x: u64) -> Result<f64> {
    if x == 0 {
        return Err(Error::Domain {
            what: "generalized_expansion_check",
            value: 0.0,
            reason: "x must be a positive integer",
        });
    }
    if matches!(model, FunctionModel::Zero) {
        return Ok(0.0);
    }
    let xf = x as f64;
    let sum: Accumulator = (1..=x).map(|k| model.value(xf / k as f64)).collect();
    let (int, _) = geometric_integral(|u| model.value(u) / (u * u), 1.0, xf)?;
    let lhs = sum.value() / xf - int;
    let (c, max_term, _, _) = zeta_series(&model.scaled(xf), "generalized_expansion_check")?;
    let cv = c.value();
    if max_term > CANCELLATION_RATIO * cv.abs() && max_term > 0.0 {
        return Err(Error::Cancellation {
            what: "generalized_expansion_check",
            max_term,
            result: cv,
        });
    }
    let f0 = model.value(0.0);
    let d0 = model.deriv(0.0);
    let f1 = model.value(1.0);
    let d1 = model.deriv(1.0);
    let rhs = f0 / xf
        + d0 * (EULER_GAMMA + 0.5 / xf - 1.0 / (12.0 * xf * xf))
        + cv / xf
        + (f1 - f0 - d0) / (2.0 * xf)
        - (d1 - d0) / (12.0 * xf * xf);
    Ok((lhs - rhs).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn taylor_coefficients() {
        let m = FunctionModel::Sin2 { a: 1.0 };
        assert_eq!(m.taylor(2), 1.0);
        assert!((m.taylor(4) + 1.0 / 3.0).abs() < 1e-16);
        let p = FunctionModel::Sin2Plus { a: 0.7 };
        let q = FunctionModel::Sin2Minus { a: 0.7 };
        for s in 0..30 {
            let t = FunctionModel::Sin2 { a: 0.7 }.taylor(s);
            assert!(
                (p.taylor(s) + q.taylor(s) - t).abs() <= 1e-16 * t.abs().max(1e-300),
                "s={s}"
            );
        }
        assert_eq!(p.common_sign(2, 40), Some(1));
        assert_eq!(q.common_sign(2, 40), Some(-1));
        assert_eq!(m.common_sign(2, 40), None);
    }

    #[test]
    fn rational_parts_match() {
        let m = FunctionModel::Sin2 { a: 1.5 };
        for s in 0..16 {
            let q = m.taylor_rational(s).to_f64().unwrap();
            assert!(
                (q * 1.5f64.powi(s as i32) - m.taylor(s)).abs() < 1e-14,
                "s={s}"
            );
        }
    }

    #[test]
    fn c_of_simple_monomials() {
        let x = FunctionModel::Monomial {
            coeff: 1.0,
            power: 1,
        };
        assert!((c_constant(&x).unwrap().value - EULER_GAMMA).abs() < 1e-16);
        let x2 = FunctionModel::Monomial {
            coeff: 1.0,
            power: 2,
        };
        assert!((c_constant(&x2).unwrap().value - (PI * PI / 6.0 - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn lattice_cutoff_grows() {
        assert_eq!(lattice_cutoff(1.0), 32);
        assert_eq!(lattice_cutoff(10_000.0), 300);
    }

    #[test]
    fn fixed_coefficients_first() {
        let c = cf_coeffs(2).unwrap();
        assert_eq!(c.c, CF_FIXED.to_vec());
        assert!(c.provenance.iter().all(|p| *p == Provenance::Fixed));
    }
}
