//! Integer-order Bessel functions J, Y, K and Ramanujan's combination
//! `-Y_1 - (2/pi) K_1`.

use core::f64::consts::{FRAC_2_PI, FRAC_PI_2, PI};

#[allow(unused_imports)]
use num_traits::Float;

use super::{Method, SpecialValue, BESSEL_SWITCH, EULER_GAMMA};
use crate::sum::DoubleDouble as DD;
use crate::{Error, EvalConfig, Result};

/// Relative rounding level of the double-double series.
const DD_EPS: f64 = 1e-30;

fn finish(
    what: &'static str,
    v: f64,
    err: f64,
    method: Method,
    cfg: &EvalConfig,
) -> Result<SpecialValue> {
    if !v.is_finite() {
        return Err(Error::NonFinite { what, at: v });
    }
    if cfg.accepts(v, err) {
        Ok(SpecialValue::new(v, err, method))
    } else {
        Err(Error::ToleranceNotMet {
            what,
            best: v,
            est_error: err,
        })
    }
}

fn check_arg(what: &'static str, z: f64, allow_zero: bool) -> Result<()> {
    let ok = z.is_finite() && (z > 0.0 || (allow_zero && z == 0.0));
    if ok {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            value: z,
            reason: if allow_zero {
                "argument must be nonnegative"
            } else {
                "argument must be positive"
            },
        })
    }
}

struct SeriesSums {
    /// `sum t_k`, i.e. `J_nu` or `I_nu`.
    plain: DD,
    /// `sum (H_k + H_{k+nu}) t_k`.
    weighted: DD,
    max_term: f64,
    last_term: f64,
    terms: usize,
}

/// Sums `t_k = s^k (z/2)^(2k+nu) / (k! (k+nu)!)` with `s = -1` (J) or
/// `s = +1` (I), along with the harmonic-weighted companion needed by the
/// logarithmic forms of Y and K.
fn power_series(nu: u32, z: f64, sign: f64, max_terms: usize) -> SeriesSums {
    let half = DD::from(z * 0.5);
    let q = (half * half).mul_f64(sign);
    let mut t = half.powi(nu);
    for j in 1..=nu {
        t = t.div_f64(j as f64);
    }
    // H_0 = 0, H_nu.
    let mut hk = DD::ZERO;
    let mut hkn = DD::ZERO;
    for j in 1..=nu {
        hkn = hkn + DD::ONE.div_f64(j as f64);
    }
    let mut plain = DD::ZERO;
    let mut weighted = DD::ZERO;
    let mut max_term: f64 = 0.0;
    let mut k = 0usize;
    loop {
        plain = plain + t;
        weighted = weighted + t * (hk + hkn);
        let mag = t.hi.abs();
        max_term = max_term.max(mag);
        let kf = k as f64 + 1.0;
        t = (t * q).div_f64(kf).div_f64(kf + nu as f64);
        hk = hk + DD::ONE.div_f64(kf);
        hkn = hkn + DD::ONE.div_f64(kf + nu as f64);
        k += 1;
        let small = t.hi.abs() <= DD_EPS * max_term || t.hi == 0.0;
        if (small && kf > 0.5 * z) || k >= max_terms {
            return SeriesSums {
                plain,
                weighted,
                max_term,
                last_term: t.hi.abs(),
                terms: k,
            };
        }
    }
}

/// Hankel expansion coefficients: returns `(P, Q, err)` with the series
/// truncated at the smallest term.
fn hankel_pq(nu: u32, z: f64, alternating: bool, max_terms: usize) -> (f64, f64, f64) {
    let mu = 4.0 * (nu as f64) * (nu as f64);
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut prev = 1.0;
    let mut err = 0.0;
    for k in 1..max_terms.max(2) {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        a *= (mu - odd * odd) / (kf * 8.0 * z);
        let mag = a.abs();
        if mag >= prev || mag == 0.0 {
            err = mag;
            break;
        }
        let s = if alternating {
            // (-1)^{floor(k/2)} pattern for the J/Y pair.
            if (k / 2) % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        } else {
            1.0
        };
        if k % 2 == 0 {
            p += s * a;
        } else {
            q += s * a;
        }
        prev = mag;
        err = mag;
        if mag < 1e-18 * p.abs() {
            break;
        }
    }
    (p, q, err)
}

/// `J_nu(z)` and `Y_nu(z)` from the large-argument expansion.
fn hankel_jy(nu: u32, z: f64, max_terms: usize) -> (f64, f64, f64) {
    let (p, q, err) = hankel_pq(nu, z, true, max_terms);
    let amp = (FRAC_2_PI / z).sqrt();
    let c = (nu as f64 * 0.5 + 0.25) * PI;
    let (sz, cz) = z.sin_cos();
    let (sc, cc) = c.sin_cos();
    let cos_chi = cz * cc + sz * sc;
    let sin_chi = sz * cc - cz * sc;
    let j = amp * (p * cos_chi - q * sin_chi);
    let y = amp * (p * sin_chi + q * cos_chi);
    let e = amp * err + 8.0 * f64::EPSILON * amp * (p.abs() + q.abs());
    (j, y, e)
}

/// `J_nu(z)` for integer order.
pub fn bessel_j(nu: u32, z: f64, cfg: &EvalConfig) -> Result<SpecialValue> {
    check_arg("bessel_j", z, true)?;
    if z == 0.0 {
        return Ok(SpecialValue::new(
            if nu == 0 { 1.0 } else { 0.0 },
            0.0,
            Method::PowerSeries,
        ));
    }
    if z < cfg.switch_or(BESSEL_SWITCH) {
        let s = power_series(nu, z, -1.0, cfg.max_terms);
        let v = s.plain.to_f64();
        let err = s.last_term + DD_EPS * s.max_term * s.terms as f64 + f64::EPSILON * v.abs();
        finish("bessel_j", v, err, Method::PowerSeries, cfg)
    } else {
        let (j, _, e) = hankel_jy(nu, z, cfg.max_terms);
        finish("bessel_j", j, e, Method::Asymptotic, cfg)
    }
}

pub fn j1(z: f64, cfg: &EvalConfig) -> Result<SpecialValue> {
    bessel_j(1, z, cfg).map_err(|e| rename(e, "j1"))
}

fn rename(e: Error, what: &'static str) -> Error {
    match e {
        Error::Domain { value, reason, .. } => Error::Domain {
            what,
            value,
            reason,
        },
        Error::ToleranceNotMet {
            best, est_error, ..
        } => Error::ToleranceNotMet {
            what,
            best,
            est_error,
        },
        Error::NonFinite { at, .. } => Error::NonFinite { what, at },
        other => other,
    }
}

pub fn y1(z: f64, cfg: &EvalConfig) -> Result<SpecialValue> {
    check_arg("y1", z, false)?;
    if z < cfg.switch_or(BESSEL_SWITCH) {
        let s = power_series(1, z, -1.0, cfg.max_terms);
        let j = s.plain.to_f64();
        let log_part = FRAC_2_PI * ((z * 0.5).ln() + EULER_GAMMA) * j;
        let w = s.weighted.to_f64() / PI;
        let v = -FRAC_2_PI / z + log_part - w;
        let err = s.last_term * 8.0
            + DD_EPS * s.max_term * s.terms as f64
            + 4.0 * f64::EPSILON * (FRAC_2_PI / z + log_part.abs() + w.abs());
        finish("y1", v, err, Method::PowerSeries, cfg)
    } else {
        let (_, y, e) = hankel_jy(1, z, cfg.max_terms);
        finish("y1", y, e, Method::Asymptotic, cfg)
    }
}

/// Lower edge of the asymptotic-free middle range for `K_1`.
const K1_SERIES_MAX: f64 = 2.0;

fn k1_trapezoid(z: f64, h: f64) -> (f64, usize) {
    // K_1(z) = int_0^inf exp(-z cosh t) cosh t dt.
    let g = |t: f64| {
        let c = t.cosh();
        (-z * c).exp() * c
    };
    let mut acc = crate::sum::Accumulator::new();
    acc.add(0.5 * g(0.0));
    let mut k = 1;
    loop {
        let v = g(k as f64 * h);
        acc.add(v);
        if v < 1e-22 * acc.value() {
            break;
        }
        k += 1;
    }
    (h * acc.value(), k)
}

pub fn k1(z: f64, cfg: &EvalConfig) -> Result<SpecialValue> {
    check_arg("k1", z, false)?;
    let switch = cfg.switch_or(BESSEL_SWITCH);
    if z >= switch {
        let (p, q, err) = hankel_pq(1, z, false, cfg.max_terms);
        let amp = (FRAC_PI_2 / z).sqrt() * (-z).exp();
        let v = amp * (p + q);
        let e = amp * err + 4.0 * f64::EPSILON * v.abs();
        finish("k1", v, e, Method::Asymptotic, cfg)
    } else if z <= K1_SERIES_MAX {
        let s = power_series(1, z, 1.0, cfg.max_terms);
        let i = s.plain.to_f64();
        let log_part = ((z * 0.5).ln() + EULER_GAMMA) * i;
        let w = 0.5 * s.weighted.to_f64();
        let v = 1.0 / z + log_part - w;
        let err = s.last_term * 8.0 + 4.0 * f64::EPSILON * (1.0 / z + log_part.abs() + w.abs());
        finish("k1", v, err, Method::PowerSeries, cfg)
    } else {
        let (coarse, _) = k1_trapezoid(z, 0.25);
        let (fine, _) = k1_trapezoid(z, 0.125);
        let err = (fine - coarse).abs() + 16.0 * f64::EPSILON * fine;
        finish("k1", fine, err, Method::Quadrature, cfg)
    }
}

pub fn y1_k1(z: f64, cfg: &EvalConfig) -> Result<(SpecialValue, SpecialValue)> {
    check_arg("y1_k1", z, false)?;
    Ok((y1(z, cfg)?, k1(z, cfg)?))
}

/// Ramanujan's `I_1(z) = -Y_1(z) - (2/pi) K_1(z)` (not the modified Bessel
/// function of the first kind).
pub fn ramanujan_i1(z: f64, cfg: &EvalConfig) -> Result<SpecialValue> {
    let (y, k) = y1_k1(z, cfg).map_err(|e| rename(e, "ramanujan_i1"))?;
    Ok(SpecialValue::new(
        -y.value - FRAC_2_PI * k.value,
        y.est_error + FRAC_2_PI * k.est_error + f64::EPSILON * (y.value.abs() + k.value.abs()),
        y.method,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> EvalConfig {
        EvalConfig::default()
    }

    #[test]
    fn j1_small_arguments() {
        assert_eq!(j1(0.0, &cfg()).unwrap().value, 0.0);
        let v = j1(1e-8, &cfg()).unwrap().value;
        assert!((v - 5e-9).abs() < 1e-22);
        assert!((j1(1.0, &cfg()).unwrap().value - 0.440_050_585_744_933_5).abs() < 1e-15);
    }

    #[test]
    fn reference_values() {
        let c = cfg();
        assert!((y1(1.0, &c).unwrap().value + 0.781_212_821_300_288_7).abs() < 1e-14);
        assert!((k1(1.0, &c).unwrap().value - 0.601_907_230_197_234_6).abs() < 1e-14);
        assert!((k1(5.0, &c).unwrap().value - 0.004_044_613_445_452_164).abs() < 1e-16);
        assert!((j1(20.0, &c).unwrap().value - 0.066_833_124_175_850_04).abs() < 1e-13);
        assert!((y1(20.0, &c).unwrap().value + 0.165_511_614_362_521_9).abs() < 1e-13);
    }

    #[test]
    fn zero_is_rejected_for_y_and_k() {
        assert!(matches!(y1_k1(0.0, &cfg()), Err(Error::Domain { .. })));
    }

    #[test]
    fn too_low_switch_is_reported() {
        let c = EvalConfig {
            series_asymptotic_switch: Some(2.0),
            ..cfg()
        };
        assert!(matches!(j1(3.0, &c), Err(Error::ToleranceNotMet { .. })));
    }
}
