//! Exact lattice counts and summatory functions.
//!
//! Star sums are carried as twice their value in an integer, so the half
//! weight given to the boundary term at integer `x` never touches floating
//! point.

use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::decimal::Decimal;
use crate::specfun::{cos_two_pi, sin_two_pi, EULER_GAMMA};
use crate::{Error, Result};

/// Largest `n` accepted by [`r2`] and [`d`]; trial division stays below a
/// few seconds up to here.
pub const DEFAULT_BOUND: u64 = 1_000_000_000_000_000;

/// Below this `r2` uses pair enumeration instead of factorization.
pub const BRUTE_BELOW: u64 = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SummatoryKind {
    Circle,
    Divisor,
}

impl SummatoryKind {
    pub fn name(self) -> &'static str {
        match self {
            SummatoryKind::Circle => "circle",
            SummatoryKind::Divisor => "divisor",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    Sin,
    Cos,
}

/// A nonnegative multiple of one half.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StarSum {
    twice: u128,
}

impl StarSum {
    pub fn from_twice(twice: u128) -> Self {
        Self { twice }
    }

    pub fn twice(&self) -> u128 {
        self.twice
    }

    /// Denominator of the reduced fraction: 1 or 2.
    pub fn denominator(&self) -> u32 {
        if self.twice % 2 == 0 {
            1
        } else {
            2
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.twice as f64 * 0.5
    }
}

impl fmt::Display for StarSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}.5", self.twice / 2)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RemainderRecord {
    pub x: Decimal,
    pub star_sum: StarSum,
    pub main_term: f64,
    pub remainder: f64,
}

/// `⌊x⌋` for non-integers, `x - 1/2` at integers.
pub fn floor_f(x: &Decimal) -> Result<f64> {
    if !x.is_positive() {
        return Err(Error::Domain {
            what: "floor_f",
            value: x.to_f64(),
            reason: "x must be positive",
        });
    }
    let fl = x.floor() as f64;
    Ok(if x.is_integer() { fl - 0.5 } else { fl })
}

/// `F(m / (n * 10^s))` for the exact rational `m / (n 10^s)`.
fn floor_f_ratio(mantissa: i128, scale: u32, n: i128) -> f64 {
    let den = n * 10i128.pow(scale);
    let q = mantissa.div_euclid(den);
    if mantissa.rem_euclid(den) == 0 {
        q as f64 - 0.5
    } else {
        q as f64
    }
}

pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.saturating_mul(r) > n {
        r -= 1;
    }
    while (r + 1).saturating_mul(r + 1) <= n {
        r += 1;
    }
    r
}

/// Prime factorization by trial division, as `(p, e)` pairs in ascending `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while *n % p == 0 {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut p = 5;
    while p * p <= n {
        push(p, &mut n);
        push(p + 2, &mut n);
        p += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn check_bound(n: u64, bound: u64) -> Result<()> {
    if n > bound {
        Err(Error::Overflow { value: n, bound })
    } else {
        Ok(())
    }
}

/// `r2(n)` from the factorization: `4 (d_1(n) - d_3(n))`.
pub fn r2_factor(n: u64) -> u64 {
    if n == 0 {
        return 1;
    }
    let mut prod = 4;
    for (p, e) in factorize(n) {
        match p % 4 {
            1 => prod *= e as u64 + 1,
            3 if e % 2 == 1 => return 0,
            _ => {}
        }
    }
    prod
}

/// `r2(n)` by enumerating `a` and testing whether `n - a^2` is a square.
pub fn r2_brute(n: u64) -> u64 {
    if n == 0 {
        return 1;
    }
    let r = isqrt(n);
    let mut count = 0;
    for a in 0..=r {
        let rest = n - a * a;
        let b = isqrt(rest);
        if b * b == rest {
            // (±a, ±b), collapsing signs of zero.
            count += if a == 0 || b == 0 { 2 } else { 4 };
        }
    }
    count
}

pub fn r2(n: u64) -> Result<u64> {
    r2_bounded(n, DEFAULT_BOUND)
}

pub fn r2_bounded(n: u64, bound: u64) -> Result<u64> {
    check_bound(n, bound)?;
    Ok(if n < BRUTE_BELOW {
        r2_brute(n)
    } else {
        r2_factor(n)
    })
}

pub fn d_factor(n: u64) -> u64 {
    factorize(n).iter().map(|&(_, e)| e as u64 + 1).product()
}

pub fn d_trial(n: u64) -> u64 {
    let mut count = 0;
    let mut k = 1;
    while k * k <= n {
        if n % k == 0 {
            count += if k * k == n { 1 } else { 2 };
        }
        k += 1;
    }
    count
}

pub fn d(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Domain {
            what: "d",
            value: 0.0,
            reason: "n must be at least 1",
        });
    }
    check_bound(n, DEFAULT_BOUND)?;
    Ok(d_factor(n))
}

/// Number of `(a, b)` with `a^2 + b^2 <= n`.
pub fn lattice_count(n: u64) -> u128 {
    let r = isqrt(n);
    let mut total: u128 = 0;
    for a in 0..=r {
        let col = 2 * isqrt(n - a * a) as u128 + 1;
        total += if a == 0 { col } else { 2 * col };
    }
    total
}

/// `sum_{k <= n} d(k)` by the hyperbola method.
pub fn divisor_count(n: u64) -> u128 {
    let r = isqrt(n);
    let mut total: u128 = 0;
    for k in 1..=r {
        total += (n / k) as u128;
    }
    2 * total - (r as u128) * (r as u128)
}

/// Star-convention summatory function at `x`.
pub fn sum_star(x: &Decimal, kind: SummatoryKind) -> Result<StarSum> {
    let bad = |reason| Error::Domain {
        what: "sum_star",
        value: x.to_f64(),
        reason,
    };
    match kind {
        SummatoryKind::Circle if x.is_negative() => return Err(bad("x must be nonnegative")),
        SummatoryKind::Divisor if !x.is_positive() => return Err(bad("x must be positive")),
        _ => {}
    }
    let fl = x.floor();
    let n = u64::try_from(fl).map_err(|_| bad("x too large"))?;
    check_bound(n, DEFAULT_BOUND)?;
    let twice = match kind {
        SummatoryKind::Circle => {
            let full = 2 * lattice_count(n);
            if x.is_integer() {
                full - r2(n)? as u128
            } else {
                full
            }
        }
        SummatoryKind::Divisor => {
            if n == 0 {
                0
            } else {
                let full = 2 * divisor_count(n);
                if x.is_integer() {
                    full - d(n)? as u128
                } else {
                    full
                }
            }
        }
    };
    Ok(StarSum::from_twice(twice))
}

/// Circle remainder `P(x)`.
pub fn p_exact(x: &Decimal) -> Result<RemainderRecord> {
    if !x.is_positive() {
        return Err(Error::Domain {
            what: "p_exact",
            value: x.to_f64(),
            reason: "x must be positive",
        });
    }
    let star_sum = sum_star(x, SummatoryKind::Circle)?;
    let main_term = core::f64::consts::PI * x.to_f64();
    Ok(RemainderRecord {
        x: *x,
        star_sum,
        main_term,
        remainder: star_sum.to_f64() - main_term,
    })
}

/// Divisor remainder `Δ(x)`.
pub fn delta_exact(x: &Decimal) -> Result<RemainderRecord> {
    let xf = x.to_f64();
    if x < &Decimal::from_int(1) {
        return Err(Error::Domain {
            what: "delta_exact",
            value: xf,
            reason: "x must be at least 1",
        });
    }
    let star_sum = sum_star(x, SummatoryKind::Divisor)?;
    let main_term = xf * xf.ln() + (2.0 * EULER_GAMMA - 1.0) * xf + 0.25;
    Ok(RemainderRecord {
        x: *x,
        star_sum,
        main_term,
        remainder: star_sum.to_f64() - main_term,
    })
}

/// `sum_{1 <= n <= x} F(x/n) sin(2 pi n theta)` (or `cos`).
pub fn conjecture_lhs(x: &Decimal, theta: f64, flavor: Flavor) -> Result<f64> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Domain {
            what: "conjecture_lhs",
            value: theta,
            reason: "theta must lie in (0, 1)",
        });
    }
    if !x.is_positive() {
        return Err(Error::Domain {
            what: "conjecture_lhs",
            value: x.to_f64(),
            reason: "x must be positive",
        });
    }
    let top = x.floor();
    let mut acc = crate::sum::Accumulator::new();
    for n in 1..=top {
        let fv = floor_f_ratio(x.mantissa(), x.scale(), n);
        let t = (n as f64 * theta).fract();
        let w = match flavor {
            Flavor::Sin => sin_two_pi(t),
            Flavor::Cos => cos_two_pi(t),
        };
        acc.add(fv * w);
    }
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dec(s: &str) -> Decimal {
        s.parse().unwrap()
    }

    #[test]
    fn floor_f_examples() {
        assert_eq!(floor_f(&dec("2.5")).unwrap(), 2.0);
        assert_eq!(floor_f(&dec("3")).unwrap(), 2.5);
        assert_eq!(floor_f(&dec("0.3")).unwrap(), 0.0);
        assert!(floor_f(&dec("0")).is_err());
    }

    #[test]
    fn small_r2_and_d() {
        assert_eq!(r2(0).unwrap(), 1);
        assert_eq!(r2(5).unwrap(), 8);
        assert_eq!(r2(3).unwrap(), 0);
        assert_eq!(r2(25).unwrap(), 12);
        assert_eq!(r2_factor(50), r2_brute(50));
        assert_eq!(d(1).unwrap(), 1);
        assert_eq!(d(6).unwrap(), 4);
        assert_eq!(d(12).unwrap(), 6);
        assert!(d(0).is_err());
    }

    #[test]
    fn r2_bound_is_enforced() {
        assert_eq!(
            r2_bounded(101, 100),
            Err(Error::Overflow {
                value: 101,
                bound: 100
            })
        );
    }

    #[test]
    fn star_sums() {
        assert_eq!(
            sum_star(&dec("0.5"), SummatoryKind::Circle)
                .unwrap()
                .to_f64(),
            1.0
        );
        assert_eq!(
            sum_star(&dec("5"), SummatoryKind::Circle).unwrap().to_f64(),
            17.0
        );
        assert_eq!(
            sum_star(&dec("2"), SummatoryKind::Divisor)
                .unwrap()
                .to_f64(),
            2.0
        );
        assert_eq!(
            sum_star(&dec("0"), SummatoryKind::Circle).unwrap().to_f64(),
            0.5
        );
        assert_eq!(
            sum_star(&dec("5.5"), SummatoryKind::Circle)
                .unwrap()
                .to_f64(),
            21.0
        );
        assert_eq!(
            sum_star(&dec("2.5"), SummatoryKind::Divisor)
                .unwrap()
                .to_f64(),
            3.0
        );
    }

    #[test]
    fn remainders() {
        let pi = core::f64::consts::PI;
        assert!((p_exact(&dec("5")).unwrap().remainder - (17.0 - 5.0 * pi)).abs() < 1e-13);
        assert!((p_exact(&dec("1")).unwrap().remainder - (3.0 - pi)).abs() < 1e-14);
        assert!((p_exact(&dec("0.5")).unwrap().remainder - (1.0 - pi / 2.0)).abs() < 1e-14);
        let g = EULER_GAMMA;
        let d2 = delta_exact(&dec("2")).unwrap().remainder;
        assert!((d2 - (2.0 - 2.0 * 2f64.ln() - 2.0 * (2.0 * g - 1.0) - 0.25)).abs() < 1e-14);
        assert!((d2 - 0.0548).abs() < 1e-4);
        let d1 = delta_exact(&dec("1")).unwrap().remainder;
        assert!((d1 - (0.5 - (2.0 * g - 1.0) - 0.25)).abs() < 1e-14);
        assert!(delta_exact(&dec("0.9")).is_err());
    }

    #[test]
    fn conjecture_lhs_examples() {
        assert_eq!(conjecture_lhs(&dec("2.5"), 0.25, Flavor::Sin).unwrap(), 2.0);
        assert_eq!(conjecture_lhs(&dec("1.5"), 0.25, Flavor::Sin).unwrap(), 1.0);
        assert_eq!(conjecture_lhs(&dec("0.5"), 0.3, Flavor::Sin).unwrap(), 0.0);
        // At integer x the n = x term uses F(1) = 1/2.
        assert_eq!(conjecture_lhs(&dec("1"), 0.25, Flavor::Sin).unwrap(), 0.5);
    }
}
