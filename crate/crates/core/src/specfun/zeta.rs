//! Bernoulli numbers and the Riemann zeta function on the real axis `s > 1`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
#[allow(unused_imports)]
use num_traits::{Float, One, Signed, ToPrimitive, Zero};
use once_cell::race::OnceBox;

use crate::sum::Accumulator;
use crate::{Error, Result};

/// Largest `n` for which `B_{2n}` is available.
pub const MAX_BERNOULLI_INDEX: usize = 160;

static EVEN_BERNOULLI: OnceBox<Vec<BigRational>> = OnceBox::new();

/// `B_0, B_2, B_4, ...` from `sum_{k=0}^{m} C(m+1, k) B_k = 0`.
fn even_table() -> &'static [BigRational] {
    EVEN_BERNOULLI.get_or_init(|| {
        let mut even: Vec<BigRational> = Vec::with_capacity(MAX_BERNOULLI_INDEX + 1);
        even.push(BigRational::one());
        let b1 = BigRational::new(BigInt::from(-1), BigInt::from(2));
        for n in 1..=MAX_BERNOULLI_INDEX {
            let m = 2 * n;
            // binom(m+1, k) for k = 0..m, built incrementally.
            let mut binom = BigInt::one();
            let mut acc = BigRational::zero();
            for k in 0..m {
                if k == 1 {
                    acc += &b1 * BigRational::from_integer(binom.clone());
                } else if k % 2 == 0 {
                    acc += &even[k / 2] * BigRational::from_integer(binom.clone());
                }
                binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
            }
            even.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
        }
        alloc::boxed::Box::new(even)
    })
}

/// Exact `B_m`, with `B_1 = -1/2`.
pub fn bernoulli(m: usize) -> Result<BigRational> {
    if m == 1 {
        return Ok(BigRational::new(BigInt::from(-1), BigInt::from(2)));
    }
    if m % 2 == 1 {
        return Ok(BigRational::zero());
    }
    if m / 2 > MAX_BERNOULLI_INDEX {
        return Err(Error::Domain {
            what: "bernoulli",
            value: m as f64,
            reason: "index beyond the cached table",
        });
    }
    Ok(even_table()[m / 2].clone())
}

pub fn bernoulli_f64(m: usize) -> Result<f64> {
    Ok(bernoulli(m)?.to_f64().unwrap_or(f64::NAN))
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

/// `(B_{2n}, zeta(2n))` with `zeta(2n) = (-1)^{n-1} (2 pi)^{2n} B_{2n} / (2 (2n)!)`.
pub fn bernoulli_zeta_even(n: usize) -> Result<(BigRational, f64)> {
    if n == 0 || n > MAX_BERNOULLI_INDEX {
        return Err(Error::Domain {
            what: "bernoulli_zeta_even",
            value: n as f64,
            reason: "n must lie in [1, 160]",
        });
    }
    let b = bernoulli(2 * n)?;
    let ratio = (&b / BigRational::from_integer(factorial(2 * n))).abs();
    let z = 0.5 * (2.0 * PI).powi(2 * n as i32) * ratio.to_f64().unwrap_or(f64::NAN);
    Ok((b, z))
}

/// Euler-Maclaurin pieces: `(sum_{k<N} k^{-s}, correction, error bound)`
/// where `correction` excludes the `N^{1-s}/(s-1)` term.
fn em_parts(s: f64) -> (f64, f64, f64) {
    let n = 16 + s.ceil().min(1e6) as usize;
    let nf = n as f64;
    let mut head = Accumulator::new();
    for k in (1..n).rev() {
        head.add((k as f64).powf(-s));
    }
    let mut corr = Accumulator::new();
    corr.add(0.5 * nf.powf(-s));
    // s (s+1) ... (s+2j-2) N^{-s-2j+1} B_{2j}/(2j)!
    let mut rising = s;
    let mut npow = nf.powf(-s - 1.0);
    let mut last = 0.0;
    let table = even_table();
    for j in 1..=20usize {
        let b = (&table[j] / BigRational::from_integer(factorial(2 * j)))
            .to_f64()
            .unwrap_or(0.0);
        let term = b * rising * npow;
        corr.add(term);
        last = term.abs();
        rising *= (s + (2 * j - 1) as f64) * (s + (2 * j) as f64);
        npow /= nf * nf;
        if last < 1e-20 * head.value() {
            break;
        }
    }
    (
        head.value(),
        corr.value(),
        last + 4.0 * f64::EPSILON * head.value(),
    )
}

/// `zeta(s) - 1/(s-1)` for real `s > 1`, without cancellation near the pole.
pub fn zeta_minus_pole(s: f64) -> Result<f64> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::Domain {
            what: "zeta_minus_pole",
            value: s,
            reason: "s must be finite and exceed 1",
        });
    }
    let n = (16 + s.ceil().min(1e6) as usize) as f64;
    let (head, corr, _) = em_parts(s);
    // (N^{1-s} - 1)/(s - 1), stable as s -> 1.
    let pole = ((1.0 - s) * n.ln()).exp_m1() / (s - 1.0);
    Ok(head + pole + corr)
}

pub fn zeta(s: f64) -> Result<f64> {
    Ok(zeta_minus_pole(s)? + 1.0 / (s - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_bernoulli_numbers() {
        let r = |p: i64, q: i64| BigRational::new(BigInt::from(p), BigInt::from(q));
        assert_eq!(bernoulli(0).unwrap(), r(1, 1));
        assert_eq!(bernoulli(1).unwrap(), r(-1, 2));
        assert_eq!(bernoulli(2).unwrap(), r(1, 6));
        assert_eq!(bernoulli(4).unwrap(), r(-1, 30));
        assert_eq!(bernoulli(12).unwrap(), r(-691, 2730));
        assert_eq!(bernoulli(7).unwrap(), r(0, 1));
    }

    #[test]
    fn zeta_even_values() {
        let (b, z) = bernoulli_zeta_even(1).unwrap();
        assert_eq!(b, BigRational::new(BigInt::from(1), BigInt::from(6)));
        assert!((z - PI * PI / 6.0).abs() < 1e-15);
        let (_, z2) = bernoulli_zeta_even(2).unwrap();
        assert!((z2 - PI.powi(4) / 90.0).abs() < 1e-15);
        for n in 1..=MAX_BERNOULLI_INDEX {
            let (b, _) = bernoulli_zeta_even(n).unwrap();
            assert_eq!(b.is_positive(), n % 2 == 1, "n={n}");
        }
    }

    #[test]
    fn zeta_minus_pole_values() {
        assert!((zeta_minus_pole(2.0).unwrap() - (PI * PI / 6.0 - 1.0)).abs() < 1e-15);
        assert!((zeta(4.0).unwrap() - PI.powi(4) / 90.0).abs() < 1e-15);
        assert!(
            (zeta_minus_pole(1.0 + 1e-12).unwrap() - crate::specfun::EULER_GAMMA).abs() < 1e-11
        );
        assert!((zeta_minus_pole(200.0).unwrap() - (1.0 - 1.0 / 199.0)).abs() < 1e-15);
        assert!(zeta_minus_pole(1.0).is_err());
    }
}
