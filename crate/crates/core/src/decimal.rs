//! Exact decimal numbers.
//!
//! Arguments arrive as strings so that integrality (which decides the half
//! weight in star sums) is settled exactly, not by comparing binary floats.

use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use crate::{Error, Result};

const MAX_SCALE: u32 = 30;

/// `mantissa * 10^(-scale)`, normalized so trailing zeros are stripped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Decimal {
    mantissa: i128,
    scale: u32,
}

fn pow10(k: u32) -> i128 {
    10i128.pow(k)
}

impl Decimal {
    pub const ZERO: Decimal = Decimal {
        mantissa: 0,
        scale: 0,
    };

    pub fn from_int(n: i64) -> Self {
        Self {
            mantissa: n as i128,
            scale: 0,
        }
    }

    pub fn new(mantissa: i128, scale: u32) -> Self {
        let mut d = Self { mantissa, scale };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.mantissa == 0 {
            self.scale = 0;
            return;
        }
        while self.scale > 0 && self.mantissa % 10 == 0 {
            self.mantissa /= 10;
            self.scale -= 1;
        }
    }

    pub fn mantissa(&self) -> i128 {
        self.mantissa
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn is_integer(&self) -> bool {
        self.scale == 0
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa > 0
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa < 0
    }

    /// Greatest integer not exceeding the value.
    pub fn floor(&self) -> i128 {
        let p = pow10(self.scale);
        self.mantissa.div_euclid(p)
    }

    /// Least integer not below the value.
    pub fn ceil(&self) -> i128 {
        let f = self.floor();
        if self.is_integer() {
            f
        } else {
            f + 1
        }
    }

    pub fn to_f64(&self) -> f64 {
        // Parsing the canonical string gives the correctly rounded double.
        self.to_string().parse().unwrap_or(f64::NAN)
    }

    fn aligned(a: Self, b: Self) -> Option<(i128, i128, u32)> {
        let s = a.scale.max(b.scale);
        let am = a.mantissa.checked_mul(pow10(s - a.scale))?;
        let bm = b.mantissa.checked_mul(pow10(s - b.scale))?;
        Some((am, bm, s))
    }

    pub fn checked_add(self, o: Self) -> Option<Self> {
        let (a, b, s) = Self::aligned(self, o)?;
        Some(Self::new(a.checked_add(b)?, s))
    }

    pub fn checked_sub(self, o: Self) -> Option<Self> {
        let (a, b, s) = Self::aligned(self, o)?;
        Some(Self::new(a.checked_sub(b)?, s))
    }

    pub fn checked_mul(self, o: Self) -> Option<Self> {
        let s = self.scale + o.scale;
        if s > 2 * MAX_SCALE {
            return None;
        }
        let mut d = Self {
            mantissa: self.mantissa.checked_mul(o.mantissa)?,
            scale: s,
        };
        d.normalize();
        if d.scale > MAX_SCALE {
            return None;
        }
        Some(d)
    }

    pub fn checked_mul_int(self, k: i64) -> Option<Self> {
        Some(Self::new(self.mantissa.checked_mul(k as i128)?, self.scale))
    }

    /// Decimal nearest to a double, using its shortest round-trip spelling.
    pub fn from_f64(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::Decimal(x.to_string()));
        }
        alloc::format!("{x:e}").parse()
    }
}

impl FromStr for Decimal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Decimal(String::from(s));
        let t = s.trim();
        let (neg, body) = match t.as_bytes().first() {
            Some(b'-') => (true, &t[1..]),
            Some(b'+') => (false, &t[1..]),
            _ => (false, t),
        };
        let (num, exp) = match body.find(['e', 'E']) {
            Some(i) => {
                let e: i32 = body[i + 1..].parse().map_err(|_| bad())?;
                (&body[..i], e)
            }
            None => (body, 0),
        };
        let (int_part, frac_part) = match num.find('.') {
            Some(i) => (&num[..i], &num[i + 1..]),
            None => (num, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part
            .bytes()
            .chain(frac_part.bytes())
            .all(|c| c.is_ascii_digit())
        {
            return Err(bad());
        }
        let mut mantissa: i128 = 0;
        for c in int_part.bytes().chain(frac_part.bytes()) {
            mantissa = mantissa
                .checked_mul(10)
                .and_then(|m| m.checked_add((c - b'0') as i128))
                .ok_or_else(bad)?;
        }
        let mut scale = frac_part.len() as i64 - exp as i64;
        while scale < 0 {
            mantissa = mantissa.checked_mul(10).ok_or_else(bad)?;
            scale += 1;
        }
        let mut d = Decimal {
            mantissa: if neg { -mantissa } else { mantissa },
            scale: scale as u32,
        };
        while d.scale > MAX_SCALE && d.mantissa % 10 == 0 {
            d.mantissa /= 10;
            d.scale -= 1;
        }
        d.normalize();
        if d.scale > MAX_SCALE {
            return Err(bad());
        }
        Ok(d)
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mantissa < 0 {
            f.write_str("-")?;
        }
        let m = self.mantissa.unsigned_abs();
        if self.scale == 0 {
            return write!(f, "{m}");
        }
        let p = 10u128.pow(self.scale);
        write!(
            f,
            "{}.{:0width$}",
            m / p,
            m % p,
            width = self.scale as usize
        )
    }
}

impl PartialOrd for Decimal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Decimal {
    fn cmp(&self, other: &Self) -> Ordering {
        match Self::aligned(*self, *other) {
            Some((a, b, _)) => a.cmp(&b),
            None => self.to_f64().total_cmp(&other.to_f64()),
        }
    }
}

impl From<i64> for Decimal {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Decimal {
        s.parse().unwrap()
    }

    #[test]
    fn parses_and_normalizes() {
        assert_eq!(d("5"), Decimal::from_int(5));
        assert_eq!(d("5.000"), Decimal::from_int(5));
        assert!(d("5.000").is_integer());
        assert!(!d("5.001").is_integer());
        assert_eq!(d("2.5e1"), Decimal::from_int(25));
        assert_eq!(d("1e-6").to_string(), "0.000001");
        assert_eq!(d("-0.50").to_string(), "-0.5");
        assert_eq!(d(".5"), d("0.5"));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "abc", "1.2.3", "1e", "--1", ".", "1 2"] {
            assert!(s.parse::<Decimal>().is_err(), "{s}");
        }
    }

    #[test]
    fn floor_handles_negatives() {
        assert_eq!(d("2.5").floor(), 2);
        assert_eq!(d("-2.5").floor(), -3);
        assert_eq!(d("-2.5").ceil(), -2);
        assert_eq!(d("3").floor(), 3);
    }

    #[test]
    fn arithmetic_is_exact() {
        let a = d("0.1");
        let b = d("0.2");
        assert_eq!(a.checked_add(b).unwrap(), d("0.3"));
        assert_eq!(d("1").checked_sub(d("0.000001")).unwrap(), d("0.999999"));
        assert_eq!(d("0.5").checked_mul_int(199).unwrap(), d("99.5"));
        assert!(d("0.3") > d("0.29999"));
    }

    #[test]
    fn from_f64_round_trips() {
        for x in [0.5, 5.5, 1e-6, 10.5, 1234.000001] {
            assert_eq!(Decimal::from_f64(x).unwrap().to_f64(), x);
        }
    }
}
