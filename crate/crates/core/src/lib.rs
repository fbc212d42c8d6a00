//! Numerical kernels for studying the lattice-point remainder of the circle
//! problem through its Bessel-series representations.
//!
//! The crate is `no_std` (it needs `alloc`). Every routine is a pure function
//! of its arguments; the only shared state is a global term budget (see
//! [`config`]) and a few initialize-once caches of constants.
//!
//! Layout:
//!
//! * [`arith`] exact counts: `r2`, `d`, star-convention summatory functions.
//! * [`specfun`] Bessel, Kelvin, sine/cosine integrals, Bernoulli and zeta.
//! * [`quad`] adaptive and oscillatory quadrature.
//! * [`eulermac`] summation constants `c(f)` and the lattice function `f`.
//! * [`series`] the Voronoi, Ramanujan and remainder series.
//! * [`battery`] the identity batteries behind `circlelab verify`.
#![no_std]
// Modules import `Float` under allow(unused_imports): when std is linked its
// inherent float methods take precedence.

extern crate alloc;

pub mod accel;
pub mod arith;
pub mod battery;
pub mod config;
pub mod decimal;
mod error;
pub mod eulermac;
pub mod quad;
pub mod roots;
pub mod series;
pub mod specfun;
pub mod sum;

pub use config::EvalConfig;
pub use decimal::Decimal;
pub use error::{Error, Result};

/// A truncated series or limit evaluation together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub est_error: f64,
    pub terms_used: usize,
    pub method: &'static str,
}

impl SeriesValue {
    pub fn new(value: f64, est_error: f64, terms_used: usize, method: &'static str) -> Self {
        Self {
            value,
            est_error,
            terms_used,
            method,
        }
    }

    pub fn exact(value: f64, method: &'static str) -> Self {
        Self::new(value, 0.0, 0, method)
    }

    /// True when `other` lies within the sum of both error estimates.
    pub fn agrees_with(&self, other: &SeriesValue) -> bool {
        num_traits::Float::abs(self.value - other.value) <= self.est_error + other.est_error
    }
}
