//! Special functions of real argument.
//!
//! Every evaluation returns a [`SpecialValue`] carrying an error estimate and
//! the method used. Power series are summed in double-double arithmetic so
//! that the cancellation near the switch points stays far below binary64
//! rounding.

mod bessel;
mod kelvin;
mod sici;
mod zeta;

pub use bessel::{bessel_j, j1, k1, ramanujan_i1, y1, y1_k1};
pub(crate) use kelvin::ber_deriv_raw;
pub use kelvin::{ber, ber_deriv, ber_deriv_dual, KELVIN_SWITCH};
pub use sici::{ci, si, SICI_ASYMPTOTIC_FROM, SICI_SWITCH};
pub use zeta::{
    bernoulli, bernoulli_f64, bernoulli_zeta_even, zeta, zeta_minus_pole, MAX_BERNOULLI_INDEX,
};

use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Default power-series/asymptotic switch for J, Y and K.
pub const BESSEL_SWITCH: f64 = 16.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    PowerSeries,
    Asymptotic,
    Quadrature,
    Recurrence,
    ContinuedFraction,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::PowerSeries => "power_series",
            Method::Asymptotic => "asymptotic",
            Method::Quadrature => "quadrature",
            Method::Recurrence => "recurrence",
            Method::ContinuedFraction => "continued_fraction",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialValue {
    pub value: f64,
    pub est_error: f64,
    pub method: Method,
}

impl SpecialValue {
    pub fn new(value: f64, est_error: f64, method: Method) -> Self {
        Self {
            value,
            est_error,
            method,
        }
    }
}

/// `sin(2 pi t)`, exact at multiples of a quarter.
pub fn sin_two_pi(t: f64) -> f64 {
    let r = t - t.round();
    let q = 4.0 * r;
    if q == q.round() {
        return match q as i32 {
            1 => 1.0,
            -1 => -1.0,
            _ => 0.0,
        };
    }
    (2.0 * PI * r).sin()
}

/// `cos(2 pi t)`, exact at multiples of a quarter.
pub fn cos_two_pi(t: f64) -> f64 {
    let r = t - t.round();
    let q = 4.0 * r;
    if q == q.round() {
        return match q as i32 {
            0 => 1.0,
            2 | -2 => -1.0,
            _ => 0.0,
        };
    }
    (2.0 * PI * r).cos()
}
