//! Evaluation settings and the global term budget.
//!
//! The budget caps the number of terms any single series loop may take and
//! scales the quadrature evaluation budget. The CLI sets it from
//! `CIRCLELAB_MAX_TERMS`; library callers normally leave it alone.

use core::sync::atomic::{AtomicUsize, Ordering};

use crate::{Error, Result};

pub const DEFAULT_MAX_TERMS: usize = 100_000;

static MAX_TERMS: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_TERMS);

/// Overrides the global term budget. `None` restores the default.
pub fn set_max_terms(n: Option<usize>) {
    MAX_TERMS.store(n.unwrap_or(DEFAULT_MAX_TERMS).max(1), Ordering::Relaxed);
}

pub fn max_terms() -> usize {
    MAX_TERMS.load(Ordering::Relaxed)
}

/// Quadrature evaluation budget derived from the term budget.
pub fn quad_budget() -> usize {
    max_terms().saturating_mul(40)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalConfig {
    pub target_abs_tol: f64,
    pub target_rel_tol: f64,
    /// Argument above which the large-argument expansion replaces the power
    /// series. `None` picks the per-function default.
    pub series_asymptotic_switch: Option<f64>,
    pub max_terms: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            target_abs_tol: 1e-13,
            target_rel_tol: 1e-12,
            series_asymptotic_switch: None,
            max_terms: max_terms(),
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.target_abs_tol > 0.0 && self.target_rel_tol > 0.0) {
            return Err(Error::Domain {
                what: "EvalConfig",
                value: self.target_abs_tol.min(self.target_rel_tol),
                reason: "tolerances must be positive",
            });
        }
        if self.max_terms == 0 {
            return Err(Error::Domain {
                what: "EvalConfig",
                value: 0.0,
                reason: "max_terms must be at least 1",
            });
        }
        if let Some(s) = self.series_asymptotic_switch {
            if !(s > 0.0) {
                return Err(Error::Domain {
                    what: "EvalConfig",
                    value: s,
                    reason: "switch threshold must be positive",
                });
            }
        }
        Ok(())
    }

    pub fn switch_or(&self, default: f64) -> f64 {
        self.series_asymptotic_switch.unwrap_or(default)
    }

    /// Whether `est_error` meets the configured tolerance for `value`.
    pub fn accepts(&self, value: f64, est_error: f64) -> bool {
        est_error
            <= self
                .target_abs_tol
                .max(self.target_rel_tol * num_traits::Float::abs(value))
    }
}
