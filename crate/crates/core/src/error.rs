use alloc::string::String;

/// Everything that can go wrong in the numerical kernels.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{what}: argument {value} outside the domain ({reason})")]
    Domain {
        what: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("{what}: tolerance not met (best value {best}, estimated error {est_error})")]
    ToleranceNotMet {
        what: &'static str,
        best: f64,
        est_error: f64,
    },

    #[error("{what}: evaluation budget of {budget} exhausted")]
    BudgetExceeded { what: &'static str, budget: usize },

    #[error("{what}: non-finite value at {at}")]
    NonFinite { what: &'static str, at: f64 },

    #[error("argument {value} exceeds the configured bound {bound}")]
    Overflow { value: u64, bound: u64 },

    #[error(
        "{what}: cancellation, largest term {max_term:e} against result {result:e}; use the closed-form route"
    )]
    Cancellation {
        what: &'static str,
        max_term: f64,
        result: f64,
    },

    #[error("{what}: derivatives at zero do not share one sign")]
    SignCondition { what: &'static str },

    #[error("factorial-series fit is ill-conditioned (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("{what}: closed form is singular at x = {x} (e^(-i pi x/4) = {point})")]
    Degenerate {
        what: &'static str,
        x: f64,
        point: &'static str,
    },

    #[error("{what}: no root found ({detail})")]
    RootNotFound { what: &'static str, detail: String },

    #[error("inconsistent routes for {what}: {a} vs {b} (combined error {tol})")]
    Inconsistent {
        what: &'static str,
        a: f64,
        b: f64,
        tol: f64,
    },

    #[error("invalid decimal {0:?}")]
    Decimal(String),
}

pub type Result<T> = core::result::Result<T, Error>;
