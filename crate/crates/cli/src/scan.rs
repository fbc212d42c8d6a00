//! Grid scans behind `perror` and `theorem5`.

use rayon::prelude::*;

use circlelab_core::accel::Averaging;
use circlelab_core::arith::p_exact;
use circlelab_core::series::{lambda_solve, p_series, phi_p_eval, xi_solve, TruncationSpec};
use circlelab_core::{Decimal, Error};

use crate::rows::{PerrorRow, Theorem5Row};
use crate::{CliError, EPSILON_SHIFT};

/// Points `x_min + i step <= x_max`, in exact decimal arithmetic. Integers
/// are moved up by 1e-6 unless `exact_integers` is set.
pub fn grid(
    x_min: &str,
    x_max: &str,
    step: &str,
    exact_integers: bool,
) -> Result<Vec<Decimal>, CliError> {
    let parse = |name: &str, s: &str| -> Result<Decimal, CliError> {
        s.trim()
            .parse::<Decimal>()
            .map_err(|e| CliError::Usage(format!("--{name} {s:?}: {e}")))
    };
    let lo = parse("x-min", x_min)?;
    let hi = parse("x-max", x_max)?;
    let step = parse("step", step)?;
    if !step.is_positive() {
        return Err(CliError::Usage("--step must be positive".into()));
    }
    if !lo.is_positive() {
        return Err(CliError::Usage("--x-min must be positive".into()));
    }
    let shift: Decimal = EPSILON_SHIFT.parse()?;
    let overflow = || CliError::Usage("grid exceeds decimal range".into());
    let mut out = Vec::new();
    let mut x = lo;
    while x <= hi {
        let point = if x.is_integer() && !exact_integers {
            x.checked_add(shift).ok_or_else(overflow)?
        } else {
            x
        };
        out.push(point);
        x = x.checked_add(step).ok_or_else(overflow)?;
    }
    Ok(out)
}

/// One row of the remainder scan. With `series_n == 0` the series reduces
/// to its constant term and carries no error estimate, reported as NaN.
pub fn perror_row(x: &Decimal, series_n: usize, phi_k: u64) -> Result<PerrorRow, Error> {
    let exact = p_exact(x)?.remainder;
    let s = p_series(
        x.to_f64(),
        &TruncationSpec::new(series_n, Averaging::Cesaro),
    )?;
    let err = if series_n == 0 { f64::NAN } else { s.est_error };
    let phi = phi_p_eval(x, phi_k)?.value.value;
    Ok(PerrorRow {
        x: x.to_string(),
        p_exact: exact,
        p_series: s.value,
        p_series_err: err,
        phi_p: phi,
        abs_diff_series: (s.value - exact).abs(),
        abs_diff_phi: (phi - exact).abs(),
    })
}

/// Rows in grid order; evaluation is parallel but each row is independent
/// of scheduling, so output is reproducible.
pub fn perror_rows(grid: &[Decimal], series_n: usize, phi_k: u64) -> Result<Vec<PerrorRow>, Error> {
    grid.par_iter()
        .map(|x| perror_row(x, series_n, phi_k))
        .collect()
}

pub fn theorem5_rows(x: f64, n_max: u64) -> Result<Vec<Theorem5Row>, Error> {
    (0..=n_max)
        .into_par_iter()
        .map(|n| xi_solve(n, x).and_then(lambda_solve).map(Theorem5Row::from))
        .collect()
}

/// Largest `|p_exact|` on the grid and where it occurs.
pub fn running_max_p(rows: &[PerrorRow]) -> Option<(f64, &str)> {
    rows.iter()
        .filter(|r| r.p_exact.is_finite())
        .fold(None, |best: Option<(f64, &str)>, r| match best {
            Some((m, _)) if m >= r.p_exact.abs() => best,
            _ => Some((r.p_exact.abs(), r.x.as_str())),
        })
}

/// Largest finite metric over the rows with status `ok`.
pub fn running_max_metric(rows: &[Theorem5Row]) -> Option<(f64, u64)> {
    rows.iter()
        .filter(|r| r.status == "ok" && r.metric.is_finite())
        .fold(None, |best: Option<(f64, u64)>, r| match best {
            Some((m, _)) if m >= r.metric => best,
            _ => Some((r.metric, r.n)),
        })
}
