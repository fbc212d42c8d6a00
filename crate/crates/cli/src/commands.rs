use std::f64::consts::PI;
use std::io::Write;

use circlelab_core::accel::Averaging;
use circlelab_core::arith::{delta_exact, p_exact, SummatoryKind};
use circlelab_core::battery::{run_suite, Suite};
use circlelab_core::series::{p_series, phi_p_eval, voronoi_circle, TruncationSpec};
use circlelab_core::specfun::{ber_deriv, ci, j1, k1, ramanujan_i1, si, y1};
use circlelab_core::{Decimal, EvalConfig};

use crate::args::{Command, Kind, SpecialFn, SuiteArg};
use crate::output::{emit, with_sink};
use crate::rows::*;
use crate::scan::{grid, perror_rows, running_max_metric, running_max_p, theorem5_rows};
use crate::{CliError, Format};

fn io(e: std::io::Error) -> CliError {
    CliError::io("<stdout>", e)
}

fn parse_x(s: &str) -> Result<Decimal, CliError> {
    s.trim()
        .parse::<Decimal>()
        .map_err(|e| CliError::Usage(format!("--x {s:?}: {e}")))
}

pub(crate) fn dispatch(
    cmd: &Command,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    match cmd {
        Command::Count { x, kind, format } => count(x, *kind, *format, out),
        Command::Verify {
            suite,
            tol_scale,
            format,
        } => verify(*suite, *tol_scale, *format, out),
        Command::Perror {
            x_min,
            x_max,
            step,
            exact_integers,
            series_n,
            phi_k,
            out: path,
            format,
        } => {
            let pts = grid(x_min, x_max, step, *exact_integers)?;
            let rows = perror_rows(&pts, *series_n, *phi_k)?;
            with_sink(path.as_deref(), out, |w| {
                emit(&rows, *format, PERROR_HEADER, w)
            })?;
            // Keep stdout a clean table when the table goes there.
            let summary: &mut dyn Write = if path.is_some() { out } else { err };
            match running_max_p(&rows) {
                Some((m, at)) => writeln!(
                    summary,
                    "running max |p_exact| = {m} at x = {at} over {} rows",
                    rows.len()
                ),
                None => writeln!(summary, "running max |p_exact| = n/a over 0 rows"),
            }
            .map_err(io)
        }
        Command::Theorem5 {
            x,
            n_max,
            out: path,
            format,
        } => {
            let rows = theorem5_rows(*x, *n_max)?;
            with_sink(path.as_deref(), out, |w| {
                emit(&rows, *format, THEOREM5_HEADER, w)
            })?;
            let summary: &mut dyn Write = if path.is_some() { out } else { err };
            let ok = rows.iter().filter(|r| r.status == "ok").count();
            match running_max_metric(&rows) {
                Some((m, n)) => writeln!(
                    summary,
                    "running max metric = {m} at n = {n}; {ok}/{} rows ok",
                    rows.len()
                ),
                None => writeln!(
                    summary,
                    "running max metric = n/a; {ok}/{} rows ok",
                    rows.len()
                ),
            }
            .map_err(io)
        }
        Command::Special {
            function,
            arg,
            format,
        } => special(*function, *arg, *format, out),
        Command::Report {
            x,
            series_n,
            phi_k,
            voronoi_n,
            format,
        } => report(x, *series_n, *phi_k, *voronoi_n, *format, out),
    }
}

fn count(x: &str, kind: Kind, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    let xd = parse_x(x)?;
    let (rec, kind) = match kind {
        Kind::Circle => (p_exact(&xd)?, SummatoryKind::Circle),
        Kind::Divisor => (delta_exact(&xd)?, SummatoryKind::Divisor),
    };
    let row = CountRow {
        x: xd.to_string(),
        kind: kind.name().to_string(),
        star_sum: rec.star_sum.to_string(),
        main_term: rec.main_term,
        remainder: rec.remainder,
    };
    if format == Format::Text {
        writeln!(
            out,
            "x = {}\nkind = {}\nstar_sum = {}\nmain_term = {}\nremainder = {}",
            row.x, row.kind, row.star_sum, row.main_term, row.remainder
        )
        .map_err(io)
    } else {
        emit(&[row], format, COUNT_HEADER, out)
    }
}

fn verify(
    suite: SuiteArg,
    tol_scale: f64,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    if !(tol_scale > 0.0 && tol_scale.is_finite()) {
        return Err(CliError::Usage("--tol-scale must be positive".into()));
    }
    let suites: &[Suite] = match suite {
        SuiteArg::Specfun => &[Suite::Specfun],
        SuiteArg::Eulermac => &[Suite::Eulermac],
        SuiteArg::Series => &[Suite::Series],
        SuiteArg::All => &Suite::ALL,
    };
    let checks: Vec<_> = suites
        .iter()
        .flat_map(|s| run_suite(*s, tol_scale))
        .collect();
    let failed = checks.iter().filter(|c| !c.pass).count();
    if format == Format::Text {
        for c in &checks {
            if c.pass {
                writeln!(out, "PASS {}/{}", c.suite.name(), c.name)
            } else {
                writeln!(
                    out,
                    "FAIL {}/{}: lhs = {}, rhs = {}, |lhs - rhs| = {}, bound = {}{}{}",
                    c.suite.name(),
                    c.name,
                    c.lhs,
                    c.rhs,
                    (c.lhs - c.rhs).abs(),
                    c.bound,
                    if c.detail.is_empty() { "" } else { "; " },
                    c.detail
                )
            }
            .map_err(io)?;
        }
        writeln!(out, "{} checks, {} failed", checks.len(), failed).map_err(io)?;
    } else {
        let rows: Vec<CheckRow> = checks.iter().map(CheckRow::from).collect();
        emit(&rows, format, CHECK_HEADER, out)?;
    }
    if failed > 0 {
        Err(CliError::Verification(failed))
    } else {
        Ok(())
    }
}

fn special(f: SpecialFn, z: f64, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = EvalConfig::default();
    let (name, v) = match f {
        SpecialFn::J1 => ("j1", j1(z, &cfg)?),
        SpecialFn::Y1 => ("y1", y1(z, &cfg)?),
        SpecialFn::K1 => ("k1", k1(z, &cfg)?),
        SpecialFn::I1 => ("i1", ramanujan_i1(z, &cfg)?),
        SpecialFn::Si => ("si", si(z, &cfg)?),
        SpecialFn::Ci => ("ci", ci(z, &cfg)?),
        SpecialFn::Berd => ("berd", ber_deriv(z, &cfg)?),
    };
    let row = SpecialRow {
        function: name.to_string(),
        arg: z,
        value: v.value,
        est_error: v.est_error,
        method: v.method.name().to_string(),
    };
    if format == Format::Text {
        writeln!(
            out,
            "{}({}) = {}\nest_error = {}\nmethod = {}",
            row.function, row.arg, row.value, row.est_error, row.method
        )
        .map_err(io)
    } else {
        emit(&[row], format, SPECIAL_HEADER, out)
    }
}

fn report(
    x: &str,
    series_n: usize,
    phi_k: u64,
    voronoi_n: usize,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let xd = parse_x(x)?;
    let xf = xd.to_f64();
    let exact = p_exact(&xd)?.remainder;
    let series = p_series(xf, &TruncationSpec::new(series_n, Averaging::Cesaro))?;
    let phi = phi_p_eval(&xd, phi_k)?.value;
    let vor = voronoi_circle(xf, voronoi_n, Averaging::Cesaro)?;
    let mut rows = vec![EstimateRow {
        quantity: "p_exact".into(),
        value: exact,
        est_error: 0.0,
        agrees: true,
    }];
    for (name, value, est) in [
        ("p_series", series.value, series.est_error),
        ("phi_p", phi.value, phi.est_error),
        ("voronoi", vor.value - PI * xf, vor.est_error),
    ] {
        rows.push(EstimateRow {
            quantity: name.into(),
            value,
            est_error: est,
            agrees: (value - exact).abs() <= est,
        });
    }
    emit(&rows, format, ESTIMATE_HEADER, out)?;
    if format == Format::Text {
        let verdict: Vec<String> = rows[1..]
            .iter()
            .map(|r| {
                format!(
                    "{}={}",
                    r.quantity,
                    if r.agrees { "agrees" } else { "disagrees" }
                )
            })
            .collect();
        writeln!(out, "verdict at x = {xd}: {}", verdict.join(" ")).map_err(io)?;
    }
    Ok(())
}
