//! Command-line front end for `circlelab-core`: exact counts, special
//! functions, the identity batteries, and the remainder scans.
//!
//! Exit codes: 0 success, 1 verification or numerical failure, 2 usage error
//! (including arguments outside a function's domain), 3 I/O error.

mod args;
mod commands;
pub mod output;
pub mod rows;
pub mod scan;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use args::{Cli, Command, Format};

/// Environment variable overriding the global term budget.
pub const MAX_TERMS_ENV: &str = "CIRCLELAB_MAX_TERMS";

/// Distance by which grid points are moved off the integers.
pub const EPSILON_SHIFT: &str = "0.000001";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Numeric(#[from] circlelab_core::Error),
    #[error("{0} check(s) failed")]
    Verification(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use circlelab_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Numeric(E::Domain { .. } | E::Overflow { .. } | E::Decimal(_)) => 2,
            CliError::Numeric(_) | CliError::Verification(_) => 1,
        }
    }

    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

/// Parses `argv` and runs the command, writing results to `out` and
/// diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let result = apply_env().and_then(|()| commands::dispatch(&cli.command, out, err));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn apply_env() -> Result<(), CliError> {
    match std::env::var(MAX_TERMS_ENV) {
        Ok(v) => {
            let n: usize = v.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| {
                CliError::Usage(format!(
                    "{MAX_TERMS_ENV} must be a positive integer, got {v:?}"
                ))
            })?;
            circlelab_core::config::set_max_terms(Some(n));
        }
        Err(std::env::VarError::NotPresent) => circlelab_core::config::set_max_terms(None),
        Err(e) => return Err(CliError::Usage(format!("{MAX_TERMS_ENV}: {e}"))),
    }
    Ok(())
}
