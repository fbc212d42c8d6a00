//! Rendering of row sets as CSV, JSON or aligned text.

use std::fs::File;
use std::io::{BufWriter, Write};

use serde::Serialize;
use serde_json::Value;

use crate::{CliError, Format};

/// Writes `rows` in `format`. `header` is used for CSV when there are no
/// rows to take the field names from.
pub fn emit<T: Serialize>(
    rows: &[T],
    format: Format,
    header: &str,
    w: &mut dyn Write,
) -> Result<(), CliError> {
    let io = |e| CliError::io("<output>", e);
    match format {
        Format::Csv if rows.is_empty() => writeln!(w, "{header}").map_err(io)?,
        Format::Csv => crate::rows::write_csv(rows, &mut *w).map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(e) => io(e),
            other => CliError::Usage(format!("csv: {other:?}")),
        })?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, rows).map_err(|e| io(e.into()))?;
            writeln!(w).map_err(io)?;
        }
        Format::Text => write_table(rows, header, w).map_err(io)?,
    }
    Ok(())
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "NaN".to_string(),
        other => other.to_string(),
    }
}

fn write_table<T: Serialize>(rows: &[T], header: &str, w: &mut dyn Write) -> std::io::Result<()> {
    let names: Vec<String> = header.split(',').map(str::to_string).collect();
    let mut table = vec![names.clone()];
    for r in rows {
        let v = serde_json::to_value(r).map_err(std::io::Error::other)?;
        let obj = v.as_object().cloned().unwrap_or_default();
        table.push(
            names
                .iter()
                .map(|n| obj.get(n).map(cell).unwrap_or_default())
                .collect(),
        );
    }
    let widths: Vec<usize> = (0..names.len())
        .map(|c| table.iter().map(|r| r[c].len()).max().unwrap_or(0))
        .collect();
    for r in &table {
        let line: Vec<String> = r
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:>w$}"))
            .collect();
        writeln!(w, "{}", line.join("  ").trim_end())?;
    }
    Ok(())
}

/// Runs `body` against the file at `path`, or against `stdout` when absent.
pub fn with_sink(
    path: Option<&str>,
    stdout: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> Result<(), CliError>,
) -> Result<(), CliError> {
    match path {
        None => body(stdout),
        Some(p) => {
            let f = File::create(p).map_err(|e| CliError::io(p, e))?;
            let mut w = BufWriter::new(f);
            body(&mut w).map_err(|e| match e {
                CliError::Io { source, .. } => CliError::io(p, source),
                other => other,
            })?;
            w.flush().map_err(|e| CliError::io(p, e))
        }
    }
}
