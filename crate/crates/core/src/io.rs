//! Matrix files, run configuration and JSON reports.
//!
//! A matrix file starts with a header line `rows cols real|complex`,
//! followed by whitespace-separated entries in row-major order. A complex
//! entry is written as the pair `re im`.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::error::{GenInvError, Result};
use crate::inverse::InverseCertificate;
use crate::kernel::{self, Matrix, ToleranceConfig, C64};

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Real,
    Complex,
}

struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

fn tokens(text: &str) -> (Vec<Token<'_>>, (usize, usize)) {
    let mut out = Vec::new();
    let mut end = (1, 1);
    for (i, line) in text.lines().enumerate() {
        let mut start = None;
        for (col, (byte, ch)) in line.char_indices().enumerate() {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some((byte, col)),
                (true, Some((b, c))) => {
                    out.push(Token {
                        text: &line[b..byte],
                        line: i + 1,
                        column: c + 1,
                    });
                    start = None;
                }
                _ => {}
            }
        }
        if let Some((b, c)) = start {
            out.push(Token {
                text: &line[b..],
                line: i + 1,
                column: c + 1,
            });
        }
        end = (i + 1, line.chars().count() + 1);
    }
    (out, end)
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> GenInvError {
    GenInvError::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn header_value(tok: Option<&Token<'_>>, what: &str, end: (usize, usize)) -> Result<usize> {
    let tok = tok.ok_or_else(|| parse_error(end.0, end.1, format!("missing {what} in header")))?;
    tok.text.parse().map_err(|_| {
        parse_error(
            tok.line,
            tok.column,
            format!("invalid {what} '{}'", tok.text),
        )
    })
}

/// Parses the matrix file format.
pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let (toks, end) = tokens(text);
    let Some(first) = toks.first() else {
        return Err(parse_error(1, 1, "missing header"));
    };
    let header_line = first.line;
    let header: Vec<&Token<'_>> = toks.iter().take_while(|t| t.line == header_line).collect();
    let header_end = (
        header_line,
        header.last().map_or(1, |t| t.column + t.text.len()),
    );
    let rows = header_value(header.first().copied(), "row count", header_end)?;
    let cols = header_value(header.get(1).copied(), "column count", header_end)?;
    let field = match header.get(2) {
        Some(t) if t.text == "real" => Field::Real,
        Some(t) if t.text == "complex" => Field::Complex,
        Some(t) => {
            return Err(parse_error(
                t.line,
                t.column,
                format!("expected 'real' or 'complex', found '{}'", t.text),
            ))
        }
        None => {
            return Err(parse_error(
                header_end.0,
                header_end.1,
                "missing field in header",
            ))
        }
    };
    if let Some(t) = header.get(3) {
        return Err(parse_error(t.line, t.column, "unexpected token in header"));
    }

    let body = &toks[header.len()..];
    let per_entry = if field == Field::Complex { 2 } else { 1 };
    let entries = rows
        .checked_mul(cols)
        .ok_or_else(|| parse_error(first.line, first.column, "matrix too large"))?;
    let expected = entries * per_entry;
    if body.len() != expected {
        let found = body.len() / per_entry;
        let message = if body.len() % per_entry == 0 {
            format!("expected {entries} entries, found {found}")
        } else {
            format!("expected {entries} entries, found {found} and an incomplete complex entry")
        };
        let (line, column) = body.get(expected).map_or(end, |t| (t.line, t.column));
        return Err(parse_error(line, column, message));
    }
    let mut values = Vec::with_capacity(expected);
    for t in body {
        let v: f64 = t
            .text
            .parse()
            .map_err(|_| parse_error(t.line, t.column, format!("invalid number '{}'", t.text)))?;
        if !v.is_finite() {
            return Err(parse_error(
                t.line,
                t.column,
                format!("non-finite entry '{}'", t.text),
            ));
        }
        values.push(v);
    }
    Ok(Matrix::from_fn(rows, cols, |i, j| {
        let k = (i * cols + j) * per_entry;
        match field {
            Field::Real => C64::new(values[k], 0.0),
            Field::Complex => C64::new(values[k], values[k + 1]),
        }
    }))
}

pub fn read_matrix(path: &Path) -> Result<Matrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| GenInvError::Io(format!("{}: {e}", path.display())))?;
    parse_matrix(&text).map_err(|e| match e {
        GenInvError::Parse {
            line,
            column,
            message,
        } => GenInvError::Parse {
            line,
            column,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

/// Writes the matrix file format with 17 significant digits, which parses
/// back to the same values. Matrices with zero imaginary parts are written
/// as real.
pub fn serialize_matrix(m: &Matrix) -> String {
    let real = kernel::is_real(m);
    let mut out = format!(
        "{} {} {}\n",
        m.nrows(),
        m.ncols(),
        if real { "real" } else { "complex" }
    );
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|j| {
                let z = m[(i, j)];
                if real {
                    format!("{:.16e}", z.re)
                } else {
                    format!("{:.16e} {:.16e}", z.re, z.im)
                }
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn write_matrix(path: &Path, m: &Matrix) -> Result<()> {
    std::fs::write(path, serialize_matrix(m))
        .map_err(|e| GenInvError::Io(format!("{}: {e}", path.display())))
}

/// Nested row arrays; complex entries become `[re, im]` pairs.
pub fn matrix_json(m: &Matrix) -> Value {
    let real = kernel::is_real(m);
    Value::Array(
        m.row_iter()
            .map(|row| {
                Value::Array(
                    row.iter()
                        .map(|z| {
                            if real {
                                json!(z.re)
                            } else {
                                json!([z.re, z.im])
                            }
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn certificate_json(cert: &InverseCertificate) -> Value {
    let residuals: Map<String, Value> = cert
        .residuals
        .iter()
        .map(|(name, r)| {
            (
                (*name).to_string(),
                json!({"value": r.value, "scale": r.scale, "relative": r.relative()}),
            )
        })
        .collect();
    json!({
        "kind": cert.kind.as_str(),
        "inverse": matrix_json(&cert.inverse),
        "residuals": residuals,
        "restricted_condition": cert.restricted_condition,
        "range_gap": cert.range_gap,
        "nullspace_gap": cert.nullspace_gap,
        "complement_margin": cert.complement_margin,
        "scale": cert.scale,
        "range_dim": cert.problem.range.dim(),
        "nullspace_dim": cert.problem.nullspace.dim(),
    })
}

/// `{"error", "clause", "margin"}` with null for absent parts.
pub fn error_json(err: &GenInvError) -> Value {
    json!({
        "schema": SCHEMA_VERSION,
        "error": err.to_string(),
        "clause": err.clause(),
        "margin": err.margin(),
    })
}

/// Settings shared by every CLI subcommand.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub tol: ToleranceConfig,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// Defaults with the given overrides applied and validated.
    pub fn new(
        rank_rel_tol: Option<f64>,
        residual_tol: Option<f64>,
        fd_step_sweep: Option<Vec<f64>>,
        seed: Option<u64>,
        out: Option<PathBuf>,
    ) -> Result<Self> {
        let d = ToleranceConfig::default();
        let tol = ToleranceConfig::new(
            rank_rel_tol.unwrap_or(d.rank_rel_tol),
            residual_tol.unwrap_or(d.residual_tol),
            fd_step_sweep.unwrap_or(d.fd_step_sweep),
        )?;
        Ok(RunConfig {
            tol,
            seed: seed.unwrap_or(0),
            out,
        })
    }

    /// Writes `report` as pretty JSON to the output path or stdout.
    pub fn emit(&self, report: &Value) -> Result<()> {
        let mut text =
            serde_json::to_string_pretty(report).map_err(|e| GenInvError::Io(e.to_string()))?;
        text.push('\n');
        match &self.out {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| GenInvError::Io(format!("{}: {e}", path.display()))),
            None => std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| GenInvError::Io(e.to_string())),
        }
    }
}

/// A report object with the schema version and command name filled in.
pub fn report(command: &str, body: Value) -> Value {
    let mut map = Map::new();
    map.insert("schema".into(), json!(SCHEMA_VERSION));
    map.insert("command".into(), json!(command));
    if let Value::Object(fields) = body {
        map.extend(fields);
    }
    Value::Object(map)
}
