//! Line-oriented text format.
//!
//! ```text
//! fcp <normalized|general> <n_rows> <n_cols>
//! b <n_rows values>          # general only
//! c <n_cols values>          # general only
//! <row> <col> <value>        # one line per entry, 0-based
//! ```
//!
//! `#` starts a comment. Values are written with the shortest decimal that
//! round-trips, so `parse_instance(serialize_instance(x)) == x` exactly.

use std::collections::HashSet;
use std::fmt::Write;
use std::str::FromStr;

use super::{GeneralInstance, Instance, NormalizedInstance, SparseNonNegMatrix, NORMALIZED_TOLERANCE};
use crate::error::{InstanceError, ParseError};

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or_else(|| ParseError::new(1, "missing header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (normalized, n_rows, n_cols) = match fields.as_slice() {
        ["fcp", kind, n, m] => {
            let normalized = match *kind {
                "normalized" => true,
                "general" => false,
                other => return Err(ParseError::new(header_line, format!("unknown instance kind '{other}'"))),
            };
            (normalized, number::<usize>(n, header_line)?, number::<usize>(m, header_line)?)
        }
        _ => return Err(ParseError::new(header_line, "malformed header, expected 'fcp <normalized|general> <n_rows> <n_cols>'")),
    };

    let mut vectors = None;
    if !normalized {
        let b = labelled_vector(lines.next(), "b", n_rows, header_line)?;
        let c = labelled_vector(lines.next(), "c", n_cols, header_line)?;
        vectors = Some((b, c));
    }

    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    for (line, content) in lines {
        let fields: Vec<&str> = content.split_whitespace().collect();
        let [r, c, v] = fields.as_slice() else {
            return Err(ParseError::new(line, "malformed entry, expected '<row> <col> <value>'"));
        };
        let (r, c, v) = (number::<usize>(r, line)?, number::<usize>(c, line)?, number::<f64>(v, line)?);
        if r >= n_rows || c >= n_cols {
            return Err(ParseError::new(
                line,
                format!("dimension mismatch: entry ({r}, {c}) outside {n_rows}x{n_cols}"),
            ));
        }
        if !v.is_finite() {
            return Err(ParseError::new(line, "non-finite entry"));
        }
        if v < 0.0 {
            return Err(ParseError::new(line, "negative entry"));
        }
        if !seen.insert((r, c)) {
            return Err(ParseError::new(line, "duplicate entry"));
        }
        if normalized && v > 0.0 && v < 1.0 - NORMALIZED_TOLERANCE {
            return Err(ParseError::new(line, format!("entry {v} in (0,1) in a normalized instance")));
        }
        entries.push((r, c, v));
    }

    let matrix = SparseNonNegMatrix::from_entries(n_rows, n_cols, entries)
        .map_err(|e| ParseError::new(header_line, e.to_string()))?;
    let at_header = |e: InstanceError| ParseError::new(header_line, e.to_string());
    match vectors {
        None => NormalizedInstance::new(matrix).map(Instance::Normalized).map_err(at_header),
        Some((b, c)) => GeneralInstance::new(matrix, b, c).map(Instance::General).map_err(at_header),
    }
}

fn number<T: FromStr>(s: &str, line: usize) -> Result<T, ParseError> {
    s.parse()
        .map_err(|_| ParseError::new(line, format!("malformed number '{s}'")))
}

fn labelled_vector(
    next: Option<(usize, &str)>,
    label: &str,
    len: usize,
    header_line: usize,
) -> Result<Vec<f64>, ParseError> {
    let (line, content) =
        next.ok_or_else(|| ParseError::new(header_line, format!("missing '{label}' line")))?;
    let mut fields = content.split_whitespace();
    if fields.next() != Some(label) {
        return Err(ParseError::new(line, format!("expected '{label}' line")));
    }
    let values = fields.map(|f| number::<f64>(f, line)).collect::<Result<Vec<_>, _>>()?;
    if values.len() != len {
        return Err(ParseError::new(
            line,
            format!("dimension mismatch: '{label}' has {} values, expected {len}", values.len()),
        ));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(ParseError::new(line, format!("negative or non-finite '{label}' value {v}")));
    }
    Ok(values)
}

pub fn serialize_instance(inst: &Instance) -> String {
    let matrix = inst.matrix();
    let mut out = String::new();
    let kind = match inst {
        Instance::General(_) => "general",
        Instance::Normalized(_) => "normalized",
    };
    writeln!(out, "fcp {kind} {} {}", matrix.n_rows(), matrix.n_cols()).unwrap();
    if let Instance::General(g) = inst {
        write_vector(&mut out, "b", g.b());
        write_vector(&mut out, "c", g.c());
    }
    for (i, j, v) in matrix.entries() {
        writeln!(out, "{i} {j} {v:?}").unwrap();
    }
    out
}

fn write_vector(out: &mut String, label: &str, v: &[f64]) {
    out.push_str(label);
    for x in v {
        write!(out, " {x:?}").unwrap();
    }
    out.push('\n');
}
