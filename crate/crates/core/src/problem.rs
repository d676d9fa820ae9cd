//! Problem files: `key = value` header lines, then a `matrix:` block with one
//! row per line and entries separated by `;`.
//!
//! ```text
//! # heat equation on the unit torus
//! dimension = 2
//! period = 1 0; 0 1
//! window = 2
//! matrix:
//! t - x1^2 - x2^2
//! ```
//!
//! Recognised keys: `dimension` (required), `period` (rows separated by `;`,
//! default the identity), `window`, `symbolic` (`off | basic | d1`),
//! `horizon`, `samples`. `#` starts a comment.

use num_rational::BigRational;

use crate::analyzer::SymbolicLevel;
use crate::error::{AnalysisError, ProblemError};
use crate::lattice::PeriodLattice;
use crate::matrix::Matrix;
use crate::parse::{parse_poly, parse_rational};
use crate::PolyMatrix;

/// Options a problem file may set; unset fields fall back to the caller's defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProblemOptions {
    pub window: Option<u32>,
    pub symbolic: Option<SymbolicLevel>,
    pub horizon: Option<f64>,
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemFile {
    pub dimension: usize,
    pub lattice: PeriodLattice,
    pub matrix: PolyMatrix,
    pub options: ProblemOptions,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ProblemError {
    ProblemError {
        line,
        column,
        message: message.into(),
    }
}

/// Byte offset to 1-based character column.
fn column_of(line: &str, byte: usize) -> usize {
    line[..byte].chars().count() + 1
}

/// Strip a trailing comment.
fn content(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

/// Split on `;`, yielding each piece with its starting byte offset.
fn split_entries(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in line.char_indices() {
        if c == ';' {
            out.push((start, &line[start..i]));
            start = i + 1;
        }
    }
    out.push((start, &line[start..]));
    out
}

fn leading_ws(s: &str) -> usize {
    s.len() - s.trim_start().len()
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, ProblemError> {
    let mut dimension: Option<usize> = None;
    let mut period: Option<(usize, Vec<Vec<BigRational>>)> = None;
    let mut options = ProblemOptions::default();
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut matrix_line = None;

    for (no, raw) in lines.by_ref() {
        let line = content(raw);
        if line.trim().is_empty() {
            continue;
        }
        if line.trim() == "matrix:" {
            matrix_line = Some(no);
            break;
        }
        let Some(eq) = line.find('=') else {
            return Err(err(no, leading_ws(line) + 1, "expected `key = value` or `matrix:`"));
        };
        let key = line[..eq].trim();
        let value_start = eq + 1 + leading_ws(&line[eq + 1..]);
        let value = line[value_start..].trim_end();
        let vcol = column_of(line, value_start);
        match key {
            "dimension" => dimension = Some(parse_number(value, no, vcol)?),
            "window" => options.window = Some(parse_number(value, no, vcol)?),
            "samples" => options.samples = Some(parse_number(value, no, vcol)?),
            "horizon" => {
                let h: f64 = value
                    .parse()
                    .map_err(|_| err(no, vcol, format!("`{value}` is not a number")))?;
                if !(h > 0.0 && h.is_finite()) {
                    return Err(err(no, vcol, "horizon must be positive"));
                }
                options.horizon = Some(h);
            }
            "symbolic" => options.symbolic = Some(value.parse().map_err(|e: String| err(no, vcol, e))?),
            "period" => period = Some((no, parse_period(line, value_start, no)?)),
            other => {
                return Err(err(
                    no,
                    column_of(line, leading_ws(line)),
                    format!("unknown key `{other}`"),
                ));
            }
        }
    }

    let Some(header_end) = matrix_line else {
        return Err(err(text.lines().count().max(1), 1, "missing `matrix:` block"));
    };
    let Some(d) = dimension else {
        return Err(err(header_end, 1, "missing `dimension`"));
    };

    let lattice = match period {
        None => PeriodLattice::identity(d),
        Some((no, rows)) => {
            let cols = rows.first().map_or(0, Vec::len);
            if rows.len() != d || rows.iter().any(|r| r.len() != cols) || cols != d {
                return Err(err(no, 1, format!("period matrix must be {d}x{d}")));
            }
            let a = Matrix::from_rows(d, rows);
            PeriodLattice::new(a).map_err(|e| match e {
                AnalysisError::SingularPeriod => err(no, 1, "period matrix not invertible"),
                other => err(no, 1, other.to_string()),
            })?
        }
    };

    let mut rows: Vec<Vec<_>> = Vec::new();
    for (no, raw) in lines {
        let line = content(raw);
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for (start, entry) in split_entries(line) {
            let p =
                parse_poly(entry, d).map_err(|e| err(no, column_of(line, start) + e.column - 1, e.kind.to_string()))?;
            row.push(p);
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(err(
                    no,
                    1,
                    format!("row has {} entries, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(err(header_end, 1, "empty matrix block"));
    }
    let cols = rows[0].len();
    Ok(ProblemFile {
        dimension: d,
        lattice,
        matrix: Matrix::from_rows(cols, rows),
        options,
    })
}

fn parse_number<N: std::str::FromStr>(value: &str, line: usize, column: usize) -> Result<N, ProblemError> {
    value
        .parse()
        .map_err(|_| err(line, column, format!("`{value}` is not a nonnegative integer")))
}

fn parse_period(line: &str, start: usize, no: usize) -> Result<Vec<Vec<BigRational>>, ProblemError> {
    let body = &line[start..];
    let mut rows = Vec::new();
    for (off, row) in split_entries(body) {
        let mut entries = Vec::new();
        let mut pos = 0;
        for tok in row.split(|c: char| c.is_whitespace() || c == ',') {
            let at = start + off + pos;
            pos += tok.len() + 1;
            if tok.is_empty() {
                continue;
            }
            let q = parse_rational(tok).ok_or_else(|| {
                err(
                    no,
                    column_of(line, at),
                    format!("period entry `{tok}` is not an exact rational"),
                )
            })?;
            entries.push(q);
        }
        rows.push(entries);
    }
    Ok(rows)
}

/// Canonical text of a problem: re-parses to the same matrix and lattice.
pub fn render_problem(p: &ProblemFile) -> String {
    let mut out = format!("dimension = {}\n", p.dimension);
    let a = p.lattice.period_matrix();
    let rows: Vec<String> = (0..a.rows())
        .map(|i| a.row(i).iter().map(|q| q.to_string()).collect::<Vec<_>>().join(" "))
        .collect();
    out.push_str(&format!("period = {}\n", rows.join("; ")));
    if let Some(w) = p.options.window {
        out.push_str(&format!("window = {w}\n"));
    }
    if let Some(s) = p.options.symbolic {
        out.push_str(&format!("symbolic = {s}\n"));
    }
    if let Some(h) = p.options.horizon {
        out.push_str(&format!("horizon = {h}\n"));
    }
    if let Some(n) = p.options.samples {
        out.push_str(&format!("samples = {n}\n"));
    }
    out.push_str("matrix:\n");
    for i in 0..p.matrix.rows() {
        let row: Vec<String> = p.matrix.row(i).iter().map(|e| e.to_string()).collect();
        out.push_str(&row.join("; "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    #[test]
    fn diffusion_file() {
        let p = parse_problem(
            "# heat\ndimension = 2\nperiod = 1 0; 0 1\nwindow = 2\nsymbolic = d1\n\nmatrix:\nt - x1^2 - x2^2\n",
        )
        .unwrap();
        assert_eq!(p.dimension, 2);
        assert_eq!(p.matrix.rows(), 1);
        assert_eq!(p.matrix[(0, 0)].to_string(), "-x1^2 - x2^2 + t");
        assert_eq!(p.options.window, Some(2));
        assert_eq!(p.options.symbolic, Some(SymbolicLevel::D1));
        assert_eq!(p.lattice, PeriodLattice::identity(2));
    }

    #[test]
    fn rational_periods_and_multirow() {
        let p = parse_problem("dimension = 1\nperiod = 3/2\nmatrix:\nt; 1\nx1; t^2 # trailing comment\n").unwrap();
        assert_eq!(p.lattice.period_matrix()[(0, 0)], rational(3, 2));
        assert_eq!((p.matrix.rows(), p.matrix.cols()), (2, 2));
    }

    #[test]
    fn errors_are_located() {
        let e = parse_problem("dimension = 2\nperiod = 1 2; 2 4\nmatrix:\nt\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.contains("period matrix not invertible"));

        let e = parse_problem("dimension = 1\nmatrix:\nt; x2 + 1\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 4));
        assert!(e.message.contains("x2"));

        let e = parse_problem("dimension = 1\nperiod = pi\nmatrix:\nt\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 10));

        let e = parse_problem("dimension = 1\nmatrix:\nt; 1\nt\n").unwrap_err();
        assert_eq!(e.line, 4);

        assert!(parse_problem("dimension = 1\n").is_err());
        assert!(parse_problem("matrix:\nt\n").is_err());
        assert!(parse_problem("dimension = 1\ncolour = red\nmatrix:\nt\n").is_err());
        assert!(parse_problem("dimension = 1\nsymbolic = full\nmatrix:\nt\n").is_err());
        assert!(parse_problem("dimension = 2\nperiod = 1 0\nmatrix:\nt\n").is_err());
    }

    #[test]
    fn render_round_trips() {
        let text = "dimension = 2\nperiod = 2 1/3; 0 1\nhorizon = 2.5\nmatrix:\n(x1 - 10*i*pi)*t; 1\n-x2^2; t\n";
        let p = parse_problem(text).unwrap();
        let again = parse_problem(&render_problem(&p)).unwrap();
        assert_eq!(p, again);
    }
}
