//! Text formats for matrices, quivers and TSV reports.

use std::fmt::Write as _;

use gkm_core::cartan::{validate, CartanMatrix, Quiver, ValidationError};
use gkm_core::field::FiniteField;
use gkm_core::report::Report;
use thiserror::Error;

/// A malformed input file; `line` is 1-based, 0 when the file as a whole is at fault.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }
}

/// Non-blank lines that are not comments, with their line numbers.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Reads the integer rows of a matrix file without checking the matrix conditions.
pub fn parse_matrix_rows(text: &str) -> Result<Vec<Vec<i64>>, ParseError> {
    let mut lines = data_lines(text);
    let (first, header) = lines.next().ok_or_else(|| ParseError::new(0, "empty matrix file"))?;
    let n: usize = header
        .parse()
        .map_err(|_| ParseError::new(first, format!("expected the matrix size, found {header:?}")))?;
    if n == 0 {
        return Err(ParseError::new(first, "matrix size must be positive"));
    }
    let mut rows = Vec::with_capacity(n);
    let mut last = first;
    for (line, text) in lines {
        if rows.len() == n {
            return Err(ParseError::new(line, format!("extra data after {n} rows")));
        }
        let row = text
            .split_whitespace()
            .map(|t| t.parse::<i64>().map_err(|_| ParseError::new(line, format!("not an integer: {t:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != n {
            return Err(ParseError::new(line, format!("row has {} entries, expected {n}", row.len())));
        }
        rows.push(row);
        last = line;
    }
    if rows.len() < n {
        return Err(ParseError::new(last, format!("expected {n} rows, found {}", rows.len())));
    }
    Ok(rows)
}

/// Reads and validates a matrix file. Condition violations are reported
/// against the line of the offending row.
pub fn parse_matrix(text: &str) -> Result<CartanMatrix, ParseError> {
    let rows = parse_matrix_rows(text)?;
    validate(&rows).map_err(|e| match &e {
        ValidationError::Violations(vs) => {
            let line = row_line(text, vs[0].row);
            ParseError::new(line, e.to_string())
        }
        _ => ParseError::new(0, e.to_string()),
    })
}

fn row_line(text: &str, row: usize) -> usize {
    data_lines(text).nth(row + 1).map_or(0, |(l, _)| l)
}

pub fn format_matrix(rows: &[Vec<i64>]) -> String {
    let mut out = format!("{}\n", rows.len());
    for r in rows {
        let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

/// Reads `v <name>` and `a <name> <source> <target>` lines.
pub fn parse_quiver(text: &str) -> Result<Quiver, ParseError> {
    let mut q = Quiver::new();
    for (line, text) in data_lines(text) {
        let fields: Vec<&str> = text.split_whitespace().collect();
        match fields.as_slice() {
            ["v", name] => {
                q.add_vertex(name).map_err(|e| ParseError::new(line, e.to_string()))?;
            }
            ["a", name, source, target] => {
                q.add_arrow(name, source, target).map_err(|e| ParseError::new(line, e.to_string()))?;
            }
            ["v", ..] => return Err(ParseError::new(line, "expected `v <name>`")),
            ["a", ..] => return Err(ParseError::new(line, "expected `a <name> <source> <target>`")),
            _ => return Err(ParseError::new(line, format!("unrecognized line {text:?}"))),
        }
    }
    if q.vertices().is_empty() {
        return Err(ParseError::new(0, "quiver has no vertices"));
    }
    Ok(q)
}

pub fn format_quiver(q: &Quiver) -> String {
    let mut out = String::new();
    for v in q.vertices() {
        let _ = writeln!(out, "v {v}");
    }
    for a in q.arrows() {
        let _ = writeln!(out, "a {} {} {}", a.name, q.vertices()[a.source], q.vertices()[a.target]);
    }
    out
}

/// `p^r` or a bare prime `p`.
pub fn parse_field(s: &str) -> Result<FiniteField, String> {
    let (p, r) = match s.split_once('^') {
        Some((p, r)) => (p, r),
        None => (s, "1"),
    };
    let p: u32 = p.trim().parse().map_err(|_| format!("bad characteristic in field {s:?}"))?;
    let r: u32 = r.trim().parse().map_err(|_| format!("bad exponent in field {s:?}"))?;
    FiniteField::new(p, r).map_err(|e| e.to_string())
}

/// Comma-separated dimension vector.
pub fn parse_dims(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| format!("bad dimension {t:?} in {s:?}")))
        .collect()
}

pub const REPORT_HEADER: &str = "relation-id\tfield\tparams\tverdict\twitness";

pub fn format_report(report: &Report) -> String {
    let mut out = String::from(REPORT_HEADER);
    out.push('\n');
    for r in &report.rows {
        let witness = r.witness.as_deref().unwrap_or("-");
        let _ = writeln!(out, "{}\t{}\t{}\t{}\t{}", r.id, r.field, r.params, r.verdict, clean(witness));
    }
    out
}

fn clean(s: &str) -> String {
    s.replace(['\t', '\n'], " ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_examples() {
        let a2 = parse_matrix("2\n2 -1\n-1 2").unwrap();
        assert_eq!(a2.rows(), vec![vec![2, -1], vec![-1, 2]]);
        let commented = parse_matrix("# A2\n\n2\n2 -1\n# middle\n-1 2\n").unwrap();
        assert_eq!(commented, a2);
        assert_eq!(format_matrix(&a2.rows()), "2\n2 -1\n-1 2\n");
    }

    #[test]
    fn matrix_errors_name_lines() {
        assert_eq!(parse_matrix("2\n2 -1\n-1").unwrap_err().line, 3);
        assert_eq!(parse_matrix("2\n2 x\n-1 2").unwrap_err().line, 2);
        assert_eq!(parse_matrix("two").unwrap_err().line, 1);
        assert_eq!(parse_matrix("2\n2 -1\n").unwrap_err().line, 2);
        assert_eq!(parse_matrix("1\n2\n2").unwrap_err().line, 3);
        let bad = parse_matrix("# c\n2\n2 -1\n0 2\n").unwrap_err();
        assert_eq!(bad.line, 3);
        assert!(bad.message.contains("BC3"));
    }

    #[test]
    fn quiver_examples() {
        let q = parse_quiver("v 1\nv 2\na x 1 2").unwrap();
        assert_eq!(q, Quiver::a2());
        assert_eq!(format_quiver(&q), "v 1\nv 2\na x 1 2\n");
        let doubled = format_quiver(&Quiver::a2().product_with_kronecker());
        assert_eq!(format_quiver(&parse_quiver(&doubled).unwrap()), doubled);
        let c = format_matrix(&parse_matrix("2\n2 -1\n-1 2").unwrap().double().rows());
        assert_eq!(format_matrix(&parse_matrix(&c).unwrap().rows()), c);
        let missing = parse_quiver("v 1\na x 1 2\n").unwrap_err();
        assert_eq!(missing.line, 2);
        assert!(missing.message.contains("unknown vertex 2"));
        assert_eq!(parse_quiver("v 1\nv 1").unwrap_err().line, 2);
        assert_eq!(parse_quiver("v 1\nx").unwrap_err().line, 2);
        assert_eq!(parse_quiver("v 1\na x 1").unwrap_err().line, 2);
    }

    #[test]
    fn fields_and_dims() {
        assert_eq!(parse_field("2^2").unwrap().order(), 4);
        assert_eq!(parse_field("5").unwrap().order(), 5);
        assert!(parse_field("4^1").is_err());
        assert!(parse_field("3^").is_err());
        assert_eq!(parse_dims("2, 1").unwrap(), vec![2, 1]);
        assert!(parse_dims("2,-1").is_err());
    }
}
