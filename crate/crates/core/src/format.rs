//! Plain-text matrix and triple files.
//!
//! Matrix file: a header line of point labels, then one row of rationals per
//! label (`3` or `3/2`). Triple file: one `x y z` triple per line. In both,
//! blank lines and lines starting with `#` are skipped.

use std::collections::BTreeSet;
use std::fmt;

use crate::betweenness::Betweenness;
use crate::error::Error;
use crate::matrix::DistanceMatrix;
use crate::points::Labels;
use crate::scalar::parse_rational;
use crate::{Rational, RationalMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    MissingHeader,
    DuplicateLabel(String),
    /// Not of the form `digits` or `digits/digits`.
    BadNumber(String),
    RowLength {
        expected: usize,
        got: usize,
    },
    MissingRows {
        expected: usize,
        got: usize,
    },
    TrailingContent,
    TripleArity(usize),
    UnknownLabel(String),
    RepeatedPoint(String),
    Shape(Error),
}

/// A parse failure with 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: ", self.line, self.column)?;
        match &self.kind {
            ParseErrorKind::MissingHeader => write!(f, "missing label header"),
            ParseErrorKind::DuplicateLabel(l) => write!(f, "duplicate label {l:?}"),
            ParseErrorKind::BadNumber(t) => {
                write!(
                    f,
                    "{t:?} is not a non-negative rational (use forms like 3 or 3/2)"
                )
            }
            ParseErrorKind::RowLength { expected, got } => {
                write!(f, "row has {got} entries, expected {expected}")
            }
            ParseErrorKind::MissingRows { expected, got } => {
                write!(f, "found {got} rows, expected {expected}")
            }
            ParseErrorKind::TrailingContent => write!(f, "unexpected content after the last row"),
            ParseErrorKind::TripleArity(k) => write!(f, "expected 3 labels, found {k}"),
            ParseErrorKind::UnknownLabel(l) => write!(f, "unknown label {l:?}"),
            ParseErrorKind::RepeatedPoint(l) => write!(f, "point {l:?} repeated within a triple"),
            ParseErrorKind::Shape(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ParseError {}

/// Non-comment lines as `(line_number, [(column, token)])`.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<(usize, &str)>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            return None;
        }
        Some((i + 1, tokens(line)))
    })
}

fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<RationalMatrix, ParseError> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines.next().ok_or(ParseError {
        line: 1,
        column: 1,
        kind: ParseErrorKind::MissingHeader,
    })?;
    let mut names: Vec<String> = Vec::new();
    for &(col, tok) in &header {
        if names.iter().any(|n| n == tok) {
            return Err(ParseError {
                line: header_line,
                column: col,
                kind: ParseErrorKind::DuplicateLabel(tok.to_string()),
            });
        }
        names.push(tok.to_string());
    }
    let n = names.len();
    let labels = Labels::new(names).expect("duplicates checked above");
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(n);
    let mut last_line = header_line;
    for (line_no, toks) in lines {
        if rows.len() == n {
            return Err(ParseError {
                line: line_no,
                column: 1,
                kind: ParseErrorKind::TrailingContent,
            });
        }
        if toks.len() != n {
            let column = toks.get(n).map_or(1, |t| t.0);
            return Err(ParseError {
                line: line_no,
                column,
                kind: ParseErrorKind::RowLength {
                    expected: n,
                    got: toks.len(),
                },
            });
        }
        let mut row = Vec::with_capacity(n);
        for (col, tok) in toks {
            let value = parse_rational(tok).ok_or_else(|| ParseError {
                line: line_no,
                column: col,
                kind: ParseErrorKind::BadNumber(tok.to_string()),
            })?;
            row.push(value);
        }
        rows.push(row);
        last_line = line_no;
    }
    if rows.len() != n {
        return Err(ParseError {
            line: last_line,
            column: 1,
            kind: ParseErrorKind::MissingRows {
                expected: n,
                got: rows.len(),
            },
        });
    }
    DistanceMatrix::new(labels, rows).map_err(|e| ParseError {
        line: header_line,
        column: 1,
        kind: ParseErrorKind::Shape(e),
    })
}

/// Serializes a matrix so that [`parse_matrix`] reads it back unchanged.
pub fn write_matrix<T: crate::scalar::Scalar + fmt::Display>(m: &DistanceMatrix<T>) -> String {
    let n = m.n();
    let cells: Vec<Vec<String>> = (0..n)
        .map(|i| m.row(i).iter().map(|v| v.to_string()).collect())
        .collect();
    let width = cells
        .iter()
        .flatten()
        .map(String::len)
        .chain(m.labels().as_slice().iter().map(String::len))
        .max()
        .unwrap_or(1);
    let mut out = String::new();
    let pad = |out: &mut String, items: &mut dyn Iterator<Item = &str>| {
        let line: Vec<String> = items.map(|s| format!("{s:>width$}")).collect();
        out.push_str(line.join(" ").trim_end());
        out.push('\n');
    };
    pad(
        &mut out,
        &mut m.labels().as_slice().iter().map(String::as_str),
    );
    for row in &cells {
        pad(&mut out, &mut row.iter().map(String::as_str));
    }
    out
}

pub fn parse_triples(text: &str, labels: &Labels) -> Result<Betweenness, ParseError> {
    let n = labels.len();
    let mut b = Betweenness::from_triples(n, []).map_err(|e| ParseError {
        line: 1,
        column: 1,
        kind: ParseErrorKind::Shape(e),
    })?;
    for (line_no, toks) in content_lines(text) {
        if toks.len() != 3 {
            return Err(ParseError {
                line: line_no,
                column: toks.get(3).map_or(1, |t| t.0),
                kind: ParseErrorKind::TripleArity(toks.len()),
            });
        }
        let mut idx = [0usize; 3];
        for (k, &(col, tok)) in toks.iter().enumerate() {
            idx[k] = labels.index_of(tok).ok_or_else(|| ParseError {
                line: line_no,
                column: col,
                kind: ParseErrorKind::UnknownLabel(tok.to_string()),
            })?;
            if idx[..k].contains(&idx[k]) {
                return Err(ParseError {
                    line: line_no,
                    column: col,
                    kind: ParseErrorKind::RepeatedPoint(tok.to_string()),
                });
            }
        }
        b.insert((idx[0], idx[1], idx[2]));
    }
    Ok(b)
}

/// Distinct labels mentioned in a triple file, sorted.
pub fn labels_in_triples(text: &str) -> Vec<String> {
    content_lines(text)
        .flat_map(|(_, toks)| toks.into_iter().map(|(_, t)| t.to_string()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

pub fn write_triples(b: &Betweenness, labels: &Labels) -> String {
    b.iter()
        .map(|(x, y, z)| format!("{} {} {}\n", labels.name(x), labels.name(y), labels.name(z)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::rational_from_i64;
    use proptest::prelude::*;

    #[test]
    fn parses_q4_fixture() {
        let m = parse_matrix(fixtures::Q4_MATRIX).unwrap();
        let l = m.labels();
        let (p, r) = (l.index_of("p").unwrap(), l.index_of("r").unwrap());
        assert_eq!(*m.get(p, r), rational_from_i64(3));
        assert_eq!(*m.get(r, p), rational_from_i64(1));
    }

    #[test]
    fn parses_two_point_metric() {
        let m = parse_matrix("a b\n0 1\n1 0").unwrap();
        assert_eq!(m.n(), 2);
        assert!(crate::matrix::validate_quasi_metric(&m).is_ok());
    }

    #[test]
    fn rejects_decimal_tokens() {
        let err = parse_matrix("a b\n0 0.5\n1 0").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::BadNumber("0.5".into()));
        assert_eq!((err.line, err.column), (2, 3));
    }

    #[test]
    fn matrix_diagnostics() {
        let err = parse_matrix("a b a\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::DuplicateLabel("a".into()));
        assert_eq!(err.column, 5);
        let err = parse_matrix("a b\n0 1 2\n1 0\n").unwrap_err();
        assert_eq!(
            err.kind,
            ParseErrorKind::RowLength {
                expected: 2,
                got: 3
            }
        );
        let err = parse_matrix("a b\n0 1\n").unwrap_err();
        assert_eq!(
            err.kind,
            ParseErrorKind::MissingRows {
                expected: 2,
                got: 1
            }
        );
        let err = parse_matrix("a b\n0 1\n1 0\n1 1\n").unwrap_err();
        assert_eq!((err.line, err.kind), (4, ParseErrorKind::TrailingContent));
        assert_eq!(
            parse_matrix("# nothing\n").unwrap_err().kind,
            ParseErrorKind::MissingHeader
        );
        let err = parse_matrix("a\n0\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Shape(Error::TooFewPoints(1)));
    }

    #[test]
    fn parses_q4_triples() {
        let labels = Labels::new(["p", "q", "r", "s"]).unwrap();
        let b = parse_triples("p q r\nr p q\ns q p\nq p s", &labels).unwrap();
        let expected =
            Betweenness::from_triples(4, [(0, 1, 2), (2, 0, 1), (3, 1, 0), (1, 0, 3)]).unwrap();
        assert_eq!(b, expected);
    }

    #[test]
    fn triple_edge_cases() {
        let labels = Labels::alphabetic(3);
        assert!(parse_triples("", &labels).unwrap().is_empty());
        let dup = parse_triples("a b c\n# again\na b c\n", &labels).unwrap();
        assert_eq!(dup.len(), 1);
        let err = parse_triples("a a b", &labels).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::RepeatedPoint("a".into()));
        let err = parse_triples("a b z", &labels).unwrap_err();
        assert_eq!(
            (err.column, err.kind),
            (5, ParseErrorKind::UnknownLabel("z".into()))
        );
        let err = parse_triples("a b", &labels).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::TripleArity(2));
    }

    #[test]
    fn infers_sorted_labels() {
        assert_eq!(
            labels_in_triples(fixtures::Q4_TRIPLES),
            vec!["p", "q", "r", "s"]
        );
    }

    proptest! {
        #[test]
        fn matrix_round_trip(entries in prop::collection::vec((0u32..50, 1u32..9), 16)) {
            let values: Vec<Rational> = entries
                .iter()
                .map(|&(a, b)| Rational::new(a.into(), b.into()))
                .collect();
            let m = DistanceMatrix::from_entries(Labels::new(["w", "x", "yy", "z"]).unwrap(), values).unwrap();
            let text = write_matrix(&m);
            prop_assert_eq!(parse_matrix(&text).unwrap(), m);
        }

        #[test]
        fn triples_round_trip(bits in 0u128..(1 << 24)) {
            let labels = Labels::new(["p", "q", "r", "s"]).unwrap();
            let b = Betweenness::from_encoding(4, bits);
            prop_assert_eq!(parse_triples(&write_triples(&b, &labels), &labels).unwrap(), b);
        }
    }
}
