//! Embedded reference data: the four-point space Q(4) and the three-point line table.

use crate::betweenness::Betweenness;
use crate::format::{parse_matrix, parse_triples};
use crate::RationalMatrix;

/// Q(4), rows and columns in the order `p s q r`.
pub const Q4_MATRIX: &str = "\
# Q(4): a quasi-metric space on four points with three lines, none universal
p s q r
0 1 1 3
3 0 2 3
1 2 0 2
1 1 2 0
";

/// Betweenness of Q(4).
pub const Q4_TRIPLES: &str = "\
p q r
r p q
s q p
q p s
";

pub fn q4_matrix() -> RationalMatrix {
    parse_matrix(Q4_MATRIX).expect("embedded Q(4) fixture parses")
}

/// B(Q(4)) on the labels of [`q4_matrix`].
pub fn q4_betweenness() -> Betweenness {
    parse_triples(Q4_TRIPLES, q4_matrix().labels()).expect("embedded Q(4) triples parse")
}

/// One row of the line table for three points `a, b, c`.
#[derive(Clone, Copy, Debug)]
pub struct ThreePointRow {
    /// Triple words over `abc`.
    pub relation: &'static [&'static str],
    /// Lines for the ordered pairs `ab, ba, ac, ca, bc, cb`.
    pub lines: [&'static str; 6],
    pub line_count: usize,
}

/// Ordered pairs, in the column order of [`ThreePointRow::lines`].
pub const THREE_POINT_PAIRS: [&str; 6] = ["ab", "ba", "ac", "ca", "bc", "cb"];

pub const THREE_POINT_TABLE: [ThreePointRow; 5] = [
    ThreePointRow {
        relation: &[],
        lines: ["ab", "ab", "ac", "ac", "bc", "bc"],
        line_count: 3,
    },
    ThreePointRow {
        relation: &["abc"],
        lines: ["abc", "ab", "abc", "ac", "abc", "bc"],
        line_count: 4,
    },
    ThreePointRow {
        relation: &["abc", "bca"],
        lines: ["abc", "abc", "abc", "abc", "abc", "bc"],
        line_count: 2,
    },
    ThreePointRow {
        relation: &["abc", "cba"],
        lines: ["abc", "abc", "abc", "abc", "abc", "abc"],
        line_count: 1,
    },
    ThreePointRow {
        relation: &["abc", "bca", "cab"],
        lines: ["abc", "abc", "abc", "abc", "abc", "abc"],
        line_count: 1,
    },
];

/// The three-point relations realizable by a metric, as triple words.
pub const THREE_POINT_METRIC: [&[&str]; 2] = [&[], &["abc", "cba"]];

/// Parses a word like `abc` over single-letter labels `a, b, c, ...` into indices.
pub fn letters(word: &str) -> Vec<usize> {
    word.bytes().map(|b| usize::from(b - b'a')).collect()
}

/// Builds a relation from triple words over `a, b, c, ...`.
pub fn relation_from_words(n: usize, words: &[&str]) -> Betweenness {
    Betweenness::from_triples(
        n,
        words.iter().map(|w| {
            let v = letters(w);
            (v[0], v[1], v[2])
        }),
    )
    .expect("well-formed triple words")
}
