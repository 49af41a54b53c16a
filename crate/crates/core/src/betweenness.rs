//! Betweenness relations as bit sets over ordered triples.
//!
//! The `n(n-1)(n-2)` ordered triples of distinct points, sorted
//! lexicographically, define the bit positions. The integer value of the bit
//! set (bit `k` weighted `2^k`) is the encoding that canonical forms minimize.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::DistanceMatrix;
use crate::points::{check_point_count, Labels, MAX_POINTS};
use crate::scalar::Scalar;

/// An ordered triple `(x, y, z)`, read "y lies between x and z".
pub type Triple = (usize, usize, usize);

pub fn triple_count(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2)
    }
}

/// Bit position of a triple of pairwise-distinct indices below `n`.
pub fn triple_position(n: usize, (x, y, z): Triple) -> usize {
    debug_assert!(x != y && y != z && x != z && x.max(y).max(z) < n);
    let y_rank = y - usize::from(y > x);
    let z_rank = z - usize::from(z > x) - usize::from(z > y);
    (x * (n - 1) + y_rank) * (n - 2) + z_rank
}

/// Inverse of [`triple_position`].
pub fn triple_at(n: usize, pos: usize) -> Triple {
    let z_rank = pos % (n - 2);
    let y_rank = (pos / (n - 2)) % (n - 1);
    let x = pos / ((n - 1) * (n - 2));
    let y = if y_rank >= x { y_rank + 1 } else { y_rank };
    let mut z = z_rank;
    for skip in [x.min(y), x.max(y)] {
        if z >= skip {
            z += 1;
        }
    }
    (x, y, z)
}

/// The set of triples `xyz` with `d(x,z) = d(x,y) + d(y,z)`, or any candidate
/// relation of the same shape.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Betweenness {
    n: usize,
    words: Vec<u64>,
}

impl Betweenness {
    /// The empty relation on `n` points.
    ///
    /// # Panics
    /// If `n` is outside `2..=64`.
    pub fn empty(n: usize) -> Self {
        assert!(
            (2..=MAX_POINTS).contains(&n),
            "betweenness needs 2..={MAX_POINTS} points, got {n}"
        );
        Betweenness {
            n,
            words: vec![0; triple_count(n).div_ceil(64)],
        }
    }

    pub fn from_triples(n: usize, triples: impl IntoIterator<Item = Triple>) -> Result<Self> {
        check_point_count(n)?;
        let mut b = Betweenness::empty(n);
        for (x, y, z) in triples {
            for i in [x, y, z] {
                if i >= n {
                    return Err(Error::IndexOutOfRange { index: i, n });
                }
            }
            if x == y || y == z || x == z {
                return Err(Error::DegenerateTriple(x, y, z));
            }
            b.insert((x, y, z));
        }
        Ok(b)
    }

    /// Builds a relation from its integer encoding. Bits beyond the triple count are ignored.
    pub fn from_encoding(n: usize, encoding: u128) -> Self {
        let mut b = Betweenness::empty(n);
        for pos in 0..triple_count(n).min(128) {
            if encoding >> pos & 1 == 1 {
                b.set_position(pos);
            }
        }
        b
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, t: Triple) {
        self.set_position(triple_position(self.n, t));
    }

    pub(crate) fn set_position(&mut self, pos: usize) {
        self.words[pos / 64] |= 1 << (pos % 64);
    }

    pub(crate) fn has_position(&self, pos: usize) -> bool {
        self.words[pos / 64] >> (pos % 64) & 1 == 1
    }

    pub fn contains(&self, (x, y, z): Triple) -> bool {
        x < self.n
            && y < self.n
            && z < self.n
            && x != y
            && y != z
            && x != z
            && self.has_position(triple_position(self.n, (x, y, z)))
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub(crate) fn positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(k * 64 + bit)
            })
        })
    }

    /// Member triples in encoding order.
    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.positions().map(move |p| triple_at(self.n, p))
    }

    /// The encoding as an integer, when it fits (`n <= 6`).
    pub fn encoding(&self) -> Option<u128> {
        if triple_count(self.n) > 128 {
            return None;
        }
        Some(
            self.words
                .iter()
                .rev()
                .fold(0u128, |acc, &w| acc << 64 | u128::from(w)),
        )
    }

    /// `xyz` in the relation excludes `yxz` and `xzy`.
    pub fn is_consistent(&self) -> bool {
        self.first_conflict().is_none()
    }

    /// First member triple whose exclusion rule fails, with the conflicting triple.
    pub fn first_conflict(&self) -> Option<(Triple, Triple)> {
        self.iter().find_map(|(x, y, z)| {
            [(y, x, z), (x, z, y)]
                .into_iter()
                .find(|&t| self.contains(t))
                .map(|t| ((x, y, z), t))
        })
    }

    /// Space-separated triple words, e.g. `pqr rpq`.
    pub fn format(&self, labels: &Labels) -> String {
        let words: Vec<String> = self.iter().map(|t| labels.format_triple(t)).collect();
        format!("{{{}}}", words.join(", "))
    }
}

impl Ord for Betweenness {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for Betweenness {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl serde::Serialize for Betweenness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let triples: Vec<[usize; 3]> = self.iter().map(|(x, y, z)| [x, y, z]).collect();
        let mut st = s.serialize_struct("Betweenness", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("encoding", &self.encoding().map(|e| e.to_string()))?;
        st.serialize_field("triples", &triples)?;
        st.end()
    }
}

impl fmt::Debug for Betweenness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Betweenness(n={}, ", self.n)?;
        f.debug_set().entries(self.iter()).finish()?;
        write!(f, ")")
    }
}

/// Betweenness of a flat row-major `n x n` entry slice.
pub fn betweenness_of_entries<T: Scalar>(n: usize, d: &[T]) -> Betweenness {
    let mut b = Betweenness::empty(n);
    for x in 0..n {
        for z in 0..n {
            if x == z {
                continue;
            }
            for y in 0..n {
                if y != x && y != z && d[x * n + z] == d[x * n + y].clone() + d[y * n + z].clone() {
                    b.insert((x, y, z));
                }
            }
        }
    }
    b
}

/// `B(m) = { xyz | d(x,z) = d(x,y) + d(y,z) }`, with exact equality.
pub fn betweenness_of<T: Scalar>(m: &DistanceMatrix<T>) -> Betweenness {
    betweenness_of_entries(m.n(), m.entries())
}

/// Standalone form of [`Betweenness::is_consistent`].
pub fn consistency_check(b: &Betweenness) -> bool {
    b.is_consistent()
}
