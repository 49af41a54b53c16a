//! Point indices, point subsets and the label boundary.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest supported space. Point subsets are stored as a `u64` mask.
pub const MAX_POINTS: usize = 64;

pub fn check_point_count(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::TooFewPoints(n))
    } else if n > MAX_POINTS {
        Err(Error::TooManyPoints {
            got: n,
            max: MAX_POINTS,
        })
    } else {
        Ok(())
    }
}

/// A subset of `0..n` for `n <= 64`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet(u64);

impl PointSet {
    pub const fn empty() -> Self {
        PointSet(0)
    }

    /// `{0, 1, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            PointSet(u64::MAX)
        } else {
            PointSet((1u64 << n) - 1)
        }
    }

    pub fn from_bits(bits: u64) -> Self {
        PointSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn insert(&mut self, p: usize) {
        self.0 |= 1 << p;
    }

    pub fn with(mut self, p: usize) -> Self {
        self.insert(p);
        self
    }

    pub fn contains(self, p: usize) -> bool {
        p < 64 && self.0 & (1 << p) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&p| self.0 & (1 << p) != 0)
    }

    /// Image of the set under a point map.
    pub fn mapped(self, f: impl Fn(usize) -> usize) -> Self {
        self.iter().fold(PointSet::empty(), |s, p| s.with(f(p)))
    }
}

impl FromIterator<usize> for PointSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(PointSet::empty(), |s, p| s.with(p))
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for PointSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

/// Point names, kept apart from the index-based core.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Labels(Vec<String>);

impl Labels {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::DuplicateLabel(name.clone()));
            }
        }
        Ok(Labels(names))
    }

    /// `a, b, c, ...`, then `p26, p27, ...` past the alphabet.
    pub fn alphabetic(n: usize) -> Self {
        Labels(
            (0..n)
                .map(|i| {
                    if i < 26 {
                        char::from(b'a' + i as u8).to_string()
                    } else {
                        format!("p{i}")
                    }
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|l| l == name)
    }

    pub fn as_slice(&self) -> &[String] {
        &self.0
    }

    /// Renders a point set as `{p,q,r}`.
    pub fn format_set(&self, set: PointSet) -> String {
        let names: Vec<&str> = set.iter().map(|p| self.name(p)).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Renders a triple as the word `xyz` (space separated when a label is longer than one character).
    pub fn format_triple(&self, (x, y, z): (usize, usize, usize)) -> String {
        let parts = [self.name(x), self.name(y), self.name(z)];
        if parts.iter().all(|p| p.chars().count() == 1) {
            parts.concat()
        } else {
            parts.join(" ")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_set_basics() {
        let s: PointSet = [0, 2, 3].into_iter().collect();
        assert_eq!(s.len(), 3);
        assert!(s.contains(2) && !s.contains(1));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 2, 3]);
        assert_eq!(PointSet::full(4).bits(), 0b1111);
        assert_eq!(
            s.mapped(|p| 3 - p).iter().collect::<Vec<_>>(),
            vec![0, 1, 3]
        );
    }

    #[test]
    fn labels_reject_duplicates() {
        assert_eq!(
            Labels::new(["p", "q", "p"]),
            Err(Error::DuplicateLabel("p".into()))
        );
        let l = Labels::new(["p", "q"]).unwrap();
        assert_eq!(l.index_of("q"), Some(1));
        assert_eq!(
            Labels::alphabetic(3).format_set(PointSet::full(3)),
            "{a,b,c}"
        );
    }
}
