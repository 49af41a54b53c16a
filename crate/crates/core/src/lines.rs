//! Lines and the de Bruijn-Erdos (DBE) verdict, computed from betweenness alone.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::betweenness::Betweenness;
use crate::error::{Error, Result};
use crate::points::PointSet;

/// `line(x,y) = {x,y} ∪ { z | zxy, xzy or xyz is in b }`.
pub fn line_of_pair(b: &Betweenness, x: usize, y: usize) -> Result<PointSet> {
    let n = b.n();
    for i in [x, y] {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
    }
    if x == y {
        return Err(Error::SamePoint(x));
    }
    Ok(line_unchecked(b, x, y))
}

fn line_unchecked(b: &Betweenness, x: usize, y: usize) -> PointSet {
    let mut line = PointSet::empty().with(x).with(y);
    for z in (0..b.n()).filter(|&z| z != x && z != y) {
        if b.contains((z, x, y)) || b.contains((x, z, y)) || b.contains((x, y, z)) {
            line.insert(z);
        }
    }
    line
}

/// All lines of a space, keyed by the ordered pair that defines them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineSet {
    n: usize,
    lines: BTreeSet<PointSet>,
    #[serde(skip)]
    per_pair: Vec<PointSet>,
}

impl LineSet {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Distinct lines, ordered by their point-mask value.
    pub fn lines(&self) -> impl Iterator<Item = PointSet> + '_ {
        self.lines.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// The line defined by the ordered pair `(x, y)`, `x != y`.
    pub fn line(&self, x: usize, y: usize) -> Option<PointSet> {
        (x != y && x < self.n && y < self.n).then(|| self.per_pair[x * self.n + y])
    }

    /// Ordered pairs with their lines, in lexicographic pair order.
    pub fn pairs(&self) -> impl Iterator<Item = ((usize, usize), PointSet)> + '_ {
        let n = self.n;
        (0..n * n)
            .filter(move |k| k / n != k % n)
            .map(move |k| ((k / n, k % n), self.per_pair[k]))
    }

    pub fn has_universal(&self) -> bool {
        self.lines.contains(&PointSet::full(self.n))
    }
}

pub fn line_set(b: &Betweenness) -> LineSet {
    let n = b.n();
    let mut per_pair = vec![PointSet::empty(); n * n];
    for x in 0..n {
        for y in (0..n).filter(|&y| y != x) {
            per_pair[x * n + y] = line_unchecked(b, x, y);
        }
    }
    let lines = per_pair.iter().copied().filter(|s| !s.is_empty()).collect();
    LineSet { n, lines, per_pair }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DbeVerdict {
    pub line_count: usize,
    pub has_universal: bool,
    pub satisfies_dbe: bool,
}

impl DbeVerdict {
    pub fn from_lines(lines: &LineSet) -> Self {
        let line_count = lines.len();
        let has_universal = lines.has_universal();
        DbeVerdict {
            line_count,
            has_universal,
            satisfies_dbe: has_universal || line_count >= lines.n(),
        }
    }
}

/// A space satisfies DBE when it has a universal line or at least `n` distinct lines.
pub fn dbe_verdict(b: &Betweenness) -> DbeVerdict {
    DbeVerdict::from_lines(&line_set(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::betweenness::betweenness_of;
    use crate::fixtures::{self, relation_from_words};
    use crate::matrix::{segment, DistanceMatrix};
    use crate::points::Labels;
    use proptest::prelude::*;

    fn q4() -> (Betweenness, Labels) {
        let m = fixtures::q4_matrix();
        (fixtures::q4_betweenness(), m.labels().clone())
    }

    fn set(labels: &Labels, names: &str) -> PointSet {
        names
            .chars()
            .map(|c| labels.index_of(&c.to_string()).unwrap())
            .collect()
    }

    #[test]
    fn q4_lines_are_asymmetric() {
        let (b, l) = q4();
        let i = |s: &str| l.index_of(s).unwrap();
        assert_eq!(line_of_pair(&b, i("p"), i("q")).unwrap(), set(&l, "pqr"));
        assert_eq!(line_of_pair(&b, i("q"), i("p")).unwrap(), set(&l, "pqs"));
        assert_eq!(
            line_of_pair(&b, i("p"), i("p")),
            Err(Error::SamePoint(i("p")))
        );
    }

    #[test]
    fn q4_has_three_lines() {
        let (b, l) = q4();
        let ls = line_set(&b);
        let expected: BTreeSet<PointSet> =
            ["pqr", "pqs", "rs"].iter().map(|s| set(&l, s)).collect();
        assert_eq!(ls.lines().collect::<BTreeSet<_>>(), expected);
        for (pairs, line) in [
            (["pq", "pr", "qr", "rp", "rq"].as_slice(), "pqr"),
            (["qp", "sq", "sp", "qs", "ps"].as_slice(), "pqs"),
            (["rs", "sr"].as_slice(), "rs"),
        ] {
            for pair in pairs {
                let v: Vec<usize> = pair
                    .chars()
                    .map(|c| l.index_of(&c.to_string()).unwrap())
                    .collect();
                assert_eq!(ls.line(v[0], v[1]), Some(set(&l, line)), "line {pair}");
            }
        }
        let verdict = dbe_verdict(&b);
        assert_eq!(
            verdict,
            DbeVerdict {
                line_count: 3,
                has_universal: false,
                satisfies_dbe: false
            }
        );
    }

    #[test]
    fn three_point_examples() {
        let abc = relation_from_words(3, &["abc"]);
        assert_eq!(line_of_pair(&abc, 1, 0).unwrap(), PointSet::full(2));
        assert_eq!(
            dbe_verdict(&abc),
            DbeVerdict {
                line_count: 4,
                has_universal: true,
                satisfies_dbe: true
            }
        );
        let empty = Betweenness::empty(3);
        let v = dbe_verdict(&empty);
        assert_eq!(
            (v.line_count, v.has_universal, v.satisfies_dbe),
            (3, false, true)
        );
        assert_eq!(line_set(&relation_from_words(3, &["abc", "cba"])).len(), 1);
    }

    #[test]
    fn two_points_have_one_universal_line() {
        let v = dbe_verdict(&Betweenness::empty(2));
        assert_eq!(
            v,
            DbeVerdict {
                line_count: 1,
                has_universal: true,
                satisfies_dbe: true
            }
        );
    }

    #[test]
    fn line_set_pairs_cover_every_line() {
        let (b, _) = q4();
        let ls = line_set(&b);
        assert_eq!(ls.pairs().count(), 12);
        for line in ls.lines() {
            assert!(ls.pairs().any(|(_, l)| l == line));
        }
        for ((x, y), l) in ls.pairs() {
            assert!(l.contains(x) && l.contains(y));
        }
    }

    /// Line straight from the segment definition: z with x ∈ [zy], z ∈ [xy] or y ∈ [xz].
    fn line_from_segments(m: &DistanceMatrix<i64>, x: usize, y: usize) -> PointSet {
        (0..m.n())
            .filter(|&z| {
                z == x
                    || z == y
                    || segment(m, z, y).unwrap().contains(x)
                    || segment(m, x, y).unwrap().contains(z)
                    || segment(m, x, z).unwrap().contains(y)
            })
            .collect()
    }

    fn closure(n: usize, raw: &[i64]) -> DistanceMatrix<i64> {
        let mut d: Vec<i64> = (0..n * n)
            .map(|k| if k / n == k % n { 0 } else { raw[k] })
            .collect();
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    d[i * n + j] = d[i * n + j].min(d[i * n + k] + d[k * n + j]);
                }
            }
        }
        DistanceMatrix::from_entries(Labels::alphabetic(n), d).unwrap()
    }

    proptest! {
        #[test]
        fn lines_agree_with_segment_definition(n in 3usize..6, raw in prop::collection::vec(1i64..5, 25)) {
            let m = closure(n, &raw);
            let b = betweenness_of(&m);
            for x in 0..n {
                for y in 0..n {
                    if x != y {
                        prop_assert_eq!(line_of_pair(&b, x, y).unwrap(), line_from_segments(&m, x, y));
                    }
                }
            }
        }

        #[test]
        fn three_point_spaces_satisfy_dbe(raw in prop::collection::vec(1i64..7, 9)) {
            let m = closure(3, &raw);
            prop_assert!(dbe_verdict(&betweenness_of(&m)).satisfies_dbe);
        }

        #[test]
        fn scaling_preserves_lines(raw in prop::collection::vec(1i64..6, 16), k in 1i64..20) {
            let m = closure(4, &raw);
            let scaled = m.scaled(&k);
            prop_assert_eq!(betweenness_of(&m), betweenness_of(&scaled));
            prop_assert_eq!(line_set(&betweenness_of(&m)), line_set(&betweenness_of(&scaled)));
        }
    }
}
