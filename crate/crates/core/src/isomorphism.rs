//! Relabelings, canonical forms and isomorphism witnesses.
//!
//! Everything here is brute force over all `n!` permutations, which is 24 at
//! four points.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::betweenness::{triple_at, triple_count, triple_position, Betweenness};
use crate::error::{Error, Result};

/// A bijection on `0..n`; point `i` is sent to `self.image(i)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Relabeling(Vec<usize>);

impl Relabeling {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::NotAPermutation(n));
            }
        }
        Ok(Relabeling(perm))
    }

    pub fn identity(n: usize) -> Self {
        Relabeling((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &p) in self.0.iter().enumerate() {
            inv[p] = i;
        }
        Relabeling(inv)
    }

    /// `self` after `first`: `i -> self(first(i))`.
    pub fn after(&self, first: &Relabeling) -> Self {
        Relabeling(first.0.iter().map(|&i| self.0[i]).collect())
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> impl Iterator<Item = Relabeling> {
    let mut next: Option<Vec<usize>> = Some((0..n).collect());
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut p = current.clone();
        if let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) {
            let j = (i..p.len())
                .rev()
                .find(|&j| p[j] > p[i - 1])
                .expect("pivot has a successor");
            p.swap(i - 1, j);
            p[i..].reverse();
            next = Some(p);
        }
        Some(Relabeling(current))
    })
}

pub fn apply_relabeling(b: &Betweenness, f: &Relabeling) -> Result<Betweenness> {
    if f.len() != b.n() {
        return Err(Error::SizeMismatch {
            expected: b.n(),
            got: f.len(),
        });
    }
    let mut out = Betweenness::empty(b.n());
    for (x, y, z) in b.iter() {
        out.insert((f.image(x), f.image(y), f.image(z)));
    }
    Ok(out)
}

/// Precomputed action of every permutation on triple positions, for repeated
/// canonicalization at a fixed `n`.
#[derive(Clone, Debug)]
pub struct Canonizer {
    n: usize,
    perms: Vec<Relabeling>,
    /// `maps[k][pos]`: where permutation `k` sends the triple at `pos`.
    maps: Vec<Vec<usize>>,
}

impl Canonizer {
    pub fn new(n: usize) -> Self {
        let perms: Vec<Relabeling> = permutations(n).collect();
        let maps = perms
            .iter()
            .map(|f| {
                (0..triple_count(n))
                    .map(|pos| {
                        let (x, y, z) = triple_at(n, pos);
                        triple_position(n, (f.image(x), f.image(y), f.image(z)))
                    })
                    .collect()
            })
            .collect();
        Canonizer { n, perms, maps }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn image_encoding(&self, k: usize, encoding: u128) -> u128 {
        let map = &self.maps[k];
        let mut rest = encoding;
        let mut out = 0u128;
        while rest != 0 {
            let pos = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out |= 1 << map[pos];
        }
        out
    }

    fn image(&self, k: usize, b: &Betweenness) -> Betweenness {
        let mut out = Betweenness::empty(self.n);
        for pos in b.positions() {
            out.set_position(self.maps[k][pos]);
        }
        out
    }

    /// Minimum-encoding relabeled copy of `b`, with the lexicographically
    /// smallest permutation reaching it.
    pub fn canonical_form(&self, b: &Betweenness) -> (Betweenness, Relabeling) {
        assert_eq!(b.n(), self.n, "canonizer built for a different point count");
        if let Some(enc) = b.encoding() {
            let (k, best) = (0..self.perms.len())
                .map(|k| (k, self.image_encoding(k, enc)))
                .min_by_key(|&(k, e)| (e, k))
                .expect("at least one permutation");
            return (
                Betweenness::from_encoding(self.n, best),
                self.perms[k].clone(),
            );
        }
        let (k, best) = (0..self.perms.len())
            .map(|k| (k, self.image(k, b)))
            .min_by(|(ka, a), (kb, b)| a.cmp(b).then(ka.cmp(kb)))
            .expect("at least one permutation");
        (best, self.perms[k].clone())
    }

    pub fn canonical(&self, b: &Betweenness) -> Betweenness {
        self.canonical_form(b).0
    }

    /// Number of distinct relabelings of `b`.
    pub fn orbit_size(&self, b: &Betweenness) -> usize {
        match b.encoding() {
            Some(enc) => (0..self.perms.len())
                .map(|k| self.image_encoding(k, enc))
                .collect::<BTreeSet<_>>()
                .len(),
            None => (0..self.perms.len())
                .map(|k| self.image(k, b))
                .collect::<BTreeSet<_>>()
                .len(),
        }
    }

    pub fn witness(&self, from: &Betweenness, to: &Betweenness) -> Option<Relabeling> {
        if from.n() != self.n || to.n() != self.n || from.len() != to.len() {
            return None;
        }
        (0..self.perms.len())
            .find(|&k| self.image(k, from) == *to)
            .map(|k| self.perms[k].clone())
    }
}

/// Minimum encoding of `b` over all relabelings, with the lexicographically
/// smallest relabeling achieving it.
pub fn canonical_form(b: &Betweenness) -> (Betweenness, Relabeling) {
    Canonizer::new(b.n()).canonical_form(b)
}

/// The lexicographically smallest `f` with `apply_relabeling(from, f) == to`, if any.
pub fn isomorphism_witness(from: &Betweenness, to: &Betweenness) -> Result<Option<Relabeling>> {
    if from.n() != to.n() {
        return Err(Error::SizeMismatch {
            expected: from.n(),
            got: to.n(),
        });
    }
    Ok(Canonizer::new(from.n()).witness(from, to))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::betweenness::consistency_check;
    use crate::fixtures::{self, relation_from_words};
    use crate::lines::dbe_verdict;
    use proptest::prelude::*;

    /// B(Q(4)) with p, q, r, s as indices 0..4.
    fn q4_pqrs() -> Betweenness {
        relation_from_words(4, &["abc", "cab", "dba", "bad"])
    }

    /// Minimum over all 24 relabelings of B(Q(4)), computed by an independent
    /// brute-force script.
    const Q4_CANONICAL_ENCODING: u128 = 271_392;

    #[test]
    fn permutations_are_lexicographic() {
        let all: Vec<Vec<usize>> = permutations(3).map(|p| p.as_slice().to_vec()).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 1, 2],
                vec![0, 2, 1],
                vec![1, 0, 2],
                vec![1, 2, 0],
                vec![2, 0, 1],
                vec![2, 1, 0]
            ]
        );
        assert_eq!(permutations(4).count(), 24);
        assert_eq!(permutations(1).count(), 1);
    }

    #[test]
    fn relabeling_validation() {
        assert_eq!(
            Relabeling::new(vec![0, 0, 1]),
            Err(Error::NotAPermutation(3))
        );
        assert_eq!(
            Relabeling::new(vec![0, 3, 1]),
            Err(Error::NotAPermutation(3))
        );
        let f = Relabeling::new(vec![2, 0, 1]).unwrap();
        assert_eq!(f.after(&f.inverse()), Relabeling::identity(3));
    }

    #[test]
    fn known_mappings_reach_q4() {
        // Case b ∈ line(a,d): {abc, bad, cab, dba}, p=a q=b r=c s=d.
        let first = relation_from_words(4, &["abc", "bad", "cab", "dba"]);
        let f = Relabeling::new(vec![0, 1, 2, 3]).unwrap();
        assert_eq!(apply_relabeling(&first, &f).unwrap(), q4_pqrs());
        // Case b ∈ line(d,c): {abc, bca, cbd, dcb}, p=b q=c r=a s=d, i.e. a->r b->p c->q d->s.
        let second = relation_from_words(4, &["abc", "bca", "cbd", "dcb"]);
        let g = Relabeling::new(vec![2, 0, 1, 3]).unwrap();
        assert_eq!(apply_relabeling(&second, &g).unwrap(), q4_pqrs());
    }

    #[test]
    fn identity_and_size_mismatch() {
        let b = q4_pqrs();
        assert_eq!(apply_relabeling(&b, &Relabeling::identity(4)).unwrap(), b);
        assert_eq!(
            apply_relabeling(&b, &Relabeling::identity(3)),
            Err(Error::SizeMismatch {
                expected: 4,
                got: 3
            })
        );
    }

    #[test]
    fn q4_canonical_encoding() {
        let (canon, f) = canonical_form(&q4_pqrs());
        assert_eq!(canon.encoding(), Some(Q4_CANONICAL_ENCODING));
        assert_eq!(apply_relabeling(&q4_pqrs(), &f).unwrap(), canon);
        // Fixture label order is p s q r; the canonical form is label-independent.
        assert_eq!(canonical_form(&fixtures::q4_betweenness()).0, canon);
        for f in permutations(4) {
            let moved = apply_relabeling(&q4_pqrs(), &f).unwrap();
            assert_eq!(canonical_form(&moved).0, canon);
        }
    }

    #[test]
    fn canonical_form_is_idempotent_and_fixes_empty() {
        let (canon, _) = canonical_form(&q4_pqrs());
        let (again, f) = canonical_form(&canon);
        assert_eq!(again, canon);
        assert!(f <= Relabeling::identity(4));
        assert_eq!(
            canonical_form(&Betweenness::empty(4)).0,
            Betweenness::empty(4)
        );
        assert_eq!(
            canonical_form(&Betweenness::empty(4)).1,
            Relabeling::identity(4)
        );
    }

    #[test]
    fn three_point_canonical_encodings() {
        // Independent brute-force values for the five realizable classes.
        for (words, enc) in [
            (&[][..], 0u128),
            (&["abc"][..], 1),
            (&["abc", "bca"][..], 6),
            (&["abc", "cba"][..], 10),
            (&["abc", "bca", "cab"][..], 25),
        ] {
            assert_eq!(
                canonical_form(&relation_from_words(3, words)).0.encoding(),
                Some(enc)
            );
        }
    }

    #[test]
    fn witness_examples() {
        let first = relation_from_words(4, &["abc", "bad", "cab", "dba"]);
        assert_eq!(
            isomorphism_witness(&first, &q4_pqrs()).unwrap(),
            Some(Relabeling::identity(4))
        );
        let one = relation_from_words(3, &["abc"]);
        let two = relation_from_words(3, &["abc", "cba"]);
        assert_eq!(isomorphism_witness(&one, &two).unwrap(), None);
        assert_eq!(
            isomorphism_witness(&two, &two).unwrap(),
            Some(Relabeling::identity(3))
        );
        assert!(isomorphism_witness(&one, &q4_pqrs()).is_err());
    }

    #[test]
    fn canonical_equality_matches_witness_on_three_points() {
        let all: Vec<Betweenness> = (0u128..64)
            .map(|e| Betweenness::from_encoding(3, e))
            .filter(consistency_check)
            .collect();
        assert_eq!(all.len(), 18);
        let canon = Canonizer::new(3);
        for a in &all {
            for b in &all {
                let same = canon.canonical(a) == canon.canonical(b);
                let w = isomorphism_witness(a, b).unwrap();
                assert_eq!(same, w.is_some());
                if let Some(f) = w {
                    assert_eq!(apply_relabeling(a, &f).unwrap(), *b);
                }
            }
        }
    }

    #[test]
    fn wide_relations_use_the_generic_path() {
        // n = 7 has 210 triples, past the 128-bit fast path.
        let b = Betweenness::from_triples(7, [(6, 5, 4), (0, 1, 2)]).unwrap();
        assert_eq!(b.encoding(), None);
        let canon = Canonizer::new(7);
        let (c, f) = canon.canonical_form(&b);
        assert_eq!(apply_relabeling(&b, &f).unwrap(), c);
        // The highest set bit dominates, so both triples want small first points.
        assert_eq!(c.iter().collect::<Vec<_>>(), vec![(0, 4, 5), (1, 2, 3)]);
    }

    fn consistent_on_four() -> impl Strategy<Value = Betweenness> {
        (0u128..(1 << 24))
            .prop_map(|e| Betweenness::from_encoding(4, e))
            .prop_filter("consistent", consistency_check)
    }

    proptest! {
        #[test]
        fn canonical_equality_matches_witness_on_four_points(a in consistent_on_four(), perm in 0usize..24, flip in any::<bool>()) {
            let f = permutations(4).nth(perm).unwrap();
            let b = if flip { apply_relabeling(&a, &f).unwrap() } else { Betweenness::from_encoding(4, a.encoding().unwrap() ^ 1) };
            let same = canonical_form(&a).0 == canonical_form(&b).0;
            prop_assert_eq!(same, isomorphism_witness(&a, &b).unwrap().is_some());
        }

        #[test]
        fn relabeling_preserves_invariants(a in consistent_on_four(), perm in 0usize..24) {
            let f = permutations(4).nth(perm).unwrap();
            let b = apply_relabeling(&a, &f).unwrap();
            prop_assert_eq!(a.len(), b.len());
            prop_assert_eq!(consistency_check(&a), consistency_check(&b));
            let (va, vb) = (dbe_verdict(&a), dbe_verdict(&b));
            prop_assert_eq!((va.line_count, va.has_universal), (vb.line_count, vb.has_universal));
        }
    }
}
