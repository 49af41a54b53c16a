//! Exhaustive classification of consistent betweenness relations on 3 and 4 points.
//!
//! Candidates are built one 3-point support at a time: every relation is a
//! union of per-support patterns, and the only pruning is the exclusion rule
//! (`xyz` forbids `yxz` and `xzy`), applied inside each support.

use std::collections::{BTreeMap, BTreeSet};
use std::thread;

use serde::Serialize;

use crate::betweenness::{triple_position, Betweenness};
use crate::digraph::digraph_catalog;
use crate::error::{Error, Result};
use crate::isomorphism::Canonizer;
use crate::lines::dbe_verdict;
use crate::realize::{integer_catalog, realize, realize_bounded_integer, Variant};
use crate::scalar::serialize_opt_rational;
use crate::{digraph, Rational, RationalMatrix};

/// Orderings of a support `x < y < z`: `xyz, xzy, yxz, yzx, zxy, zyx`.
const ORDERINGS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Pattern masks (bit `k` = ordering `k`) that obey the exclusion rule.
fn pattern_masks() -> Vec<u8> {
    let conflicts =
        |a: [usize; 3], b: [usize; 3]| b == [a[1], a[0], a[2]] || b == [a[0], a[2], a[1]];
    (0u8..64)
        .filter(|&mask| {
            (0..6).all(|i| {
                mask >> i & 1 == 0
                    || (0..6).all(|j| mask >> j & 1 == 0 || !conflicts(ORDERINGS[i], ORDERINGS[j]))
            })
        })
        .collect()
}

/// All consistent subsets of the six orderings of the support `{0, 1, 2}`.
pub fn consistent_patterns_on_support() -> Vec<Betweenness> {
    pattern_masks()
        .into_iter()
        .map(|m| Betweenness::from_encoding(3, u128::from(m)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub n: usize,
    /// Candidates assembled before canonicalization.
    pub raw_count: u64,
    /// Distinct canonical forms, in increasing encoding order.
    pub classes: Vec<Betweenness>,
}

fn check_size(n: usize) -> Result<()> {
    if n == 3 || n == 4 {
        Ok(())
    } else {
        Err(Error::UnsupportedSize(n))
    }
}

/// Splits `items` into `workers` round-robin shares, maps each share on its
/// own thread, and returns the results in worker order.
fn parallel_map<I: Sync, R: Send>(
    items: &[I],
    workers: usize,
    f: impl Fn(&[&I]) -> R + Sync,
) -> Vec<R> {
    let workers = workers.clamp(1, items.len().max(1));
    let shares: Vec<Vec<&I>> = (0..workers)
        .map(|w| items.iter().skip(w).step_by(workers).collect())
        .collect();
    if workers == 1 {
        return shares.iter().map(|s| f(s)).collect();
    }
    thread::scope(|scope| {
        let handles: Vec<_> = shares.iter().map(|s| scope.spawn(|| f(s))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

pub fn enumerate_consistent(n: usize) -> Result<Enumeration> {
    enumerate_consistent_with(n, 1)
}

/// As [`enumerate_consistent`], partitioning candidates by the first
/// support's pattern across `threads` workers.
pub fn enumerate_consistent_with(n: usize, threads: usize) -> Result<Enumeration> {
    check_size(n)?;
    let masks = pattern_masks();
    let supports: Vec<[usize; 3]> = (0..n)
        .flat_map(|x| (x + 1..n).flat_map(move |y| (y + 1..n).map(move |z| [x, y, z])))
        .collect();
    // Per support and ordering, the bit that ordering occupies in the full encoding.
    let bits: Vec<[u128; 6]> = supports
        .iter()
        .map(|s| ORDERINGS.map(|o| 1u128 << triple_position(n, (s[o[0]], s[o[1]], s[o[2]]))))
        .collect();
    let pattern_bits: Vec<Vec<u128>> = bits
        .iter()
        .map(|b| {
            masks
                .iter()
                .map(|&m| {
                    (0..6)
                        .filter(|k| m >> k & 1 == 1)
                        .fold(0, |acc, k| acc | b[k])
                })
                .collect()
        })
        .collect();
    let canonizer = Canonizer::new(n);
    let first: Vec<usize> = (0..masks.len()).collect();
    let partials = parallel_map(&first, threads, |share| {
        let mut seen = BTreeSet::new();
        let mut raw = 0u64;
        let rest = supports.len() - 1;
        for &&head in share {
            let mut idx = vec![0usize; rest];
            loop {
                let enc = idx
                    .iter()
                    .enumerate()
                    .fold(pattern_bits[0][head], |acc, (s, &p)| {
                        acc | pattern_bits[s + 1][p]
                    });
                raw += 1;
                let canon = canonizer.canonical(&Betweenness::from_encoding(n, enc));
                seen.insert(canon);
                // Odometer over the remaining supports.
                let Some(pos) = (0..rest).rev().find(|&s| idx[s] + 1 < masks.len()) else {
                    break;
                };
                idx[pos] += 1;
                idx[pos + 1..].iter_mut().for_each(|v| *v = 0);
            }
        }
        (raw, seen)
    });
    let raw_count = partials.iter().map(|(r, _)| r).sum();
    let classes: BTreeSet<Betweenness> = partials.into_iter().flat_map(|(_, s)| s).collect();
    Ok(Enumeration {
        n,
        raw_count,
        classes: classes.into_iter().collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationRecord {
    pub canonical: Betweenness,
    /// Number of distinct relabelings of `canonical`.
    pub class_size: usize,
    pub line_count: usize,
    pub has_universal: bool,
    pub satisfies_dbe: bool,
    pub realizable_quasi: bool,
    #[serde(serialize_with = "serialize_opt_rational")]
    pub quasi_slack: Option<Rational>,
    pub realizable_metric: bool,
    #[serde(serialize_with = "serialize_opt_rational")]
    pub metric_slack: Option<Rational>,
    /// Bound `kmax` to whether entries in `1..=kmax` realize the class.
    pub realizable_int: BTreeMap<u32, bool>,
    pub realizable_digraph: bool,
    /// Realizes `canonical` exactly, present iff `realizable_quasi`.
    pub witness: Option<RationalMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassifyOptions {
    pub kmax_list: Vec<u32>,
    pub threads: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            kmax_list: vec![2],
            threads: 1,
        }
    }
}

/// The parts of a record that need the LP; the search-based columns are
/// filled in by the caller.
fn lp_record(canon: &Betweenness, canonizer: &Canonizer) -> Result<ClassificationRecord> {
    let verdict = dbe_verdict(canon);
    let quasi = realize(canon, Variant::Quasi)?;
    let metric = realize(canon, Variant::Metric)?;
    Ok(ClassificationRecord {
        canonical: canon.clone(),
        class_size: canonizer.orbit_size(canon),
        line_count: verdict.line_count,
        has_universal: verdict.has_universal,
        satisfies_dbe: verdict.satisfies_dbe,
        realizable_quasi: quasi.is_realizable(),
        realizable_metric: metric.is_realizable(),
        quasi_slack: quasi.optimal_slack,
        metric_slack: metric.optimal_slack,
        realizable_int: BTreeMap::new(),
        realizable_digraph: false,
        witness: quasi.witness,
    })
}

pub fn classify(n: usize, kmax_list: &[u32]) -> Result<Vec<ClassificationRecord>> {
    classify_with(
        n,
        &ClassifyOptions {
            kmax_list: kmax_list.to_vec(),
            threads: 1,
        },
    )
}

/// Classifies every canonical consistent relation on `n` points; records are
/// sorted by canonical encoding.
pub fn classify_with(n: usize, opts: &ClassifyOptions) -> Result<Vec<ClassificationRecord>> {
    let classes = enumerate_consistent_with(n, opts.threads)?.classes;
    let kmaxes: BTreeSet<u32> = opts.kmax_list.iter().copied().collect();
    let int_catalogs: Vec<(u32, BTreeMap<Betweenness, crate::IntMatrix>)> = kmaxes
        .iter()
        .map(|&k| Ok((k, integer_catalog(n, k)?)))
        .collect::<Result<_>>()?;
    let digraphs = digraph_catalog(n)?;
    let canonizer = Canonizer::new(n);
    let chunks = parallel_map(&classes, opts.threads, |share| {
        share
            .iter()
            .map(|c| lp_record(c, &canonizer))
            .collect::<Result<Vec<_>>>()
    });
    let mut records: Vec<ClassificationRecord> = Vec::with_capacity(classes.len());
    for chunk in chunks {
        records.extend(chunk?);
    }
    records.sort_by(|a, b| a.canonical.cmp(&b.canonical));
    for rec in &mut records {
        rec.realizable_int = int_catalogs
            .iter()
            .map(|(k, cat)| (*k, cat.contains_key(&rec.canonical)))
            .collect();
        rec.realizable_digraph = digraphs.contains_key(&rec.canonical);
    }
    Ok(records)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremReport {
    pub n: usize,
    pub raw_candidates: u64,
    pub classes: usize,
    /// Classes with no universal line and fewer than `n` lines.
    pub line_filter_survivors: usize,
    pub lp_calls: usize,
    /// Quasi-realizable survivors of the line filter.
    pub exceptional_classes: Vec<ClassificationRecord>,
    pub matches_q4: bool,
}

/// Bounds used for the integer columns of exceptional records.
pub const THEOREM_INT_BOUNDS: [u32; 2] = [2, 3];

/// Checks that the only quasi-realizable 4-point betweenness without a
/// universal line and with fewer than four lines is B(Q(4)).
pub fn verify_theorem_four_points() -> Result<TheoremReport> {
    verify_theorem_against(&crate::fixtures::q4_betweenness(), 1)
}

/// As [`verify_theorem_four_points`], comparing against `reference`.
pub fn verify_theorem_against(reference: &Betweenness, threads: usize) -> Result<TheoremReport> {
    let n = 4;
    if reference.n() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            got: reference.n(),
        });
    }
    let enumeration = enumerate_consistent_with(n, threads)?;
    let canonizer = Canonizer::new(n);
    let survivors: Vec<&Betweenness> = enumeration
        .classes
        .iter()
        .filter(|c| {
            let v = dbe_verdict(c);
            !v.has_universal && v.line_count < n
        })
        .collect();
    let realizable = parallel_map(&survivors, threads, |share| {
        share
            .iter()
            .map(|c| {
                Ok(realize(c, Variant::Quasi)?
                    .is_realizable()
                    .then(|| (**c).clone()))
            })
            .collect::<Result<Vec<_>>>()
    });
    let mut exceptional = Vec::new();
    for chunk in realizable {
        for canon in chunk?.into_iter().flatten() {
            let mut rec = lp_record(&canon, &canonizer)?;
            for k in THEOREM_INT_BOUNDS {
                rec.realizable_int
                    .insert(k, realize_bounded_integer(&canon, k)?.is_some());
            }
            rec.realizable_digraph = digraph::realize_digraph(&canon)?.is_some();
            exceptional.push(rec);
        }
    }
    exceptional.sort_by(|a, b| a.canonical.cmp(&b.canonical));
    let reference_canonical = canonizer.canonical(reference);
    let matches_q4 = exceptional.len() == 1 && exceptional[0].canonical == reference_canonical;
    Ok(TheoremReport {
        n,
        raw_candidates: enumeration.raw_count,
        classes: enumeration.classes.len(),
        line_filter_survivors: survivors.len(),
        lp_calls: survivors.len(),
        exceptional_classes: exceptional,
        matches_q4,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::betweenness::consistency_check;
    use crate::fixtures::relation_from_words;

    #[test]
    fn eighteen_patterns_per_support() {
        let pats = consistent_patterns_on_support();
        assert_eq!(pats.len(), 18);
        assert!(pats.contains(&Betweenness::empty(3)));
        for t in [
            (0, 1, 2),
            (0, 2, 1),
            (1, 0, 2),
            (1, 2, 0),
            (2, 0, 1),
            (2, 1, 0),
        ] {
            assert!(pats.contains(&Betweenness::from_triples(3, [t]).unwrap()));
        }
        assert!(pats.contains(&relation_from_words(3, &["abc", "cba"])));
        assert!(pats.contains(&relation_from_words(3, &["abc", "bca", "cab"])));
    }

    #[test]
    fn pruning_is_complete_on_three_points() {
        let brute: BTreeSet<Betweenness> = (0u128..64)
            .map(|e| Betweenness::from_encoding(3, e))
            .filter(consistency_check)
            .collect();
        let built: BTreeSet<Betweenness> = consistent_patterns_on_support().into_iter().collect();
        assert_eq!(brute, built);
    }

    #[test]
    fn three_point_enumeration() {
        let e = enumerate_consistent(3).unwrap();
        assert_eq!(e.raw_count, 18);
        let encodings: Vec<u128> = e.classes.iter().map(|c| c.encoding().unwrap()).collect();
        assert_eq!(encodings, vec![0, 1, 6, 10, 25]);
        let canon = Canonizer::new(3);
        for words in [
            &[][..],
            &["abc"],
            &["abc", "cba"],
            &["abc", "bca"],
            &["abc", "bca", "cab"],
        ] {
            assert!(e
                .classes
                .contains(&canon.canonical(&relation_from_words(3, words))));
        }
    }

    #[test]
    fn unsupported_sizes() {
        assert_eq!(enumerate_consistent(5), Err(Error::UnsupportedSize(5)));
        assert!(classify(2, &[]).is_err());
    }

    #[test]
    fn threads_do_not_change_the_result() {
        assert_eq!(
            enumerate_consistent_with(3, 1).unwrap(),
            enumerate_consistent_with(3, 4).unwrap()
        );
        assert_eq!(
            classify_with(
                3,
                &ClassifyOptions {
                    kmax_list: vec![1, 2],
                    threads: 3
                }
            )
            .unwrap(),
            classify(3, &[2, 1]).unwrap()
        );
    }

    #[test]
    fn classify_three_points() {
        let recs = classify(3, &[2]).unwrap();
        assert_eq!(recs.len(), 5);
        assert!(recs
            .iter()
            .all(|r| r.realizable_quasi && r.witness.is_some() && r.satisfies_dbe));
        assert_eq!(recs.iter().map(|r| r.class_size).sum::<usize>(), 18);
        let metric: Vec<u128> = recs
            .iter()
            .filter(|r| r.realizable_metric)
            .map(|r| r.canonical.encoding().unwrap())
            .collect();
        assert_eq!(metric, vec![0, 10]);
        assert!(recs.iter().all(|r| r.realizable_digraph));
    }
}
