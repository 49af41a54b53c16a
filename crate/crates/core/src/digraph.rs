//! Unweighted digraphs and the quasi-metrics they induce.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::betweenness::{betweenness_of, Betweenness};
use crate::error::{Error, Result};
use crate::isomorphism::Canonizer;
use crate::matrix::DistanceMatrix;
use crate::points::{check_point_count, Labels};
use crate::IntMatrix;

/// Exhaustive arc-set enumeration covers `2^(n(n-1))` digraphs.
pub const MAX_DIGRAPH_POINTS: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Digraph {
    n: usize,
    arcs: Vec<(usize, usize)>,
}

impl Digraph {
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        check_point_count(n)?;
        let mut arcs: Vec<(usize, usize)> = arcs.into_iter().collect();
        for &(u, v) in &arcs {
            for i in [u, v] {
                if i >= n {
                    return Err(Error::IndexOutOfRange { index: i, n });
                }
            }
            if u == v {
                return Err(Error::Loop(u));
            }
        }
        arcs.sort_unstable();
        arcs.dedup();
        Ok(Digraph { n, arcs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    fn bfs(&self, source: usize) -> Vec<Option<i64>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.arcs {
            adj[u].push(v);
        }
        let mut dist = vec![None; self.n];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].expect("queued vertices are reached");
            for &v in &adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Shortest-path distances, or `None` unless strongly connected.
    pub fn distances(&self) -> Option<IntMatrix> {
        let mut entries = Vec::with_capacity(self.n * self.n);
        for u in 0..self.n {
            for d in self.bfs(u) {
                entries.push(d?);
            }
        }
        Some(
            DistanceMatrix::from_entries(Labels::alphabetic(self.n), entries)
                .expect("square by construction"),
        )
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.distances().is_some()
    }

    pub fn relabeled(&self, perm: &[usize]) -> Self {
        Digraph::new(self.n, self.arcs.iter().map(|&(u, v)| (perm[u], perm[v])))
            .expect("permutation keeps arcs valid")
    }
}

fn check_digraph_size(n: usize) -> Result<()> {
    if n > MAX_DIGRAPH_POINTS {
        Err(Error::SearchTooLarge {
            n,
            max: MAX_DIGRAPH_POINTS,
        })
    } else {
        check_point_count(n)
    }
}

/// Every strongly connected digraph on `n` vertices with its distance matrix,
/// in increasing arc-mask order.
pub fn strongly_connected_digraphs(n: usize) -> Result<impl Iterator<Item = (Digraph, IntMatrix)>> {
    check_digraph_size(n)?;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect();
    let total: u64 = 1 << pairs.len();
    Ok((0..total).filter_map(move |mask| {
        // Strong connectivity needs out- and in-degree at least one everywhere.
        let g = Digraph::new(
            n,
            pairs
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &a)| a),
        )
        .expect("pairs are valid arcs");
        let mut out_deg = vec![0; n];
        let mut in_deg = vec![0; n];
        for &(u, v) in g.arcs() {
            out_deg[u] += 1;
            in_deg[v] += 1;
        }
        if out_deg.contains(&0) || in_deg.contains(&0) {
            return None;
        }
        g.distances().map(|d| (g, d))
    }))
}

/// Finds a strongly connected digraph whose distance betweenness is
/// isomorphic to `b`, relabeled so that it equals `b` exactly.
pub fn realize_digraph(b: &Betweenness) -> Result<Option<Digraph>> {
    if let Some((t, u)) = b.first_conflict() {
        return Err(Error::Inconsistent(format!("{t:?}"), format!("{u:?}")));
    }
    let n = b.n();
    let canonizer = Canonizer::new(n);
    let (target, target_map) = canonizer.canonical_form(b);
    for (g, d) in strongly_connected_digraphs(n)? {
        let candidate = betweenness_of(&d);
        if candidate.len() == b.len() && canonizer.canonical(&candidate) == target {
            let (_, to_canonical) = canonizer.canonical_form(&candidate);
            let perm = target_map.inverse().after(&to_canonical);
            return Ok(Some(g.relabeled(perm.as_slice())));
        }
    }
    Ok(None)
}

/// Canonical relation of every digraph-induced betweenness on `n` points,
/// mapped to a digraph realizing that canonical relation exactly.
pub fn digraph_catalog(n: usize) -> Result<BTreeMap<Betweenness, Digraph>> {
    let canonizer = Canonizer::new(n);
    let mut out = BTreeMap::new();
    for (g, d) in strongly_connected_digraphs(n)? {
        let (canon, f) = canonizer.canonical_form(&betweenness_of(&d));
        out.entry(canon)
            .or_insert_with(|| g.relabeled(f.as_slice()));
    }
    Ok(out)
}
