//! Realizability of betweenness relations.
//!
//! A relation `b` is realized by a quasi-metric exactly when the homogeneous
//! system
//!
//! * `d(i,j) > 0` for `i != j`,
//! * `d(x,z) = d(x,y) + d(y,z)` for `xyz` in `b`,
//! * `d(x,z) < d(x,y) + d(y,z)` for every other triple of distinct points,
//!
//! has a solution (plus `d(i,j) = d(j,i)` for metrics). The strict rows share
//! one margin `ε`; after fixing the scale with `Σ d = 1`, the system is
//! solvable iff the largest achievable `ε` is positive.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::betweenness::{betweenness_of, betweenness_of_entries, Betweenness, Triple};
use crate::error::{Error, Result};
use crate::isomorphism::{Canonizer, Relabeling};
use crate::matrix::{validate_quasi_metric, DistanceMatrix};
use crate::points::Labels;
use crate::scalar::{serialize_opt_rational, Scalar};
use crate::simplex::{Constraint, LinearProgram, LpOutcome, Relation};
use crate::{IntMatrix, Rational, RationalMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Quasi,
    Metric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintKind {
    /// `d(i,j) - ε >= 0`.
    Positivity { from: usize, to: usize },
    /// `d(x,z) = d(x,y) + d(y,z)`.
    Between { triple: Triple },
    /// `d(x,z) <= d(x,y) + d(y,z) - ε`.
    StrictTriangle { triple: Triple },
    /// `d(i,j) = d(j,i)`.
    Symmetry { from: usize, to: usize },
    /// `Σ d(i,j) = 1`.
    Normalization,
}

/// The realization system for one relation. Variables are the ordered pairs
/// `(i,j)`, `i != j`, in lexicographic order, followed by the margin `ε`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSystem {
    pub n: usize,
    pub variant: Variant,
    pub constraints: Vec<(ConstraintKind, Constraint<Rational>)>,
}

/// Index of the pair variable `d(i,j)`.
pub fn pair_var(n: usize, i: usize, j: usize) -> usize {
    i * (n - 1) + j - usize::from(j > i)
}

impl LinearSystem {
    pub fn pair_count(&self) -> usize {
        self.n * (self.n - 1)
    }

    pub fn slack_var(&self) -> usize {
        self.pair_count()
    }

    pub fn num_vars(&self) -> usize {
        self.pair_count() + 1
    }

    pub fn count(&self, pred: impl Fn(&ConstraintKind) -> bool) -> usize {
        self.constraints.iter().filter(|(k, _)| pred(k)).count()
    }

    pub fn is_satisfied_by(&self, point: &[Rational]) -> bool {
        point.len() == self.num_vars()
            && self
                .constraints
                .iter()
                .all(|(_, c)| c.is_satisfied_by(point))
    }

    /// Variable assignment for a positive matrix: distances divided by their
    /// sum, and `ε` set to the smallest margin among the strict rows.
    pub fn point_from_matrix(&self, m: &RationalMatrix) -> Result<Vec<Rational>> {
        if m.n() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                got: m.n(),
            });
        }
        let total = m.total();
        if !total.is_positive() {
            return Err(Error::MalformedSystem(
                "matrix entries must have a positive sum".into(),
            ));
        }
        let n = self.n;
        let mut point = vec![Rational::zero(); self.num_vars()];
        for i in 0..n {
            for j in (0..n).filter(|&j| j != i) {
                point[pair_var(n, i, j)] = m.get(i, j) / &total;
            }
        }
        let margin = self
            .constraints
            .iter()
            .filter_map(|(kind, c)| match kind {
                ConstraintKind::Positivity { .. } | ConstraintKind::StrictTriangle { .. } => {
                    // With ε = 0 each strict row reads `lhs_without_ε (rel) 0`.
                    let without: Rational = c
                        .coeffs
                        .iter()
                        .filter(|(v, _)| *v != self.slack_var())
                        .map(|(v, k)| k * &point[*v])
                        .sum();
                    Some(if c.relation == Relation::Ge {
                        without
                    } else {
                        -without
                    })
                }
                _ => None,
            })
            .min()
            .unwrap_or_else(Rational::zero);
        point[self.slack_var()] = margin;
        Ok(point)
    }

    fn check(&self) -> Result<()> {
        let normalizations = self.count(|k| *k == ConstraintKind::Normalization);
        if normalizations != 1 {
            return Err(Error::MalformedSystem(format!(
                "expected exactly one normalization constraint, found {normalizations}"
            )));
        }
        let mut referenced = vec![false; self.num_vars()];
        for (_, c) in &self.constraints {
            for (v, _) in &c.coeffs {
                match referenced.get_mut(*v) {
                    Some(r) => *r = true,
                    None => return Err(Error::MalformedSystem(format!("undeclared variable {v}"))),
                }
            }
        }
        if let Some(v) = referenced.iter().position(|r| !r) {
            return Err(Error::MalformedSystem(format!(
                "variable {v} is never referenced"
            )));
        }
        Ok(())
    }

    fn program(&self) -> LinearProgram<Rational> {
        let mut objective = vec![Rational::zero(); self.num_vars()];
        objective[self.slack_var()] = Rational::one();
        LinearProgram {
            free: vec![true; self.num_vars()],
            objective,
            constraints: self.constraints.iter().map(|(_, c)| c.clone()).collect(),
        }
    }
}

fn require_consistent(b: &Betweenness) -> Result<()> {
    match b.first_conflict() {
        None => Ok(()),
        Some((t, u)) => Err(Error::Inconsistent(format!("{t:?}"), format!("{u:?}"))),
    }
}

pub fn build_realization_system(b: &Betweenness, variant: Variant) -> Result<LinearSystem> {
    require_consistent(b)?;
    let n = b.n();
    let eps = n * (n - 1);
    let one = Rational::one;
    let d = |i, j| pair_var(n, i, j);
    let mut constraints = Vec::new();
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            constraints.push((
                ConstraintKind::Positivity { from: i, to: j },
                Constraint::new(
                    vec![(d(i, j), one()), (eps, -one())],
                    Relation::Ge,
                    Rational::zero(),
                ),
            ));
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if x == y || y == z || x == z {
                    continue;
                }
                let mut coeffs = vec![(d(x, z), one()), (d(x, y), -one()), (d(y, z), -one())];
                if b.contains((x, y, z)) {
                    constraints.push((
                        ConstraintKind::Between { triple: (x, y, z) },
                        Constraint::new(coeffs, Relation::Eq, Rational::zero()),
                    ));
                } else {
                    coeffs.push((eps, one()));
                    constraints.push((
                        ConstraintKind::StrictTriangle { triple: (x, y, z) },
                        Constraint::new(coeffs, Relation::Le, Rational::zero()),
                    ));
                }
            }
        }
    }
    if variant == Variant::Metric {
        for i in 0..n {
            for j in i + 1..n {
                constraints.push((
                    ConstraintKind::Symmetry { from: i, to: j },
                    Constraint::new(
                        vec![(d(i, j), one()), (d(j, i), -one())],
                        Relation::Eq,
                        Rational::zero(),
                    ),
                ));
            }
        }
    }
    constraints.push((
        ConstraintKind::Normalization,
        Constraint::new((0..eps).map(|v| (v, one())).collect(), Relation::Eq, one()),
    ));
    Ok(LinearSystem {
        n,
        variant,
        constraints,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FeasibilityStatus {
    Infeasible,
    Feasible,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FeasibilityOutcome {
    pub status: FeasibilityStatus,
    #[serde(serialize_with = "serialize_opt_rational")]
    pub optimal_slack: Option<Rational>,
    pub witness: Option<RationalMatrix>,
}

impl FeasibilityOutcome {
    pub fn is_realizable(&self) -> bool {
        self.status == FeasibilityStatus::Feasible
            && self.optimal_slack.as_ref().is_some_and(Signed::is_positive)
    }
}

/// Smallest positive integer multiple of a non-negative rational vector.
fn integral_scaling(values: &[Rational]) -> Vec<Rational> {
    let lcm = values
        .iter()
        .fold(num_bigint::BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<num_bigint::BigInt> = values
        .iter()
        .map(|v| (v * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let gcd = ints
        .iter()
        .fold(num_bigint::BigInt::zero(), |acc, v| acc.gcd(v));
    let gcd = if gcd.is_zero() {
        num_bigint::BigInt::one()
    } else {
        gcd
    };
    ints.into_iter()
        .map(|v| Rational::from_integer(v / &gcd))
        .collect()
}

/// Maximizes the shared margin `ε` exactly.
///
/// When the optimum is positive, the optimal point is rescaled to the smallest
/// integer matrix and returned as a witness.
pub fn maximize_slack(sys: &LinearSystem) -> Result<FeasibilityOutcome> {
    sys.check()?;
    match sys.program().solve()? {
        LpOutcome::Infeasible => Ok(FeasibilityOutcome {
            status: FeasibilityStatus::Infeasible,
            optimal_slack: None,
            witness: None,
        }),
        LpOutcome::Unbounded => Err(Error::Unbounded),
        LpOutcome::Optimal { value, point } => {
            let witness = if value.is_positive() {
                let n = sys.n;
                let scaled = integral_scaling(&point[..sys.pair_count()]);
                Some(DistanceMatrix::from_fn(Labels::alphabetic(n), |i, j| {
                    if i == j {
                        Rational::zero()
                    } else {
                        scaled[pair_var(n, i, j)].clone()
                    }
                })?)
            } else {
                None
            };
            Ok(FeasibilityOutcome {
                status: FeasibilityStatus::Feasible,
                optimal_slack: Some(value),
                witness,
            })
        }
    }
}

/// Builds and solves the system, then re-checks any witness against `b`.
pub fn realize(b: &Betweenness, variant: Variant) -> Result<FeasibilityOutcome> {
    let outcome = maximize_slack(&build_realization_system(b, variant)?)?;
    if let Some(w) = &outcome.witness {
        if !verify_witness(w, b) || (variant == Variant::Metric && !is_symmetric(w)) {
            return Err(Error::WitnessRejected);
        }
    }
    Ok(outcome)
}

fn is_symmetric<T: Scalar>(m: &DistanceMatrix<T>) -> bool {
    (0..m.n()).all(|i| (0..i).all(|j| m.get(i, j) == m.get(j, i)))
}

/// True iff `m` is a quasi-metric whose betweenness is exactly `b`.
pub fn verify_witness<T: Scalar>(m: &DistanceMatrix<T>, b: &Betweenness) -> bool {
    m.n() == b.n() && validate_quasi_metric(m).is_ok() && betweenness_of(m) == *b
}

/// Upper limit on candidate count for the exhaustive integer search.
pub const MAX_INTEGER_CANDIDATES: u64 = 1 << 32;

/// Calls `visit` with every quasi-metric on `n` points whose off-diagonal
/// entries lie in `1..=kmax`, as a flat row-major slice, in odometer order
/// (last pair varies fastest).
pub fn for_each_integer_quasi_metric(
    n: usize,
    kmax: u32,
    mut visit: impl FnMut(&[i64]) -> ControlFlow<()>,
) -> Result<()> {
    if kmax == 0 {
        return Err(Error::InvalidBound(kmax));
    }
    crate::points::check_point_count(n)?;
    let pairs: Vec<usize> = (0..n * n).filter(|k| k / n != k % n).collect();
    let too_large = || Error::SearchTooLarge {
        n,
        max: MAX_INTEGER_CANDIDATES as usize,
    };
    let count = u64::from(kmax)
        .checked_pow(pairs.len() as u32)
        .ok_or_else(too_large)?;
    if count > MAX_INTEGER_CANDIDATES {
        return Err(too_large());
    }
    let kmax = i64::from(kmax);
    let mut d = vec![0i64; n * n];
    for &k in &pairs {
        d[k] = 1;
    }
    loop {
        if is_quasi_metric(n, &d) && visit(&d).is_break() {
            return Ok(());
        }
        let Some(k) = pairs.iter().rev().find(|&&k| d[k] < kmax) else {
            return Ok(());
        };
        d[*k] += 1;
        for &later in pairs.iter().filter(|&&p| p > *k) {
            d[later] = 1;
        }
    }
}

fn is_quasi_metric(n: usize, d: &[i64]) -> bool {
    (0..n).all(|x| {
        (0..n).all(|y| {
            y == x
                || (0..n).all(|z| z == x || z == y || d[x * n + z] <= d[x * n + y] + d[y * n + z])
        })
    })
}

/// Relabels `m` so that its betweenness becomes exactly `target`, given that
/// both share a canonical form.
pub(crate) fn align_to<T: Scalar>(
    canonizer: &Canonizer,
    m: &DistanceMatrix<T>,
    target_to_canonical: &Relabeling,
) -> Result<DistanceMatrix<T>> {
    let (_, to_canonical) = canonizer.canonical_form(&betweenness_of(m));
    let g = target_to_canonical.inverse().after(&to_canonical);
    m.permuted(g.as_slice())
}

/// Searches all quasi-metrics with off-diagonal entries in `1..=kmax` for one
/// whose betweenness is isomorphic to `b`; the returned matrix is relabeled
/// so its betweenness equals `b` exactly.
pub fn realize_bounded_integer(b: &Betweenness, kmax: u32) -> Result<Option<IntMatrix>> {
    require_consistent(b)?;
    let n = b.n();
    let canonizer = Canonizer::new(n);
    let (target, target_map) = canonizer.canonical_form(b);
    let size = b.len();
    let mut found = None;
    for_each_integer_quasi_metric(n, kmax, |d| {
        let candidate = betweenness_of_entries(n, d);
        if candidate.len() == size && canonizer.canonical(&candidate) == target {
            found = Some(d.to_vec());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    found
        .map(|d| {
            let m = DistanceMatrix::from_entries(Labels::alphabetic(n), d)?;
            align_to(&canonizer, &m, &target_map)
        })
        .transpose()
}

/// Every canonical relation realizable with entries in `1..=kmax`, mapped to
/// the first witness found, relabeled to realize the canonical relation itself.
pub fn integer_catalog(n: usize, kmax: u32) -> Result<BTreeMap<Betweenness, IntMatrix>> {
    let canonizer = Canonizer::new(n);
    let mut raw: BTreeMap<Betweenness, (Vec<i64>, Relabeling)> = BTreeMap::new();
    for_each_integer_quasi_metric(n, kmax, |d| {
        let (canon, f) = canonizer.canonical_form(&betweenness_of_entries(n, d));
        raw.entry(canon).or_insert_with(|| (d.to_vec(), f));
        ControlFlow::Continue(())
    })?;
    raw.into_iter()
        .map(|(canon, (d, f))| {
            let m =
                DistanceMatrix::from_entries(Labels::alphabetic(n), d)?.permuted(f.as_slice())?;
            Ok((canon, m))
        })
        .collect()
}
