//! Lines and betweenness of finite quasi-metric spaces.
//!
//! The crate computes the betweenness relation and the lines of a finite
//! quasi-metric space, decides whether a candidate betweenness is realized by
//! a quasi-metric, a metric, a bounded-integer quasi-metric or a digraph, and
//! exhaustively classifies the consistent relations on three and four points.
//!
//! Distance math is generic over [`Scalar`]; exact decisions use [`Rational`]
//! (and `i64` for integer searches).

pub mod betweenness;
pub mod digraph;
pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod isomorphism;
pub mod lines;
pub mod matrix;
pub mod points;
pub mod realize;
pub mod scalar;
pub mod simplex;
pub mod verify;

pub use betweenness::{betweenness_of, consistency_check, Betweenness, Triple};
pub use digraph::{realize_digraph, Digraph};
pub use enumerate::{
    classify, classify_with, consistent_patterns_on_support, enumerate_consistent,
    verify_theorem_four_points, ClassificationRecord, ClassifyOptions, TheoremReport,
};
pub use error::{Error, Result};
pub use isomorphism::{apply_relabeling, canonical_form, isomorphism_witness, Relabeling};
pub use lines::{dbe_verdict, line_of_pair, line_set, DbeVerdict, LineSet};
pub use matrix::{segment, validate_quasi_metric, DistanceMatrix, Validation, Violation};
pub use points::{Labels, PointSet};
pub use realize::{
    build_realization_system, maximize_slack, realize, realize_bounded_integer, verify_witness,
    FeasibilityOutcome, LinearSystem, Variant,
};
pub use scalar::{Field, Scalar};

/// Exact arbitrary-precision fraction.
pub type Rational = num_rational::BigRational;

/// Distances as exact rationals; the general model.
pub type RationalMatrix = DistanceMatrix<Rational>;

/// Integer distances, used by the bounded-integer and digraph searches.
pub type IntMatrix = DistanceMatrix<i64>;

/// Floating-point distances. Betweenness uses exact equality, so only
/// integer-valued inputs are reliable.
pub type FloatMatrix = DistanceMatrix<f64>;
