//! Scalar abstractions shared by distance matrices and the simplex solver.
//!
//! Everything that decides betweenness relies on exact equality, so the
//! intended instantiations are exact types: [`Rational`](crate::Rational)
//! for general distances and `i64` for the integer-grid and digraph searches.
//! `f64` satisfies the bounds as well, but only integer-valued inputs give
//! trustworthy results with it.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, RefNum, Signed, Zero};

/// Ordered ring element usable as a distance value.
pub trait Scalar: Num + Clone + PartialOrd + Debug {}

impl<T> Scalar for T where T: Num + Clone + PartialOrd + Debug {}

/// Ordered field element usable as simplex arithmetic.
pub trait Field: Scalar + Signed
where
    for<'a> &'a Self: RefNum<Self>,
{
}

impl<T> Field for T
where
    T: Scalar + Signed,
    for<'a> &'a T: RefNum<T>,
{
}

/// Parses a non-negative rational written as `7` or `7/3`.
///
/// Decimal and signed forms are rejected on purpose; the grammar is
/// `digits ( '/' digits )?` with a non-zero denominator.
pub fn parse_rational(token: &str) -> Option<BigRational> {
    let (num, den) = match token.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (token, None),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits(num) || !den.is_none_or(digits) {
        return None;
    }
    let numer: BigInt = num.parse().ok()?;
    let denom: BigInt = match den {
        Some(d) => d.parse().ok()?,
        None => BigInt::from(1),
    };
    if denom.is_zero() {
        return None;
    }
    Some(BigRational::new(numer, denom))
}

/// Lossless conversion of an integer scalar into a rational.
pub fn rational_from_i64(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Serializes an optional rational as its `n` or `n/d` string.
pub(crate) fn serialize_opt_rational<S: serde::Serializer>(
    v: &Option<BigRational>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_rational("3"), Some(rational_from_i64(3)));
        let half = parse_rational("2/4").unwrap();
        assert_eq!(half, BigRational::new(1.into(), 2.into()));
        assert_eq!(parse_rational("0"), Some(BigRational::zero()));
    }

    #[test]
    fn rejects_decimals_signs_and_zero_denominators() {
        for bad in ["0.5", "-1", "+1", "1/0", "", "/2", "1/", "1e3", "a"] {
            assert_eq!(parse_rational(bad), None, "{bad:?} should be rejected");
        }
    }
}
