//! Exact rational scalars with arbitrary-precision integers, plus the text
//! syntax used by algebra spec files (`3`, `-1/2`, `7/3`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Scalar type for all exact computations.
pub type Rational = BigRational;

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn from_i64(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parse `n` or `n/d` with optional sign. Rejects zero denominators.
pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Canonical text form: `3`, `-1/2`. Inverse of [`parse`].
pub fn format(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Compare by absolute value; used for minimal-magnitude pivot selection.
pub fn abs_cmp(a: &Rational, b: &Rational) -> std::cmp::Ordering {
    (a.numer().abs() * b.denom().abs()).cmp(&(b.numer().abs() * a.denom().abs()))
}
