//! Arbitrary-precision rational scalars plus small helpers used throughout.
//!
//! `Rational` is kept in reduced form with a positive denominator by the
//! underlying `num` implementation, so exact equality is structural.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

/// The exact scalar everything in this crate reduces to.
pub type Rational = BigRational;

/// `v` as a rational.
pub fn rat(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `p/q` as a reduced rational. Panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// True iff `r` is an integer `<= 0`.
pub fn is_nonpositive_integer(r: &Rational) -> bool {
    r.is_integer() && !r.is_positive()
}

/// Integer value of `r` when it is an integer that fits in `i64`.
pub fn as_i64(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.numer().to_i64()
    } else {
        None
    }
}

/// `k!` as a rational.
pub fn factorial(k: u32) -> Rational {
    let mut out = BigInt::one();
    for i in 2..=u64::from(k) {
        out *= i;
    }
    Rational::from_integer(out)
}
