//! Exact arithmetic in a quadratic extension of the rationals.
//!
//! A value is kept as `a + b*sqrt(D)` with reduced rational coordinates and a
//! per-value radicand `D`. No floating point is involved anywhere: negative
//! radicands are handled formally, and a radicand that is the square of a
//! rational collapses into the rational part at construction, so "is this a
//! (nonpositive) integer" stays decidable for every value.
//!
//! Values with a zero surd part are plain rationals and combine with any
//! discriminant; combining two genuinely irrational values requires equal
//! discriminants and is reported as a usage error otherwise.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{rat, ratio, Rational};

/// The radicand `D` of a quadratic extension, together with its exact square
/// root when `D` is the square of a rational.
#[derive(Clone, Debug)]
pub struct Discriminant {
    value: Rational,
    sqrt: Option<Rational>,
}

impl PartialEq for Discriminant {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl Eq for Discriminant {}

impl Discriminant {
    pub fn new(value: Rational) -> Self {
        let sqrt = rational_sqrt(&value);
        Self { value, sqrt }
    }

    /// Radicand `1 + 6n - 3n^2`. Nonzero for every integer `n` (it is odd
    /// in absolute value mod considerations aside, `3n^2 - 6n - 1` has no
    /// integer roots), asserted at construction.
    pub fn x_family(n: i64) -> Self {
        let d = rat(1 + 6 * n - 3 * n * n);
        assert!(!d.is_zero(), "x-family radicand must be nonzero");
        Self::new(d)
    }

    /// Radicand `(2m+1)^2 - 8mn`: odd minus even, hence never zero
    /// (asserted at construction).
    pub fn y_family(m: i64, n: i64) -> Self {
        let d = rat((2 * m + 1) * (2 * m + 1) - 8 * m * n);
        assert!(!d.is_zero(), "y-family radicand must be nonzero");
        Self::new(d)
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    /// True iff the radicand is the square of a rational.
    pub fn is_square(&self) -> bool {
        self.sqrt.is_some()
    }

    pub fn sqrt(&self) -> Option<&Rational> {
        self.sqrt.as_ref()
    }
}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Exact square root of a nonnegative rational, if it is itself rational.
fn rational_sqrt(v: &Rational) -> Option<Rational> {
    if v.is_negative() {
        return None;
    }
    let sn = v.numer().sqrt();
    if &(&sn * &sn) != v.numer() {
        return None;
    }
    let sd = v.denom().sqrt();
    if &(&sd * &sd) != v.denom() {
        return None;
    }
    Some(Rational::new(sn, sd))
}

/// An element `a + b*sqrt(D)` of a quadratic extension of the rationals.
#[derive(Clone, Debug)]
pub struct QuadExt {
    a: Rational,
    b: Rational,
    disc: Discriminant,
}

impl QuadExt {
    /// Builds `a + b*sqrt(D)`, collapsing a perfect-square radicand into the
    /// rational part so that `b != 0` implies `sqrt(D)` is irrational.
    pub fn new(a: Rational, b: Rational, disc: Discriminant) -> Self {
        if !b.is_zero() {
            if let Some(s) = disc.sqrt() {
                return Self {
                    a: a + b * s,
                    b: Rational::zero(),
                    disc,
                };
            }
        }
        Self { a, b, disc }
    }

    pub fn rational(a: Rational) -> Self {
        Self {
            a,
            b: Rational::zero(),
            disc: Discriminant::new(Rational::one()),
        }
    }

    pub fn integer(v: i64) -> Self {
        Self::rational(rat(v))
    }

    /// `sqrt(D)` itself (collapses if `D` is a perfect square).
    pub fn sqrt_of(disc: Discriminant) -> Self {
        Self::new(Rational::zero(), Rational::one(), disc)
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn surd_part(&self) -> &Rational {
        &self.b
    }

    pub fn discriminant(&self) -> &Discriminant {
        &self.disc
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// True iff the value lies in the rationals (zero surd part).
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The exact rational value; errors when a surd part remains.
    pub fn as_rational(&self) -> Result<Rational> {
        if self.b.is_zero() {
            Ok(self.a.clone())
        } else {
            Err(Error::IrrationalResult(self.to_string()))
        }
    }

    pub fn is_nonpositive_integer(&self) -> bool {
        self.b.is_zero() && crate::rational::is_nonpositive_integer(&self.a)
    }

    /// Conjugation `a + b*sqrt(D) -> a - b*sqrt(D)`.
    pub fn conj(&self) -> Self {
        Self {
            a: self.a.clone(),
            b: -self.b.clone(),
            disc: self.disc.clone(),
        }
    }

    /// The field norm `x * conj(x) = a^2 - b^2 * D`, always rational.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * self.disc.value()
    }

    fn merged_disc(&self, other: &Self) -> Result<Discriminant> {
        if self.b.is_zero() && !other.b.is_zero() {
            Ok(other.disc.clone())
        } else if other.b.is_zero() || self.disc == other.disc {
            Ok(self.disc.clone())
        } else {
            Err(Error::MismatchedDiscriminants {
                left: self.disc.to_string(),
                right: other.disc.to_string(),
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let disc = self.merged_disc(other)?;
        Ok(Self::new(&self.a + &other.a, &self.b + &other.b, disc))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        let disc = self.merged_disc(other)?;
        Ok(Self::new(&self.a - &other.a, &self.b - &other.b, disc))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let disc = self.merged_disc(other)?;
        let a = &self.a * &other.a + &self.b * &other.b * disc.value();
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::new(a, b, disc))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let disc = self.merged_disc(other)?;
        if other.b.is_zero() {
            return Ok(Self::new(&self.a / &other.a, &self.b / &other.a, disc));
        }
        // Multiply by the conjugate; the norm is nonzero because a perfect
        // square radicand would have been collapsed (b = 0).
        let nrm = other.norm();
        debug_assert!(!nrm.is_zero());
        let num = self.checked_mul(&other.conj())?;
        Ok(Self::new(num.a / &nrm, num.b / &nrm, disc))
    }

    /// `self + k` for an integer shift, preserving the discriminant.
    pub fn add_int(&self, k: i64) -> Self {
        Self {
            a: &self.a + rat(k),
            b: self.b.clone(),
            disc: self.disc.clone(),
        }
    }

    /// `self * r` for a rational scalar.
    pub fn scale(&self, r: &Rational) -> Self {
        Self {
            a: &self.a * r,
            b: &self.b * r,
            disc: self.disc.clone(),
        }
    }
}

impl PartialEq for QuadExt {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a
            && self.b == other.b
            && (self.b.is_zero() || self.disc == other.disc)
    }
}

impl Eq for QuadExt {}

/// Performs one checked field operation; exposed so callers that accept
/// untrusted operand pairs get mismatches and division by zero as errors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn quad_arith(x: &QuadExt, y: &QuadExt, op: ArithOp) -> Result<QuadExt> {
    match op {
        ArithOp::Add => x.checked_add(y),
        ArithOp::Sub => x.checked_sub(y),
        ArithOp::Mul => x.checked_mul(y),
        ArithOp::Div => x.checked_div(y),
    }
}

pub fn quad_conj(x: &QuadExt) -> QuadExt {
    x.conj()
}

pub fn as_rational(x: &QuadExt) -> Result<Rational> {
    x.as_rational()
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: &QuadExt) -> QuadExt {
                self.$checked(rhs).expect("operands from different extensions")
            }
        }
        impl $trait for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: &QuadExt) -> QuadExt {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt {
            a: -self.a.clone(),
            b: -self.b.clone(),
            disc: self.disc.clone(),
        }
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        -&self
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.b.is_negative() {
            write!(f, "{} - {}*sqrt({})", self.a, -self.b.clone(), self.disc)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.disc)
        }
    }
}

impl FromStr for QuadExt {
    type Err = Error;

    /// Parses the rendering produced by `Display`: either `p/q` or
    /// `p/q + r/s*sqrt(D)` (with `-` in place of `+` for a negative surd part).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid quadratic-extension literal: {s:?}"));
        let s = s.trim();
        let Some(tail_at) = s.find("*sqrt(") else {
            let a: Rational = s.parse().map_err(|_| bad())?;
            return Ok(Self::rational(a));
        };
        let head = &s[..tail_at];
        let inner = &s[tail_at + "*sqrt(".len()..];
        let disc_str = inner.strip_suffix(')').ok_or_else(bad)?;
        let (a_str, b_str, negate) = if let Some(i) = head.rfind(" + ") {
            (&head[..i], &head[i + 3..], false)
        } else if let Some(i) = head.rfind(" - ") {
            (&head[..i], &head[i + 3..], true)
        } else {
            return Err(bad());
        };
        let a: Rational = a_str.trim().parse().map_err(|_| bad())?;
        let mut b: Rational = b_str.trim().parse().map_err(|_| bad())?;
        if negate {
            b = -b;
        }
        let d: Rational = disc_str.trim().parse().map_err(|_| bad())?;
        Ok(Self::new(a, b, Discriminant::new(d)))
    }
}

/// Convenience for spelling `(p + q*sqrt(D))/r`-style constants in tests and
/// family definitions: `(num_a + num_b*sqrt(D)) / den`.
pub fn quad(num_a: i64, num_b: i64, den: i64, disc: &Discriminant) -> QuadExt {
    QuadExt::new(ratio(num_a, den), ratio(num_b, den), disc.clone())
}
