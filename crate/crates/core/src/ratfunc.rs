//! Rational functions in one variable over the rationals, kept reduced with
//! a monic denominator, plus a small expression parser for CLI input like
//! `k/(k+1)` or `-(9k^2-3k+18)/(12(k+1))`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::{rat, Rational};

/// A fully reduced ratio of polynomials; the denominator is monic and
/// nonzero, and zero is represented as `0/1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g = Poly::gcd(&num, &den);
        let (num, den) = if g.degree().unwrap_or(0) >= 1 {
            (num.div_exact(&g), den.div_exact(&g))
        } else {
            (num, den)
        };
        let lead = den.leading().expect("nonzero denominator").clone();
        let inv = rat(1) / lead;
        Ok(Self {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn from_poly(p: Poly) -> Self {
        Self {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            &(&self.num * &other.den) + &(&other.num * &self.den),
            &self.den * &other.den,
        )
        .expect("nonzero denominators")
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(
            &(&self.num * &other.den) - &(&other.num * &self.den),
            &self.den * &other.den,
        )
        .expect("nonzero denominators")
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(&self.num * &other.num, &self.den * &other.den).expect("nonzero denominators")
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(&self.num * &other.den, &self.den * &other.num)
    }

    /// `R(k + s)`.
    pub fn shift_int(&self, s: i64) -> Self {
        Self::new(self.num.shift_int(s), self.den.shift_int(s)).expect("shift keeps den nonzero")
    }

    /// Exact evaluation; `None` at a pole.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x) / d)
    }

    /// True iff the denominator vanishes at the integer `k`.
    pub fn has_pole_at(&self, k: i64) -> bool {
        self.den.eval(&rat(k)).is_zero()
    }

    /// Numerator and denominator rescaled by a common factor so that all
    /// coefficients are integers with no common content and the denominator's
    /// leading coefficient is positive. Display-only normalization.
    fn integer_normalized(&self) -> (Poly, Poly) {
        let mut l = BigInt::one();
        for c in self.num.coeffs().iter().chain(self.den.coeffs()) {
            l = l.lcm(c.denom());
        }
        let lr = Rational::from_integer(l);
        let num = self.num.scale(&lr);
        let den = self.den.scale(&lr);
        let mut g = BigInt::zero();
        for c in num.coeffs().iter().chain(den.coeffs()) {
            g = g.gcd(c.numer());
        }
        if g.is_zero() || g.is_one() {
            (num, den)
        } else {
            let inv = Rational::from_integer(g).recip();
            (num.scale(&inv), den.scale(&inv))
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = self.integer_normalized();
        if den == Poly::one() {
            write!(f, "{num}")
        } else {
            write!(f, "({num})/({den})")
        }
    }
}

/// Parses an expression in the variable `k` into a rational function.
///
/// Supported syntax: integers, `k`, `+ - * / ^`, parentheses, and implicit
/// multiplication by adjacency (`12(k+1)`, `3k`). Exponents are nonnegative
/// integers.
pub fn parse_ratfunc(input: &str) -> Result<RatFunc> {
    let mut p = Parser {
        bytes: input.as_bytes(),
        pos: 0,
        input,
    };
    let value = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.error("trailing input"));
    }
    Ok(value)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    input: &'a str,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at byte {} of {:?}", self.pos, self.input))
    }

    fn skip_ws(&mut self) {
        while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut negate = false;
        if let Some(c) = self.peek() {
            if c == b'+' || c == b'-' {
                self.pos += 1;
                negate = c == b'-';
            }
        }
        let mut acc = self.term()?;
        if negate {
            acc = RatFunc::zero().sub(&acc);
        }
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                b'-' => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = acc
                        .checked_div(&f)
                        .map_err(|_| self.error("division by a zero expression"))?;
                }
                // implicit multiplication: `12(k+1)`, `3k`, `(k+1)(k+2)`
                Some(c) if c == b'(' || c == b'k' || c.is_ascii_digit() => {
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RatFunc> {
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self
                .uint()?
                .to_u32()
                .filter(|&e| e <= 64)
                .ok_or_else(|| self.error("exponent too large"))?;
            let mut out = RatFunc::one();
            for _ in 0..e {
                out = out.mul(&base);
            }
            return Ok(out);
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'k') => {
                self.pos += 1;
                Ok(RatFunc::from_poly(Poly::var()))
            }
            Some(b'-') => {
                self.pos += 1;
                let inner = self.primary()?;
                Ok(RatFunc::zero().sub(&inner))
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.uint()?;
                Ok(RatFunc::constant(Rational::from_integer(v)))
            }
            _ => Err(self.error("expected a number, 'k', or '('")),
        }
    }

    fn uint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected digits"));
        }
        self.input[start..self.pos]
            .parse::<BigInt>()
            .map_err(|_| self.error("invalid integer"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use proptest::prelude::*;

    #[test]
    fn normalization() {
        // (k^2 - 1)/(2k + 2) reduces to (k - 1)/2 with monic denominator.
        let r = RatFunc::new(
            Poly::from_int_coeffs(&[-1, 0, 1]),
            Poly::from_int_coeffs(&[2, 2]),
        )
        .unwrap();
        assert_eq!(r.num(), &Poly::new(vec![ratio(-1, 2), ratio(1, 2)]));
        assert_eq!(r.den(), &Poly::one());
        assert!(RatFunc::new(Poly::one(), Poly::zero()).is_err());
    }

    #[test]
    fn arithmetic_and_eval() {
        let r = RatFunc::new(Poly::var(), Poly::from_int_coeffs(&[1, 1])).unwrap();
        let s = r.add(&RatFunc::one());
        // k/(k+1) + 1 = (2k+1)/(k+1)
        assert_eq!(
            s,
            RatFunc::new(Poly::from_int_coeffs(&[1, 2]), Poly::from_int_coeffs(&[1, 1])).unwrap()
        );
        assert_eq!(r.eval(&rat(1)).unwrap(), ratio(1, 2));
        assert!(r.eval(&rat(-1)).is_none());
        assert!(r.has_pole_at(-1));
        assert_eq!(r.shift_int(1).eval(&rat(0)).unwrap(), ratio(1, 2));
    }

    #[test]
    fn display() {
        let r = RatFunc::new(
            Poly::new(vec![ratio(-3, 2), ratio(1, 4), ratio(-3, 4)]),
            Poly::from_int_coeffs(&[1, 1]),
        )
        .unwrap();
        assert_eq!(r.to_string(), "(-3*k^2 + k - 6)/(4*k + 4)");
        assert_eq!(RatFunc::from_poly(Poly::var()).to_string(), "k");
    }

    #[test]
    fn parser_examples() {
        assert_eq!(parse_ratfunc("1").unwrap(), RatFunc::one());
        assert_eq!(
            parse_ratfunc("k/(k+1)").unwrap(),
            RatFunc::new(Poly::var(), Poly::from_int_coeffs(&[1, 1])).unwrap()
        );
        let r = parse_ratfunc("-(9k^2-3k+18)/(12(k+1))").unwrap();
        let expect = RatFunc::new(
            Poly::from_int_coeffs(&[-18, 3, -9]),
            Poly::from_int_coeffs(&[12, 12]),
        )
        .unwrap();
        assert_eq!(r, expect);
        assert_eq!(parse_ratfunc("2^3").unwrap(), RatFunc::constant(rat(8)));
        assert_eq!(parse_ratfunc("3k").unwrap(), parse_ratfunc("3*k").unwrap());
        assert!(parse_ratfunc("k+").is_err());
        assert!(parse_ratfunc("1/(k-k)").is_err());
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec((-9i64..=9, 1i64..=3), 1..=4)
            .prop_map(|cs| Poly::new(cs.into_iter().map(|(p, q)| ratio(p, q)).collect()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn display_parse_round_trip(num in arb_poly(), den in arb_poly()) {
            prop_assume!(!den.is_zero());
            let r = RatFunc::new(num, den).unwrap();
            let back = parse_ratfunc(&r.to_string()).unwrap();
            prop_assert_eq!(back, r);
        }

        #[test]
        fn field_consistency(n1 in arb_poly(), d1 in arb_poly(), n2 in arb_poly(), d2 in arb_poly()) {
            prop_assume!(!d1.is_zero() && !d2.is_zero());
            let a = RatFunc::new(n1, d1).unwrap();
            let b = RatFunc::new(n2, d2).unwrap();
            prop_assert_eq!(a.add(&b).sub(&b), a.clone());
            if !b.is_zero() {
                prop_assert_eq!(a.checked_div(&b).unwrap().mul(&b), a);
            }
        }
    }
}
