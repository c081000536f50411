//! Dense univariate polynomials over the rationals.
//!
//! Coefficients are stored in ascending degree with the leading coefficient
//! nonzero; the zero polynomial is the empty list. The variable renders as
//! `k` to match the summation index it always stands for here.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};

use crate::rational::{rat, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(rat(1))
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `k`.
    pub fn var() -> Self {
        Self::new(vec![rat(0), rat(1)])
    }

    pub fn from_int_coeffs(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Coefficient of `k^i` (zero beyond the stored length).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(|| rat(0))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut out = rat(0);
        for c in self.coeffs.iter().rev() {
            out = out * x + c;
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|c| c * r).collect())
    }

    /// `p(k + s)` by Horner composition.
    pub fn compose_shift(&self, s: &Rational) -> Self {
        let mut out = Poly::zero();
        for c in self.coeffs.iter().rev() {
            // out = out * (k + s) + c
            let mut shifted = vec![rat(0); out.coeffs.len() + 1];
            for (i, oc) in out.coeffs.iter().enumerate() {
                shifted[i + 1] += oc;
                shifted[i] += oc * s;
            }
            let mut next = Poly::new(shifted);
            if next.coeffs.is_empty() {
                next.coeffs.push(c.clone());
            } else {
                next.coeffs[0] += c;
            }
            out = Poly::new(next.coeffs);
        }
        out
    }

    pub fn shift_int(&self, s: i64) -> Self {
        self.compose_shift(&rat(s))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => self.scale(&(rat(1) / l)),
        }
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        if rem.len() < divisor.coeffs.len() {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![rat(0); rem.len() - dd];
        let lead = divisor.leading().unwrap().clone();
        for i in (dd..rem.len()).rev() {
            let c = &rem[i] / &lead;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    let idx = i - dd + j;
                    rem[idx] = &rem[idx] - &(dc * &c);
                }
            }
            quot[i - dd] = c;
        }
        (Poly::new(quot), Poly::new(rem))
    }

    /// Exact division; panics if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Poly) -> Poly {
        let (q, r) = self.div_rem(divisor);
        assert!(r.is_zero(), "division was not exact");
        q
    }

    /// Monic greatest common divisor by the Euclidean algorithm.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y);
            x = y;
            y = r;
        }
        x.monic()
    }

    /// `(k + 1)^n`-style powers used by the telescoping solver.
    pub fn pow_linear_shift(exp: usize) -> Poly {
        let mut out = Poly::one();
        let base = Poly::new(vec![rat(1), rat(1)]);
        for _ in 0..exp {
            out = &out * &base;
        }
        out
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![rat(0); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Poly::new(out)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![rat(0); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] -= c;
        }
        Poly::new(out)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![rat(0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit = mag == rat(1);
            match i {
                0 => write!(f, "{mag}")?,
                1 => {
                    if unit {
                        write!(f, "k")?;
                    } else {
                        write!(f, "{mag}*k")?;
                    }
                }
                _ => {
                    if unit {
                        write!(f, "k^{i}")?;
                    } else {
                        write!(f, "{mag}*k^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
