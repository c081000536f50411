//! The two ordering identities themselves: coefficient families, both sides
//! of each identity, the zero-skipping product convention, and the exact
//! no-zero-denominator checks that justify every division along the way.
//!
//! Everything here is plain rational arithmetic; binomial coefficients are
//! always evaluated polynomially so that negative tops contribute their
//! polynomial values rather than the combinatorial zero.

mod pipeline;

pub use pipeline::{pipeline_theorem1, pipeline_theorem2, Instance, Stage, VerifyReport};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::quad::{quad, Discriminant, QuadExt};
use crate::rational::{rat, ratio, Rational};

/// Polynomial binomial coefficient `C(x, r) = x(x-1)...(x-r+1)/r!`, defined
/// for every integer `x` including negative ones.
pub fn poly_binomial(x: i64, r: u32) -> Rational {
    let mut num = rat(1);
    for i in 0..i64::from(r) {
        num *= rat(x - i);
    }
    num / crate::rational::factorial(r)
}

/// The five coefficient families appearing in the product identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoeffFamily {
    /// `c_j = j^2 + (3-3n) j + 3n^2 - 6n + 2`
    C { n: i64 },
    /// `b_j = 9j^2 - 3(n-1) j + n^2 - 2n`
    B { n: i64 },
    /// `d_j = (1/j)(m C(n,2) - (m-j) C(n-2j,2))`, evaluated polynomially
    D { m: i64, n: i64 },
    /// `p_j = 2j^2 - (2m+1) j + mn`
    P { m: i64, n: i64 },
    /// `q_j = mn - C(m+1,2) + C(j,2)`
    Q { m: i64, n: i64 },
}

impl CoeffFamily {
    /// Exact value at index `j` (closed polynomial forms throughout).
    pub fn at(&self, j: i64) -> Rational {
        match *self {
            CoeffFamily::C { n } => rat(j * j + (3 - 3 * n) * j + 3 * n * n - 6 * n + 2),
            CoeffFamily::B { n } => rat(9 * j * j - 3 * (n - 1) * j + n * n - 2 * n),
            CoeffFamily::D { m, n } => {
                let i = j - 1;
                rat(2 * i * i + (5 - 2 * m - 2 * n) * i) + ratio(6 - 6 * m - 5 * n + 4 * m * n + n * n, 2)
            }
            CoeffFamily::P { m, n } => rat(2 * j * j - (2 * m + 1) * j + m * n),
            CoeffFamily::Q { m, n } => rat(m * n) - poly_binomial(m + 1, 2) + poly_binomial(j, 2),
        }
    }
}

pub fn coeff_c(n: i64, j: i64) -> Rational {
    CoeffFamily::C { n }.at(j)
}

pub fn coeff_b(n: i64, j: i64) -> Rational {
    CoeffFamily::B { n }.at(j)
}

pub fn coeff_d(m: i64, n: i64, j: i64) -> Rational {
    CoeffFamily::D { m, n }.at(j)
}

pub fn coeff_p(m: i64, n: i64, j: i64) -> Rational {
    CoeffFamily::P { m, n }.at(j)
}

pub fn coeff_q(m: i64, n: i64, j: i64) -> Rational {
    CoeffFamily::Q { m, n }.at(j)
}

/// Quotient form `c_j = (6/j)(C(n,3) - C(n-j,3))`, `j != 0`. Agreement with
/// the polynomial form is a test, not a precondition of callers.
pub fn coeff_c_quotient(n: i64, j: i64) -> Rational {
    assert!(j != 0, "quotient form needs j != 0");
    ratio(6, j) * (poly_binomial(n, 3) - poly_binomial(n - j, 3))
}

/// Quotient form `d_j = (1/j)(m C(n,2) - (m-j) C(n-2j,2))`, `j != 0`.
pub fn coeff_d_quotient(m: i64, n: i64, j: i64) -> Rational {
    assert!(j != 0, "quotient form needs j != 0");
    (rat(m) * poly_binomial(n, 2) - rat(m - j) * poly_binomial(n - 2 * j, 2)) / rat(j)
}

/// Left side of the 3-uniform identity:
/// `sum_{i=0}^{floor(n/3)-1} prod_{j=1}^{i} -C(n-3j,3)/(C(n,3)-C(n-3j,3))`.
pub fn lhs_theorem1(n: i64) -> Result<Rational> {
    if n < 3 {
        return Err(Error::Domain(format!("lhs needs n >= 3, got {n}")));
    }
    let cn3 = poly_binomial(n, 3);
    let mut sum = rat(0);
    let mut prod = rat(1);
    for i in 0..n / 3 {
        if i > 0 {
            let top = poly_binomial(n - 3 * i, 3);
            let den = &cn3 - &top;
            assert!(!den.is_zero(), "denominator vanished at j={i}");
            prod *= -top / den;
        }
        sum += &prod;
    }
    Ok(sum)
}

/// Right side of the 3-uniform identity:
/// `floor(n/3) * prod_{j=n+1, 3 not| j}^{floor(3n/2)-2} c_j
///             / prod_{j=3, 3|j}^{n-3} c_j`.
pub fn rhs_theorem1(n: i64) -> Rational {
    assert!(n >= 3, "rhs needs n >= 3");
    let mut num = rat(1);
    for j in (n + 1)..=(3 * n / 2 - 2) {
        if j % 3 != 0 {
            let c = coeff_c(n, j);
            assert!(!c.is_zero(), "c_{j} vanished");
            num *= c;
        }
    }
    let mut den = rat(1);
    for j in 3..=(n - 3) {
        if j % 3 == 0 {
            let c = coeff_c(n, j);
            assert!(!c.is_zero(), "c_{j} vanished");
            den *= c;
        }
    }
    rat(n / 3) * num / den
}

/// Product of the nonzero entries; empty and all-zero products are 1.
/// This is the Iverson-bracket convention `prod_j (a_j + [a_j = 0])`.
pub fn prod_skip_zeros<I>(values: I) -> Rational
where
    I: IntoIterator<Item = Rational>,
{
    let mut out = rat(1);
    for v in values {
        if !v.is_zero() {
            out *= v;
        }
    }
    out
}

/// Left side of the bipartite identity:
/// `sum_{i=0}^{min(m, floor(n/2))} prod_{j=1}^{i}
///    -(m-j) C(n-2j,2) / (m C(n,2) - (m-j) C(n-2j,2))`.
pub fn lhs_theorem2(m: i64, n: i64) -> Result<Rational> {
    if m < 1 || n < 2 {
        return Err(Error::Domain(format!(
            "lhs needs m >= 1 and n >= 2, got ({m}, {n})"
        )));
    }
    let mc = rat(m) * poly_binomial(n, 2);
    let mut sum = rat(0);
    let mut prod = rat(1);
    for i in 0..=m.min(n / 2) {
        if i > 0 {
            let top = rat(m - i) * poly_binomial(n - 2 * i, 2);
            let den = &mc - &top;
            assert!(!den.is_zero(), "denominator vanished at j={i}");
            prod *= -top / den;
        }
        sum += &prod;
    }
    Ok(sum)
}

/// Right side of the bipartite identity with the zero-skipping convention:
/// `m * prod_skip_zeros(q_j) / prod_skip_zeros(d_j)`, `j = 1..m-1`.
pub fn rhs_theorem2(m: i64, n: i64) -> Rational {
    rhs_theorem2_with_skips(m, n).0
}

/// Same as [`rhs_theorem2`], also reporting which factors were skipped as
/// zeros (the convention only ever fires on this side).
pub fn rhs_theorem2_with_skips(m: i64, n: i64) -> (Rational, Vec<String>) {
    assert!(m >= 1 && n >= 2, "rhs needs m >= 1 and n >= 2");
    let mut skips = Vec::new();
    let mut num = rat(1);
    let mut den = rat(1);
    for j in 1..m {
        let qv = coeff_q(m, n, j);
        if qv.is_zero() {
            skips.push(format!("q({j})=0"));
        } else {
            num *= qv;
        }
        let dv = coeff_d(m, n, j);
        if dv.is_zero() {
            skips.push(format!("d({j})=0"));
        } else {
            den *= dv;
        }
    }
    (rat(m) * num / den, skips)
}

/// Exact no-division-by-zero checks for the bipartite pipeline, decided in
/// the quadratic extension with radicand `Y^2 = (2m+1)^2 - 8mn`:
///
/// * `(9 + 2m - 2n +- Y)/4` is never a nonpositive integer;
/// * `(5 - 2m - 2n +- Y)/4` and `(-1 - 2m +- Y)/4` are never integers in
///   `[2 - n/2, 0]`.
///
/// Irrational or nonreal values pass vacuously; rational values (a collapsed
/// perfect-square radicand) get the exact integer/range test.
pub fn lemma_checks(m: i64, n: i64) -> bool {
    assert!(m >= 1 && n >= 2, "lemma checks need m >= 1 and n >= 2");
    let disc = Discriminant::y_family(m, n);
    let lo_bound = rat(2) - ratio(n, 2);
    for sign in [1i64, -1] {
        let a2 = quad(9 + 2 * m - 2 * n, sign, 4, &disc);
        if a2.is_nonpositive_integer() {
            return false;
        }
        for base in [5 - 2 * m - 2 * n, -1 - 2 * m] {
            let t = quad(base, sign, 4, &disc);
            if let Ok(r) = t.as_rational() {
                if r.is_integer() && r >= lo_bound && r <= rat(0) {
                    return false;
                }
            }
        }
    }
    true
}

/// Shared helper: the pair `(base +- sqrt(D))/den` for a family
/// discriminant. Both signs are constructed explicitly: once a
/// perfect-square radicand collapses, conjugation is the identity, so
/// `x.conj()` would lose the second value.
pub(crate) fn conjugate_pair(base: i64, den: i64, disc: &Discriminant) -> (QuadExt, QuadExt) {
    (quad(base, 1, den, disc), quad(base, -1, den, disc))
}
