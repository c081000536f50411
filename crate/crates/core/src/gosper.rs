//! Gosper's algorithm for hypergeometric telescoping, certificate
//! verification, and the concrete series families whose sums the rest of the
//! crate pins down.
//!
//! A certificate is a rational function `R(k)` with
//! `t_k = R(k+1) t_{k+1} - R(k) t_k`, so that `sum_{k=k0}^{k1} t_k`
//! telescopes to `R(k1+1) t_{k1+1} - R(k0) t_{k0}`. Verifying one amounts to
//! checking `R(k+1) r(k) - R(k) = 1` where `r(k) = t_{k+1}/t_k`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergeom::HTerm;
use crate::poly::Poly;
use crate::quad::{quad, Discriminant, QuadExt};
use crate::ratfunc::RatFunc;
use crate::rational::{rat, ratio, Rational};

/// The consecutive-term ratio `t_{k+1} / t_k` of a hypergeometric term as an
/// element of Q(k). Conjugate lower-parameter pairs expand to rational
/// coefficients; anything irrational left over is an error.
pub fn term_ratio(term: &HTerm) -> Result<RatFunc> {
    let num = expand_linear_factors(term.upper())?;
    let mut den = expand_linear_factors(term.lower())?;
    den = &den * &Poly::from_int_coeffs(&[1, 1]); // the (k+1) from k!
    RatFunc::new(num, den)
}

/// Expands `prod_i (k + p_i)` over the rationals.
fn expand_linear_factors(params: &[QuadExt]) -> Result<Poly> {
    // Coefficients in the extension first, then demand rationality.
    let mut coeffs = vec![QuadExt::one()];
    for p in params {
        let mut next = vec![QuadExt::zero(); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = &next[i + 1] + c;
            next[i] = &next[i] + &c.checked_mul(p)?;
        }
        coeffs = next;
    }
    let mut out = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        out.push(c.as_rational().map_err(|_| Error::RatioNotRational)?);
    }
    Ok(Poly::new(out))
}

/// Upper bound on the magnitude of any (complex) root, Fujiwara-style:
/// `2 * max_i |c_{d-i}/c_d|^{1/i}`, rounded up. Used to bound how far two
/// roots of the given polynomials can sit apart.
fn root_bound(p: &Poly) -> i64 {
    let Some(d) = p.degree() else { return 0 };
    if d == 0 {
        return 0;
    }
    let lead = p.leading().unwrap();
    let mut best: i64 = 0;
    for i in 1..=d {
        let q = (p.coeff(d - i) / lead).abs();
        // ceil(q)
        let t = (q.numer() + q.denom() - BigInt::one()) / q.denom();
        if t.is_zero() {
            continue;
        }
        let mut r = t.nth_root(i as u32);
        if num_traits::pow(r.clone(), i) < t {
            r += 1;
        }
        best = best.max(r.to_i64().unwrap_or(i64::MAX / 4));
    }
    best.saturating_mul(2).saturating_add(1)
}

/// Nonnegative integer shifts `h` with `gcd(a(k), b(k+h))` nonconstant.
/// Any such `h` is a difference of a root of `b` and a root of `a`, so the
/// search range is bounded by the two root bounds. The range is capped; for
/// the families in this crate the bound is far below the cap, and a missed
/// shift can only cause a false "not summable", never a wrong certificate.
fn shift_gcd_candidates(a: &Poly, b: &Poly) -> Vec<i64> {
    const CAP: i64 = 65_536;
    let bound = root_bound(a).saturating_add(root_bound(b)).min(CAP);
    let mut out = Vec::new();
    for h in 0..=bound {
        let g = Poly::gcd(a, &b.shift_int(h));
        if g.degree().unwrap_or(0) >= 1 {
            out.push(h);
        }
    }
    out
}

/// Gosper's algorithm over Q(k). Given the reduced consecutive-term ratio of
/// a hypergeometric term, returns `R(k)` with `t_k = R(k+1)t_{k+1} - R(k)t_k`
/// when the term has a hypergeometric antidifference, `None` otherwise.
pub fn gosper_find(ratio: &RatFunc) -> Option<RatFunc> {
    if ratio.is_zero() {
        return None;
    }
    // Decompose ratio = (a/b) * (c(k+1)/c(k)) with gcd(a(k), b(k+h)) = 1
    // for every h >= 0.
    let mut a = ratio.num().clone();
    let mut b = ratio.den().clone();
    let mut c = Poly::one();
    for h in shift_gcd_candidates(ratio.num(), ratio.den()) {
        let g = Poly::gcd(&a, &b.shift_int(h));
        if g.degree().unwrap_or(0) >= 1 {
            a = a.div_exact(&g);
            b = b.div_exact(&g.shift_int(-h));
            for i in 1..=h {
                c = &c * &g.shift_int(-i);
            }
        }
    }

    // Solve a(k) x(k+1) - b(k-1) x(k) = c(k) for polynomial x.
    let cap_a = a;
    let cap_b = b.shift_int(-1);
    let x = solve_key_equation(&cap_a, &cap_b, &c)?;
    let r = RatFunc::new(&cap_b * &x, c).expect("c is nonzero");
    Some(r)
}

/// Degree bound plus linear solve for the Gosper equation
/// `A(k) x(k+1) - B(k) x(k) = C(k)`.
fn solve_key_equation(ca: &Poly, cb: &Poly, cc: &Poly) -> Option<Poly> {
    let lam = ca.degree()?.max(cb.degree()?) as i64;
    let deg_c = cc.degree()? as i64;
    let diff = ca - cb;
    let bound = if diff.degree() == Some(lam as usize) {
        deg_c - lam
    } else {
        let alpha = ca.coeff(lam as usize);
        let (a1, b1) = if lam >= 1 {
            (ca.coeff(lam as usize - 1), cb.coeff(lam as usize - 1))
        } else {
            (rat(0), rat(0))
        };
        let mut cand = deg_c - lam + 1;
        let k0 = (b1 - a1) / alpha;
        if let Some(v) = crate::rational::as_i64(&k0) {
            if v >= 0 {
                cand = cand.max(v);
            }
        }
        cand
    };
    if bound < 0 {
        return None;
    }
    let deg_x = bound as usize;

    // Column j is the polynomial A(k)(k+1)^j - B(k) k^j.
    let mut cols = Vec::with_capacity(deg_x + 1);
    let mut rows = cc.degree().unwrap_or(0);
    for j in 0..=deg_x {
        let kj = {
            let mut v = vec![rat(0); j + 1];
            v[j] = rat(1);
            Poly::new(v)
        };
        let col = &(ca * &Poly::pow_linear_shift(j)) - &(cb * &kj);
        rows = rows.max(col.degree().unwrap_or(0));
        cols.push(col);
    }
    let rows = rows + 1;

    // Gaussian elimination on the (rows x (deg_x+2)) augmented system.
    let mut mat: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c.coeff(i)).collect();
            row.push(cc.coeff(i));
            row
        })
        .collect();
    let ncols = deg_x + 1;
    let mut pivot_of_col = vec![usize::MAX; ncols];
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows).find(|&i| !mat[i][col].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let inv = rat(1) / mat[r][col].clone();
        for v in mat[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows {
            if i != r && !mat[i][col].is_zero() {
                let f = mat[i][col].clone();
                for j2 in col..=ncols {
                    let delta = &mat[r][j2] * &f;
                    mat[i][j2] = &mat[i][j2] - &delta;
                }
            }
        }
        pivot_of_col[col] = r;
        r += 1;
        if r == rows {
            break;
        }
    }
    // Inconsistent if a zero row has a nonzero right-hand side.
    for row in &mat {
        if row[..ncols].iter().all(|v| v.is_zero()) && !row[ncols].is_zero() {
            return None;
        }
    }
    let mut xs = vec![rat(0); ncols];
    for (col, &pr) in pivot_of_col.iter().enumerate() {
        if pr != usize::MAX {
            xs[col] = mat[pr][ncols].clone();
        }
    }
    let x = Poly::new(xs);
    if x.is_zero() {
        return None;
    }
    Some(x)
}

/// The three series families with known closed forms and certificates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertFamily {
    /// Transformed series for the 3-uniform ordering identity, n = 0,1 mod 3:
    /// upper `(1-n/3, 4/3-n/3, 2)`, lower `(11-n +- X)/6`, `X^2 = 1+6n-3n^2`.
    T1 { n: i64 },
    /// The n = 2 mod 3 variant: upper `(5/3-n/3, 1-n/3, 2)`,
    /// lower `(13-n +- X)/6`.
    T1Mod2 { n: i64 },
    /// Transformed series for the bipartite ordering identity:
    /// upper `(1-n/2, 3/2-n/2, 2)`, lower `(9+2m-2n +- Y)/4`,
    /// `Y^2 = (2m+1)^2 - 8mn`.
    T2 { m: i64, n: i64 },
}

impl CertFamily {
    /// The family covering the 3-uniform identity at `n` (residue-dependent).
    pub fn theorem1(n: i64) -> Result<Self> {
        if n < 3 {
            return Err(Error::Domain(format!("n must be >= 3, got {n}")));
        }
        Ok(if n % 3 == 2 {
            CertFamily::T1Mod2 { n }
        } else {
            CertFamily::T1 { n }
        })
    }

    /// The family covering the bipartite identity at `(m, n)`.
    pub fn theorem2(m: i64, n: i64) -> Result<Self> {
        if m < 1 || n < 2 {
            return Err(Error::Domain(format!(
                "need m >= 1 and n >= 2, got ({m}, {n})"
            )));
        }
        Ok(CertFamily::T2 { m, n })
    }

    pub fn name(&self) -> &'static str {
        match self {
            CertFamily::T1 { .. } => "t1",
            CertFamily::T1Mod2 { .. } => "t1mod2",
            CertFamily::T2 { .. } => "t2",
        }
    }

    pub fn params(&self) -> BTreeMap<String, i64> {
        let mut out = BTreeMap::new();
        match *self {
            CertFamily::T1 { n } | CertFamily::T1Mod2 { n } => {
                out.insert("n".into(), n);
            }
            CertFamily::T2 { m, n } => {
                out.insert("m".into(), m);
                out.insert("n".into(), n);
            }
        }
        out
    }

    fn from_name(name: &str, params: &BTreeMap<String, i64>) -> Result<Self> {
        let get = |k: &str| {
            params
                .get(k)
                .copied()
                .ok_or_else(|| Error::Parse(format!("missing parameter {k:?}")))
        };
        let fam = match name {
            "t1" => CertFamily::T1 { n: get("n")? },
            "t1mod2" => CertFamily::T1Mod2 { n: get("n")? },
            "t2" => CertFamily::T2 {
                m: get("m")?,
                n: get("n")?,
            },
            other => return Err(Error::Parse(format!("unknown family {other:?}"))),
        };
        fam.term()?;
        Ok(fam)
    }

    /// The family's hypergeometric term.
    pub fn term(&self) -> Result<HTerm> {
        match *self {
            CertFamily::T1 { n } => {
                if n < 3 || n % 3 == 2 {
                    return Err(Error::Domain(format!("t1 needs n >= 3, n != 2 mod 3, got {n}")));
                }
                let disc = Discriminant::x_family(n);
                let lo = quad(11 - n, 1, 6, &disc);
                let lo_conj = quad(11 - n, -1, 6, &disc);
                HTerm::new(
                    [
                        QuadExt::rational(ratio(3 - n, 3)),
                        QuadExt::rational(ratio(4 - n, 3)),
                        QuadExt::integer(2),
                    ],
                    [lo, lo_conj],
                )
            }
            CertFamily::T1Mod2 { n } => {
                if n < 3 || n % 3 != 2 {
                    return Err(Error::Domain(format!("t1mod2 needs n = 2 mod 3, got {n}")));
                }
                let disc = Discriminant::x_family(n);
                let lo = quad(13 - n, 1, 6, &disc);
                let lo_conj = quad(13 - n, -1, 6, &disc);
                HTerm::new(
                    [
                        QuadExt::rational(ratio(5 - n, 3)),
                        QuadExt::rational(ratio(3 - n, 3)),
                        QuadExt::integer(2),
                    ],
                    [lo, lo_conj],
                )
            }
            CertFamily::T2 { m, n } => {
                if m < 1 || n < 2 {
                    return Err(Error::Domain(format!("t2 needs m >= 1, n >= 2, got ({m}, {n})")));
                }
                let disc = Discriminant::y_family(m, n);
                let lo = quad(9 + 2 * m - 2 * n, 1, 4, &disc);
                let lo_conj = quad(9 + 2 * m - 2 * n, -1, 4, &disc);
                HTerm::new(
                    [
                        QuadExt::rational(ratio(2 - n, 2)),
                        QuadExt::rational(ratio(3 - n, 2)),
                        QuadExt::integer(2),
                    ],
                    [lo, lo_conj],
                )
            }
        }
    }

    /// Summation bounds `[0, K]` used by the telescoped closed form.
    pub fn valid_range(&self) -> (i64, i64) {
        match *self {
            CertFamily::T1 { n } | CertFamily::T1Mod2 { n } => (0, n / 3 - 1),
            CertFamily::T2 { n, .. } => (0, n / 2),
        }
    }

    /// The closed form of the telescoped sum over `valid_range`.
    pub fn closed_form(&self) -> Rational {
        match *self {
            CertFamily::T1 { n } => ratio(n * n - 4 * n + 6, 3 * n - 6),
            CertFamily::T1Mod2 { n } => ratio(n * n - 5 * n + 12, 3 * n - 3),
            CertFamily::T2 { m, n } => ratio(6 + 4 * m - 5 * n + n * n, 4 * m),
        }
    }

    /// The known certificate for the family, as published:
    ///
    /// * t1:     `-(9k^2 - 3k(n-5) + n(n-4) + 6) / (3(k+1)(n-2))`
    /// * t1mod2: `-(9k^2 - 3k(n-7) + n(n-5) + 12) / (3(k+1)(n-1))`
    /// * t2:     `-(2(1+k)(3+2k+2m) - (5+4k)n + n^2) / (4(1+k)m)`
    pub fn reference_rational_function(&self) -> RatFunc {
        let (num, den) = match *self {
            CertFamily::T1 { n } => (
                Poly::from_int_coeffs(&[-(n * n - 4 * n + 6), 3 * (n - 5), -9]),
                Poly::from_int_coeffs(&[3 * (n - 2), 3 * (n - 2)]),
            ),
            CertFamily::T1Mod2 { n } => (
                Poly::from_int_coeffs(&[-(n * n - 5 * n + 12), 3 * (n - 7), -9]),
                Poly::from_int_coeffs(&[3 * (n - 1), 3 * (n - 1)]),
            ),
            CertFamily::T2 { m, n } => (
                Poly::from_int_coeffs(&[
                    -(6 + 4 * m - 5 * n + n * n),
                    -(10 + 4 * m - 4 * n),
                    -4,
                ]),
                Poly::from_int_coeffs(&[4 * m, 4 * m]),
            ),
        };
        RatFunc::new(num, den).expect("reference denominators are nonzero")
    }

    pub fn reference_certificate(&self) -> Result<Certificate> {
        Certificate::new(*self, self.reference_rational_function())
    }
}

/// A telescoping certificate bound to a concrete family instance.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub family: CertFamily,
    pub r: RatFunc,
    pub term: HTerm,
    pub valid_range: (i64, i64),
}

impl Certificate {
    pub fn new(family: CertFamily, r: RatFunc) -> Result<Self> {
        let term = family.term()?;
        Ok(Self {
            family,
            r,
            term,
            valid_range: family.valid_range(),
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rec = CertificateRecord::from(self);
        serde_json::to_value(rec).expect("serializable")
    }

    pub fn to_json_string(&self) -> String {
        self.to_json().to_string()
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let rec: CertificateRecord =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        rec.try_into()
    }
}

/// Wire form: exact rationals as strings, family by name.
#[derive(Serialize, Deserialize)]
struct CertificateRecord {
    num: Vec<String>,
    den: Vec<String>,
    family: String,
    params: BTreeMap<String, i64>,
}

impl From<&Certificate> for CertificateRecord {
    fn from(c: &Certificate) -> Self {
        Self {
            num: c.r.num().coeffs().iter().map(|x| x.to_string()).collect(),
            den: c.r.den().coeffs().iter().map(|x| x.to_string()).collect(),
            family: c.family.name().to_string(),
            params: c.family.params(),
        }
    }
}

impl TryFrom<CertificateRecord> for Certificate {
    type Error = Error;
    fn try_from(rec: CertificateRecord) -> Result<Self> {
        let parse_poly = |cs: &[String]| -> Result<Poly> {
            let mut out = Vec::with_capacity(cs.len());
            for c in cs {
                out.push(
                    c.parse::<Rational>()
                        .map_err(|_| Error::Parse(format!("invalid rational {c:?}")))?,
                );
            }
            Ok(Poly::new(out))
        };
        let family = CertFamily::from_name(&rec.family, &rec.params)?;
        let r = RatFunc::new(parse_poly(&rec.num)?, parse_poly(&rec.den)?)?;
        Certificate::new(family, r)
    }
}

/// Outcome of checking a certificate against its term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertStatus {
    Valid,
    /// `R(k+1) r(k) - R(k)` is not identically 1.
    NotTelescoping,
    /// `R` has a pole at an integer inside `[k0, k1+1]`.
    PoleAt(i64),
}

/// Checks `R(k+1) r(k) - R(k) = 1` as a rational-function identity and that
/// `R` is pole-free on the integers of the valid range (inclusive of the
/// telescoping endpoint `k1 + 1`).
pub fn verify_certificate(cert: &Certificate) -> Result<CertStatus> {
    let (k0, k1) = cert.valid_range;
    for k in k0..=k1 + 1 {
        if cert.r.has_pole_at(k) {
            return Ok(CertStatus::PoleAt(k));
        }
    }
    let ratio = term_ratio(&cert.term)?;
    let lhs = cert.r.shift_int(1).mul(&ratio).sub(&cert.r);
    if lhs.is_one() {
        Ok(CertStatus::Valid)
    } else {
        Ok(CertStatus::NotTelescoping)
    }
}

/// `sum_{k=k0}^{k1} t_k = R(k1+1) t_{k1+1} - R(k0) t_{k0}` for a verified
/// certificate. An empty range is zero.
pub fn telescoped_sum(cert: &Certificate, k0: i64, k1: i64) -> Result<QuadExt> {
    match verify_certificate(cert)? {
        CertStatus::Valid => {}
        CertStatus::NotTelescoping => {
            return Err(Error::InvalidCertificate(
                "certificate does not telescope its term".into(),
            ))
        }
        CertStatus::PoleAt(k) => {
            return Err(Error::InvalidCertificate(format!(
                "certificate has a pole at k={k}"
            )))
        }
    }
    if k1 < k0 {
        return Ok(QuadExt::zero());
    }
    let (lo, hi) = cert.valid_range;
    if k0 < lo || k1 > hi {
        return Err(Error::Domain(format!(
            "[{k0}, {k1}] is outside the certificate's valid range [{lo}, {hi}]"
        )));
    }
    let eval_r = |k: i64| -> Result<Rational> {
        cert.r
            .eval(&rat(k))
            .ok_or_else(|| Error::InvalidCertificate(format!("pole at k={k}")))
    };
    let at = |k: i64| -> Result<QuadExt> {
        let kk = u32::try_from(k).map_err(|_| Error::Domain(format!("negative index {k}")))?;
        cert.term.value_at(kk)
    };
    let upper = at(k1 + 1)?.scale(&eval_r(k1 + 1)?);
    let lower = at(k0)?.scale(&eval_r(k0)?);
    upper.checked_sub(&lower)
}
