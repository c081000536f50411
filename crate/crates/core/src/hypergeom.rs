//! Terminating 3F2(1) series over a quadratic extension: rising factorials,
//! exact evaluation, the Sheppard transformation, and the polynomial forms
//! Phi/Psi that underlie its proof.

use crate::error::{Error, Result};
use crate::quad::QuadExt;
use crate::rational::factorial;

/// `(a)_0 = 1`, `(a)_k = a (a+1) ... (a+k-1)`.
pub fn rising_factorial(a: &QuadExt, k: u32) -> QuadExt {
    let mut out = QuadExt::one();
    for i in 0..k {
        out = &out * &a.add_int(i64::from(i));
    }
    out
}

/// A terminating hypergeometric term: three upper parameters, two lower
/// parameters, and the termination order `N` (some upper parameter is the
/// nonpositive integer `-N`).
///
/// Construction checks that no lower parameter is a nonpositive integer in
/// `{0, -1, ..., -(N-1)}`, so the sum `sum_{k=0}^{N}` never divides by zero.
#[derive(Clone, Debug, PartialEq)]
pub struct HTerm {
    upper: [QuadExt; 3],
    lower: [QuadExt; 2],
    order: u32,
}

impl HTerm {
    /// Builds a term, taking the termination order from the largest
    /// nonpositive-integer upper parameter (the one closest to zero; ties go
    /// to the first listed). Errors when no upper parameter terminates the
    /// series or a lower parameter collides.
    pub fn new(upper: [QuadExt; 3], lower: [QuadExt; 2]) -> Result<Self> {
        let mut best: Option<&QuadExt> = None;
        for u in &upper {
            if u.is_nonpositive_integer() {
                let better = match best {
                    None => true,
                    Some(cur) => u.rational_part() > cur.rational_part(),
                };
                if better {
                    best = Some(u);
                }
            }
        }
        let designated = best.ok_or(Error::NoTerminatingUpper)?;
        let order = crate::rational::as_i64(&(-designated.rational_part()))
            .and_then(|v| u32::try_from(v).ok())
            .ok_or_else(|| Error::Domain("termination order out of range".into()))?;
        Self::with_order(upper, lower, order)
    }

    /// Builds a term with an explicitly designated termination order; some
    /// upper parameter must equal `-order` exactly.
    pub fn with_order(upper: [QuadExt; 3], lower: [QuadExt; 2], order: u32) -> Result<Self> {
        let target = QuadExt::integer(-i64::from(order));
        if !upper.contains(&target) {
            return Err(Error::Domain(format!(
                "no upper parameter equals -{order}"
            )));
        }
        for l in &lower {
            if l.is_nonpositive_integer() {
                let v = -crate::rational::as_i64(l.rational_part()).unwrap_or(i64::MIN);
                if v >= 0 && (v as u64) < u64::from(order) {
                    return Err(Error::LowerParameterCollision {
                        param: l.to_string(),
                        k: v as u32,
                    });
                }
            }
        }
        Ok(Self {
            upper,
            lower,
            order,
        })
    }

    pub fn upper(&self) -> &[QuadExt; 3] {
        &self.upper
    }

    pub fn lower(&self) -> &[QuadExt; 2] {
        &self.lower
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// The summand `t_k = prod (a_i)_k / (prod (b_j)_k * k!)`, computed from
    /// scratch. Defined whenever the lower rising factorials are nonzero.
    pub fn value_at(&self, k: u32) -> Result<QuadExt> {
        let mut den = QuadExt::rational(factorial(k));
        for l in &self.lower {
            let rf = rising_factorial(l, k);
            if rf.is_zero() {
                return Err(Error::LowerParameterCollision {
                    param: l.to_string(),
                    k,
                });
            }
            den = &den * &rf;
        }
        let mut num = QuadExt::one();
        for u in &self.upper {
            num = &num * &rising_factorial(u, k);
        }
        num.checked_div(&den)
    }
}

/// Exact value of the terminating series: `sum_{k=0}^{N} t_k`.
pub fn eval_3f2(term: &HTerm) -> Result<QuadExt> {
    let mut t = QuadExt::one();
    let mut sum = QuadExt::one();
    for k in 0..term.order() {
        let kk = i64::from(k);
        let mut num = QuadExt::one();
        for u in term.upper() {
            num = &num * &u.add_int(kk);
        }
        let mut den = QuadExt::integer(kk + 1);
        for l in term.lower() {
            den = &den * &l.add_int(kk);
        }
        t = (&t * &num).checked_div(&den).map_err(|e| match e {
            Error::DivisionByZero => Error::LowerParameterCollision {
                param: format!("{} / {}", term.lower()[0], term.lower()[1]),
                k: k + 1,
            },
            other => other,
        })?;
        sum = &sum + &t;
    }
    Ok(sum)
}

/// Result of the Sheppard transformation: a rising-factorial prefactor and
/// the transformed terminating series.
#[derive(Clone, Debug, PartialEq)]
pub struct SheppardResult {
    pub prefactor: QuadExt,
    pub transformed: HTerm,
}

/// Sheppard's 3F2(1) transformation. For the series with upper parameters
/// `(-N, a, b)` and lower parameters `(d, e)`:
///
/// ```text
/// F = (d-a)_N (e-a)_N / ((d)_N (e)_N)
///     * 3F2(-N, a, a+b-N-d-e+1; a-N-d+1, a-N-e+1; 1)
/// ```
///
/// Errors when a prefactor denominator contains a zero factor or the
/// transformed lower parameters collide.
pub fn sheppard_transform(
    order: u32,
    a: &QuadExt,
    b: &QuadExt,
    d: &QuadExt,
    e: &QuadExt,
) -> Result<SheppardResult> {
    let n = QuadExt::integer(i64::from(order));
    let one = QuadExt::one();

    let dn = rising_factorial(d, order);
    if dn.is_zero() {
        return Err(Error::PrefactorUndefined {
            param: d.to_string(),
            order,
        });
    }
    let en = rising_factorial(e, order);
    if en.is_zero() {
        return Err(Error::PrefactorUndefined {
            param: e.to_string(),
            order,
        });
    }
    let da = d.checked_sub(a)?;
    let ea = e.checked_sub(a)?;
    let prefactor = rising_factorial(&da, order)
        .checked_mul(&rising_factorial(&ea, order))?
        .checked_div(&dn.checked_mul(&en)?)?;

    let third = a
        .checked_add(b)?
        .checked_sub(&n)?
        .checked_sub(d)?
        .checked_sub(e)?
        .checked_add(&one)?;
    let low1 = a.checked_sub(&n)?.checked_sub(d)?.checked_add(&one)?;
    let low2 = a.checked_sub(&n)?.checked_sub(e)?.checked_add(&one)?;
    let transformed = HTerm::with_order(
        [QuadExt::integer(-i64::from(order)), a.clone(), third],
        [low1, low2],
        order,
    )?;
    Ok(SheppardResult {
        prefactor,
        transformed,
    })
}

/// The cleared-denominator forms of both sides of the Sheppard identity:
///
/// ```text
/// Phi = sum 1/k! (-N)_k (a)_k (b)_k (d+k)_{N-k} (e+k)_{N-k}
/// Psi = sum 1/k! (-N)_k (a)_k (a+b-N-d-e+1)_k (d-a)_{N-k} (e-a)_{N-k}
/// ```
///
/// Polynomial in all parameters, hence defined even where lower parameters
/// collide; the identity `Phi = Psi` holds for every input.
pub fn phi_psi(
    order: u32,
    a: &QuadExt,
    b: &QuadExt,
    d: &QuadExt,
    e: &QuadExt,
) -> (QuadExt, QuadExt) {
    let minus_n = QuadExt::integer(-i64::from(order));
    let n = QuadExt::integer(i64::from(order));
    let bstar = &(&(a + b) - &n) - &(&(d + e) - &QuadExt::one());
    let da = d - a;
    let ea = e - a;

    let mut phi = QuadExt::zero();
    let mut psi = QuadExt::zero();
    for k in 0..=order {
        let inv_kfac = QuadExt::rational(crate::rational::rat(1) / factorial(k));
        let common = &(&rising_factorial(&minus_n, k) * &rising_factorial(a, k)) * &inv_kfac;
        let phi_tail = &rising_factorial(&d.add_int(i64::from(k)), order - k)
            * &rising_factorial(&e.add_int(i64::from(k)), order - k);
        phi = &phi + &(&(&common * &rising_factorial(b, k)) * &phi_tail);
        let psi_tail =
            &rising_factorial(&da, order - k) * &rising_factorial(&ea, order - k);
        psi = &psi + &(&(&common * &rising_factorial(&bstar, k)) * &psi_tail);
    }
    (phi, psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{quad, Discriminant};
    use crate::rational::{rat, ratio};
    use proptest::prelude::*;

    fn q(v: i64) -> QuadExt {
        QuadExt::integer(v)
    }

    fn qr(p: i64, d: i64) -> QuadExt {
        QuadExt::rational(ratio(p, d))
    }

    #[test]
    fn rising_factorial_basics() {
        let dd = Discriminant::new(rat(-5));
        let a = QuadExt::new(ratio(7, 3), ratio(1, 2), dd);
        assert_eq!(rising_factorial(&a, 0), QuadExt::one());
        assert_eq!(rising_factorial(&q(2), 3), q(24));
    }

    #[test]
    fn rising_factorial_conjugate_product() {
        let dd = Discriminant::new(rat(-71));
        let x = quad(5, 1, 6, &dd);
        let v = &rising_factorial(&x, 1) * &rising_factorial(&x.conj(), 1);
        assert_eq!(v.as_rational().unwrap(), ratio(8, 3));
    }

    #[test]
    fn order_zero_sums_to_one() {
        let t = HTerm::new([q(0), qr(1, 3), q(7)], [qr(9, 2), q(4)]).unwrap();
        assert_eq!(t.order(), 0);
        assert_eq!(eval_3f2(&t).unwrap(), QuadExt::one());
    }

    #[test]
    fn forced_two_term_sum() {
        let t = HTerm::new([q(-1), q(2), q(3)], [q(4), q(5)]).unwrap();
        assert_eq!(eval_3f2(&t).unwrap().as_rational().unwrap(), ratio(7, 10));
    }

    #[test]
    fn conjugate_lower_pair_instance() {
        // upper (-1, -2/3, 2), lower (5 +- sqrt(-71))/6 sums to 3/2
        let dd = Discriminant::new(rat(-71));
        let lo = quad(5, 1, 6, &dd);
        let t = HTerm::new([q(-1), qr(-2, 3), q(2)], [lo.clone(), lo.conj()]).unwrap();
        assert_eq!(eval_3f2(&t).unwrap().as_rational().unwrap(), ratio(3, 2));
    }

    #[test]
    fn termination_order_prefers_value_closest_to_zero() {
        // uppers contain 0 and -4: the series genuinely terminates at order 0.
        let t = HTerm::new([qr(-1, 2), q(0), q(-4)], [q(-3), qr(-5, 2)]).unwrap();
        assert_eq!(t.order(), 0);
        assert_eq!(eval_3f2(&t).unwrap(), QuadExt::one());
    }

    #[test]
    fn lower_collision_is_rejected() {
        let err = HTerm::new([q(-3), q(1), q(2)], [q(-2), q(5)]).unwrap_err();
        assert!(matches!(err, Error::LowerParameterCollision { k: 2, .. }));
        // A lower parameter at or below -N is admissible.
        assert!(HTerm::new([q(-3), q(1), q(2)], [q(-3), q(5)]).is_ok());
    }

    #[test]
    fn no_terminating_upper_is_rejected() {
        let err = HTerm::new([q(1), qr(1, 2), q(2)], [q(4), q(5)]).unwrap_err();
        assert!(matches!(err, Error::NoTerminatingUpper));
    }

    #[test]
    fn sheppard_small_instance() {
        let sh = sheppard_transform(1, &q(2), &q(3), &q(4), &q(5)).unwrap();
        assert_eq!(sh.prefactor.as_rational().unwrap(), ratio(3, 10));
        let tv = eval_3f2(&sh.transformed).unwrap().as_rational().unwrap();
        assert_eq!(tv, ratio(7, 3));
        assert_eq!(sh.prefactor.as_rational().unwrap() * tv, ratio(7, 10));
    }

    #[test]
    fn sheppard_order_zero() {
        let sh = sheppard_transform(0, &qr(1, 2), &q(3), &q(4), &q(5)).unwrap();
        assert_eq!(sh.prefactor, QuadExt::one());
        assert_eq!(eval_3f2(&sh.transformed).unwrap(), QuadExt::one());
    }

    #[test]
    fn sheppard_prefactor_undefined() {
        let err = sheppard_transform(3, &q(1), &q(1), &q(-2), &q(5)).unwrap_err();
        assert!(matches!(err, Error::PrefactorUndefined { .. }));
    }

    #[test]
    fn sheppard_matches_pipeline_instance() {
        // n = 6 assignment: N=1, a=-2/3, b=-1/3, d,e = (-9 +- sqrt(-71))/6.
        let dd = Discriminant::new(rat(-71));
        let d = quad(-9, 1, 6, &dd);
        let orig = HTerm::new(
            [q(-1), qr(-2, 3), qr(-1, 3)],
            [d.clone(), d.conj()],
        )
        .unwrap();
        let sh = sheppard_transform(1, &qr(-2, 3), &qr(-1, 3), &d, &d.conj()).unwrap();
        let lhs = eval_3f2(&orig).unwrap().as_rational().unwrap();
        let rhs = sh.prefactor.as_rational().unwrap()
            * eval_3f2(&sh.transformed).unwrap().as_rational().unwrap();
        assert_eq!(lhs, ratio(18, 19));
        assert_eq!(rhs, ratio(18, 19));
    }

    #[test]
    fn phi_psi_examples() {
        let (phi, psi) = phi_psi(0, &q(9), &q(7), &q(1), &q(2));
        assert_eq!(phi, QuadExt::one());
        assert_eq!(psi, QuadExt::one());

        let (phi, psi) = phi_psi(1, &q(2), &q(3), &q(4), &q(5));
        assert_eq!(phi.as_rational().unwrap(), rat(14));
        assert_eq!(psi.as_rational().unwrap(), rat(14));
    }

    #[test]
    fn psi_reduces_for_special_b() {
        // b = -a + N + d + e - 1 makes the transformed third upper vanish.
        let (n, a, d, e) = (3u32, qr(5, 3), qr(7, 2), qr(9, 4));
        let b = &(&(-&a) + &QuadExt::integer(i64::from(n))) + &(&(&d + &e) - &QuadExt::one());
        let (_, psi) = phi_psi(n, &a, &b, &d, &e);
        let expect = &rising_factorial(&(&d - &a), n) * &rising_factorial(&(&e - &a), n);
        assert_eq!(psi, expect);
    }

    fn arb_param() -> impl Strategy<Value = QuadExt> {
        (-6i64..=6, 1i64..=4).prop_map(|(p, d)| QuadExt::rational(ratio(p, d)))
    }

    fn arb_conj_pair() -> impl Strategy<Value = (QuadExt, QuadExt)> {
        (
            prop::sample::select(vec![-71i64, -8, -1, 2, 3, 5]),
            -6i64..=6,
            1i64..=4,
            1i64..=4,
        )
            .prop_map(|(dv, p, s, den)| {
                let disc = Discriminant::new(rat(dv));
                let x = QuadExt::new(ratio(p, den), ratio(s, den), disc);
                let c = x.conj();
                (x, c)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn phi_equals_psi_rational(
            n in 0u32..=6,
            a in arb_param(), b in arb_param(), d in arb_param(), e in arb_param(),
        ) {
            let (phi, psi) = phi_psi(n, &a, &b, &d, &e);
            prop_assert_eq!(phi, psi);
        }

        #[test]
        fn phi_equals_psi_conjugate_lowers(
            n in 0u32..=6,
            a in arb_param(), b in arb_param(),
            (d, e) in arb_conj_pair(),
        ) {
            let (phi, psi) = phi_psi(n, &a, &b, &d, &e);
            prop_assert_eq!(phi, psi);
        }

        #[test]
        fn eval_is_invariant_under_parameter_permutation(
            n in 1i64..=5,
            a in arb_param(), b in arb_param(),
            (d, e) in arb_conj_pair(),
        ) {
            let mn = QuadExt::integer(-n);
            let base = HTerm::new([mn.clone(), a.clone(), b.clone()], [d.clone(), e.clone()]).unwrap();
            let v = eval_3f2(&base).unwrap();
            let permuted = [
                HTerm::new([a.clone(), mn.clone(), b.clone()], [e.clone(), d.clone()]).unwrap(),
                HTerm::new([b.clone(), a.clone(), mn.clone()], [d.clone(), e.clone()]).unwrap(),
            ];
            for t in &permuted {
                prop_assert_eq!(eval_3f2(t).unwrap(), v.clone());
            }
        }
    }
}
