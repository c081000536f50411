//! Stage-by-stage verification of the two identities, one instance at a time.
//!
//! Each pipeline replays the full derivation: the sum as a terminating 3F2,
//! the Sheppard step with its explicit product form, the telescoped closed
//! form, the index-bijection product identities, and the final equality of
//! both sides. Every comparison is exact rational equality; a failing stage
//! marks the report rather than panicking.

use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::Result;
use crate::gosper::{telescoped_sum, verify_certificate, CertFamily, CertStatus};
use crate::hypergeom::{eval_3f2, sheppard_transform, HTerm};
use crate::quad::{Discriminant, QuadExt};
use crate::rational::{rat, ratio, Rational};

use super::{
    coeff_b, coeff_c, coeff_d, coeff_p, coeff_q, conjugate_pair, lemma_checks, lhs_theorem1,
    lhs_theorem2, prod_skip_zeros, rhs_theorem1, rhs_theorem2_with_skips,
};

/// Which identity instance a report describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Instance {
    Theorem1 { n: i64 },
    Theorem2 { m: i64, n: i64 },
}

impl std::fmt::Display for Instance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Instance::Theorem1 { n } => write!(f, "theorem1 n={n}"),
            Instance::Theorem2 { m, n } => write!(f, "theorem2 m={m} n={n}"),
        }
    }
}

/// One named pipeline stage with its outcome.
#[derive(Clone, Debug)]
pub struct Stage {
    pub name: &'static str,
    pub pass: bool,
    pub detail: Option<String>,
}

/// Full per-instance verification record.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub instance: Instance,
    pub lhs: Rational,
    pub rhs: Rational,
    /// Value of the terminating 3F2 form of the sum (rational by the time it
    /// is compared; populated when the stage ran).
    pub hypergeometric: Option<Rational>,
    /// The Sheppard prefactor.
    pub prefactor: Option<Rational>,
    /// The telescoped closed form of the transformed series.
    pub closed_form: Option<Rational>,
    pub stages: Vec<Stage>,
    /// Factors the zero-skipping convention actually skipped on the right
    /// side, recorded rather than assumed.
    pub zero_skips: Vec<String>,
}

impl VerifyReport {
    pub fn pass(&self) -> bool {
        self.stages.iter().all(|s| s.pass)
    }

    pub fn to_json(&self) -> Value {
        let mut obj = serde_json::Map::new();
        match self.instance {
            Instance::Theorem1 { n } => {
                obj.insert("theorem".into(), json!(1));
                obj.insert("n".into(), json!(n));
            }
            Instance::Theorem2 { m, n } => {
                obj.insert("theorem".into(), json!(2));
                obj.insert("m".into(), json!(m));
                obj.insert("n".into(), json!(n));
            }
        }
        obj.insert("lhs".into(), json!(self.lhs.to_string()));
        obj.insert("rhs".into(), json!(self.rhs.to_string()));
        if let Some(v) = &self.hypergeometric {
            obj.insert("hypergeometric".into(), json!(v.to_string()));
        }
        if let Some(v) = &self.prefactor {
            obj.insert("prefactor".into(), json!(v.to_string()));
        }
        if let Some(v) = &self.closed_form {
            obj.insert("closed_form".into(), json!(v.to_string()));
        }
        obj.insert(
            "stages".into(),
            Value::Array(
                self.stages
                    .iter()
                    .map(|s| {
                        let mut m = serde_json::Map::new();
                        m.insert("name".into(), json!(s.name));
                        m.insert("pass".into(), json!(s.pass));
                        if let Some(d) = &s.detail {
                            m.insert("detail".into(), json!(d));
                        }
                        Value::Object(m)
                    })
                    .collect(),
            ),
        );
        obj.insert("zero_skips".into(), json!(self.zero_skips));
        obj.insert("pass".into(), json!(self.pass()));
        Value::Object(obj)
    }

    /// `instance,lhs,rhs,pass` summary row.
    pub fn csv_row(&self) -> String {
        format!("{},{},{},{}", self.instance, self.lhs, self.rhs, self.pass())
    }
}

/// Runs a stage body, converting an error into a failed stage.
fn stage(stages: &mut Vec<Stage>, name: &'static str, body: impl FnOnce() -> Result<bool>) {
    let (pass, detail) = match body() {
        Ok(true) => (true, None),
        Ok(false) => (false, Some("exact comparison failed".to_string())),
        Err(e) => (false, Some(e.to_string())),
    };
    stages.push(Stage { name, pass, detail });
}

/// Sheppard parameters for the 3-uniform identity at `n`, by residue class:
/// the designated order `N`, the remaining upper parameters `(a, b)`, and
/// the conjugate lower pair `(d, e)`.
fn theorem1_parameters(n: i64) -> (u32, QuadExt, QuadExt, QuadExt, QuadExt) {
    let disc = Discriminant::x_family(n);
    let (d, e) = conjugate_pair(9 - 3 * n, 6, &disc);
    let u = |p: i64| QuadExt::rational(ratio(p, 3)); // (p)/3
    let (order, a, b) = match n % 3 {
        0 => (n / 3 - 1, u(4 - n), u(5 - n)),
        1 => ((n - 4) / 3, u(3 - n), u(5 - n)),
        _ => ((n - 5) / 3, u(3 - n), u(4 - n)),
    };
    (order as u32, a, b, d, e)
}

/// The original terminating 3F2 form of the 3-uniform sum.
fn theorem1_original(n: i64, order: u32) -> Result<HTerm> {
    let disc = Discriminant::x_family(n);
    let (d, e) = conjugate_pair(9 - 3 * n, 6, &disc);
    HTerm::with_order(
        [
            QuadExt::rational(ratio(3 - n, 3)),
            QuadExt::rational(ratio(4 - n, 3)),
            QuadExt::rational(ratio(5 - n, 3)),
        ],
        [d, e],
        order,
    )
}

/// Sheppard parameters for the bipartite identity at `(m, n)` by parity.
fn theorem2_parameters(m: i64, n: i64) -> (u32, QuadExt, QuadExt, QuadExt, QuadExt) {
    let disc = Discriminant::y_family(m, n);
    let (d, e) = conjugate_pair(5 - 2 * m - 2 * n, 4, &disc);
    let b = QuadExt::integer(1 - m);
    let (order, a) = if n % 2 == 0 {
        (n / 2 - 1, QuadExt::rational(ratio(3 - n, 2)))
    } else {
        ((n - 3) / 2, QuadExt::rational(ratio(2 - n, 2)))
    };
    (order as u32, a, b, d, e)
}

fn theorem2_original(m: i64, n: i64, order: u32) -> Result<HTerm> {
    let disc = Discriminant::y_family(m, n);
    let (d, e) = conjugate_pair(5 - 2 * m - 2 * n, 4, &disc);
    HTerm::with_order(
        [
            QuadExt::rational(ratio(2 - n, 2)),
            QuadExt::rational(ratio(3 - n, 2)),
            QuadExt::integer(1 - m),
        ],
        [d, e],
        order,
    )
}

/// `prod_{j=0}^{count-1} (j^2 + lin*j + cst)` over exact rationals.
fn quadratic_product(count: i64, lin: &Rational, cst: &Rational) -> Rational {
    let mut out = rat(1);
    for j in 0..count {
        out *= rat(j * j) + lin * rat(j) + cst;
    }
    out
}

/// Verifies the 3-uniform identity at `n` stage by stage.
pub fn pipeline_theorem1(n: i64) -> Result<VerifyReport> {
    let lhs = lhs_theorem1(n)?;
    let rhs = rhs_theorem1(n);
    let mut stages = Vec::new();
    let mut hypergeometric = None;
    let mut prefactor = None;
    let mut closed_form = None;

    let (order, a, b, d, e) = theorem1_parameters(n);

    // (1) the sum is the terminating 3F2.
    {
        let lhs = &lhs;
        let hg = &mut hypergeometric;
        stage(&mut stages, "hypergeometric-form", || {
            let orig = theorem1_original(n, order)?;
            let v = eval_3f2(&orig)?.as_rational()?;
            let ok = v == *lhs;
            *hg = Some(v);
            Ok(ok)
        });
    }

    // (2) Sheppard step: exact equality plus the explicit product form of
    // the prefactor.
    let sheppard = sheppard_transform(order, &a, &b, &d, &e);
    {
        let pf = &mut prefactor;
        let sh = &sheppard;
        stage(&mut stages, "sheppard", || {
            let sh = sh.as_ref().map_err(Clone::clone)?.clone();
            let orig = theorem1_original(n, order)?;
            let lhs_v = eval_3f2(&orig)?;
            let rhs_v = sh.prefactor.checked_mul(&eval_3f2(&sh.transformed)?)?;
            let pf_rat = sh.prefactor.as_rational()?;
            // Expansion of the conjugate rising-factorial products into
            // quadratic factors, per residue class.
            let expected_pf = match n % 3 {
                0 => {
                    let num = quadratic_product(
                        n / 3 - 1,
                        &ratio(-(n - 1), 3),
                        &ratio(n * n - 2 * n, 9),
                    );
                    let den = quadratic_product(
                        n / 3 - 1,
                        &rat(3 - n),
                        &ratio(3 * n * n - 15 * n + 20, 9),
                    );
                    num / den
                }
                r => {
                    let count = if r == 1 { (n - 7) / 3 + 1 } else { (n - 8) / 3 + 1 };
                    let num = quadratic_product(
                        count,
                        &ratio(3 - n, 3),
                        &ratio(n * n - 3 * n + 2, 9),
                    );
                    let den = quadratic_product(
                        count,
                        &rat(3 - n),
                        &ratio(3 * n * n - 15 * n + 20, 9),
                    );
                    num / den
                }
            };
            let ok = lhs_v == rhs_v && pf_rat == expected_pf;
            *pf = Some(pf_rat);
            Ok(ok)
        });
    }

    // (3) telescoped closed form of the transformed series, via both the
    // certificate and direct evaluation.
    {
        let cf = &mut closed_form;
        let sh = &sheppard;
        stage(&mut stages, "telescoped-closed-form", || {
            let fam = CertFamily::theorem1(n)?;
            let expect = fam.closed_form();
            let cert = fam.reference_certificate()?;
            if verify_certificate(&cert)? != CertStatus::Valid {
                return Ok(false);
            }
            let (lo, hi) = cert.valid_range;
            let tele = telescoped_sum(&cert, lo, hi)?.as_rational()?;
            let direct = match sh {
                Ok(s) => eval_3f2(&s.transformed)?.as_rational()?,
                Err(e) => return Err(e.clone()),
            };
            let ok = tele == expect && direct == expect;
            *cf = Some(tele);
            Ok(ok)
        });
    }

    // (4) index bijections and the product identities actually used to close
    // the derivation (residue-specific where the derivation is).
    stage(&mut stages, "product-identity", || {
        let mut ok = true;
        for k in -3..=3 * n {
            ok &= coeff_c(n, k) == coeff_c(n, 3 * n - 3 - k);
        }
        for j in -2..=n / 3 + 2 {
            ok &= coeff_b(n, j) == coeff_c(n, n - 1 + 3 * j);
            ok &= coeff_b(n, j) == coeff_c(n, 2 * n - 2 - 3 * j);
        }
        match n % 3 {
            0 => {
                for j in 0..=n / 3 - 2 {
                    ok &= coeff_c(n, 3 * j + 3)
                        == rat(9 * j * j + 9 * (3 - n) * j + 3 * n * n - 15 * n + 20);
                }
                // b_0 / c_{n+1} = n(n-2)/(n^2-4n+6)
                ok &= coeff_b(n, 0) * rat(n * n - 4 * n + 6)
                    == rat(n * (n - 2)) * coeff_c(n, n + 1);
                // prod b_j (j=1..n/3-2) * prod c_{3j} (j=n/3+1..floor(n/2)-1)
                //   = prod c_j (j=n+2..floor(3n/2)-2)
                let mut left = rat(1);
                for j in 1..=n / 3 - 2 {
                    left *= coeff_b(n, j);
                }
                for j in n / 3 + 1..=n / 2 - 1 {
                    left *= coeff_c(n, 3 * j);
                }
                let mut right = rat(1);
                for j in n + 2..=3 * n / 2 - 2 {
                    right *= coeff_c(n, j);
                }
                ok &= left == right;
            }
            2 => {
                // The j=0 factor of the numerator product over c_{n+2}:
                // (n-1)(n-2)/(n^2-5n+12).
                let b0 = rat(n * n - 3 * n + 2);
                ok &= &b0 * &rat(n * n - 5 * n + 12)
                    == rat((n - 1) * (n - 2)) * coeff_c(n, n + 2);
                ok &= coeff_c(n, n + 2) == rat(n * n - 5 * n + 12);
            }
            _ => {}
        }
        Ok(ok)
    });

    // (5) the identity itself, and consistency of the staged route.
    {
        let lhs = &lhs;
        let rhs = &rhs;
        let pf = prefactor.clone();
        let cf = closed_form.clone();
        stage(&mut stages, "final-equality", || {
            let mut ok = lhs == rhs;
            if let (Some(p), Some(c)) = (pf, cf) {
                ok &= p * c == *lhs;
            } else {
                ok = false;
            }
            Ok(ok)
        });
    }

    Ok(VerifyReport {
        instance: Instance::Theorem1 { n },
        lhs,
        rhs,
        hypergeometric,
        prefactor,
        closed_form,
        stages,
        zero_skips: Vec::new(),
    })
}

/// Verifies the bipartite identity at `(m, n)` stage by stage.
pub fn pipeline_theorem2(m: i64, n: i64) -> Result<VerifyReport> {
    let lhs = lhs_theorem2(m, n)?;
    let (rhs, zero_skips) = rhs_theorem2_with_skips(m, n);
    let mut stages = Vec::new();
    let mut hypergeometric = None;
    let mut prefactor = None;
    let mut closed_form = None;

    let (order, a, b, d, e) = theorem2_parameters(m, n);

    stage(&mut stages, "no-zero-denominators", || Ok(lemma_checks(m, n)));

    {
        let lhs = &lhs;
        let hg = &mut hypergeometric;
        stage(&mut stages, "hypergeometric-form", || {
            let orig = theorem2_original(m, n, order)?;
            let v = eval_3f2(&orig)?.as_rational()?;
            let ok = v == *lhs;
            *hg = Some(v);
            Ok(ok)
        });
    }

    let sheppard = sheppard_transform(order, &a, &b, &d, &e);
    {
        let pf = &mut prefactor;
        let sh = &sheppard;
        stage(&mut stages, "sheppard", || {
            let sh = sh.as_ref().map_err(Clone::clone)?.clone();
            let orig = theorem2_original(m, n, order)?;
            let lhs_v = eval_3f2(&orig)?;
            let rhs_v = sh.prefactor.checked_mul(&eval_3f2(&sh.transformed)?)?;
            let pf_rat = sh.prefactor.as_rational()?;
            let expected_pf = if n % 2 == 0 {
                let num = quadratic_product(n / 2 - 1, &ratio(-(2 * m + 1), 2), &ratio(m * n, 2));
                let den = quadratic_product(
                    n / 2 - 1,
                    &ratio(5 - 2 * m - 2 * n, 2),
                    &ratio(6 - 6 * m - 5 * n + 4 * m * n + n * n, 4),
                );
                num / den
            } else {
                let count = (n - 5) / 2 + 1;
                let num =
                    quadratic_product(count, &ratio(-(2 * m - 1), 2), &ratio(m * (n - 1), 2));
                let den = quadratic_product(
                    count,
                    &ratio(5 - 2 * m - 2 * n, 2),
                    &ratio(6 - 6 * m - 5 * n + 4 * m * n + n * n, 4),
                );
                num / den
            };
            let ok = lhs_v == rhs_v && pf_rat == expected_pf;
            *pf = Some(pf_rat);
            Ok(ok)
        });
    }

    {
        let cf = &mut closed_form;
        let sh = &sheppard;
        stage(&mut stages, "telescoped-closed-form", || {
            let fam = CertFamily::theorem2(m, n)?;
            let expect = fam.closed_form();
            let cert = fam.reference_certificate()?;
            if verify_certificate(&cert)? != CertStatus::Valid {
                return Ok(false);
            }
            let (lo, hi) = cert.valid_range;
            let tele = telescoped_sum(&cert, lo, hi)?.as_rational()?;
            let direct = match sh {
                Ok(s) => eval_3f2(&s.transformed)?.as_rational()?,
                Err(e) => return Err(e.clone()),
            };
            let ok = tele == expect && direct == expect;
            *cf = Some(tele);
            Ok(ok)
        });
    }

    // Identity chain: reflection, index bijections, the cross-multiplied
    // ratio identity, the two-sided skip-product identity, and the product
    // expression itself. The even case is the one spelled out; odd instances
    // are covered by the final equality.
    if n % 2 == 0 {
        stage(&mut stages, "product-identity", || {
            let mut ok = true;
            let half = n / 2;
            for j in -(m + n)..=(m + n) {
                ok &= coeff_q(m, n, j) == coeff_q(m, n, 1 - j);
            }
            for j in -2..=half + 2 {
                ok &= coeff_p(m, n, j) == coeff_q(m, n, m - 2 * j + 1);
                ok &= coeff_p(m, n, j) == coeff_q(m, n, 2 * j - m);
            }
            for j in 1..=m + half {
                ok &= coeff_d(m, n, j) == coeff_p(m, n, m + half - j);
                ok &= coeff_d(m, n, j) == coeff_q(m, n, m + n - 2 * j);
            }
            // 4m^2 q_{m-n+1} q_{m-n+3} = (6+4m-5n+n^2) q_m q_{m+1}
            ok &= rat(4 * m * m) * coeff_q(m, n, m - n + 1) * coeff_q(m, n, m - n + 3)
                == rat(6 + 4 * m - 5 * n + n * n) * coeff_q(m, n, m) * coeff_q(m, n, m + 1);
            // prod_{j=0}^{n/2} q_{m-2j+1} * prod_{j=1}^{m-1} q_{m+n-2j}
            //   = prod_{j=1}^{m+1} q_j * prod_{j=1}^{n/2-1} q_{m+n-2j},
            // zero factors skipped on both sides.
            let left = prod_skip_zeros((0..=half).map(|j| coeff_q(m, n, m - 2 * j + 1)))
                * prod_skip_zeros((1..m).map(|j| coeff_q(m, n, m + n - 2 * j)));
            let right = prod_skip_zeros((1..=m + 1).map(|j| coeff_q(m, n, j)))
                * prod_skip_zeros((1..half).map(|j| coeff_q(m, n, m + n - 2 * j)));
            ok &= left == right;
            // The product expression: only the right side may contain zeros.
            let mut p_prod = rat(1);
            let mut d_prod = rat(1);
            for j in 0..=half - 2 {
                let pv = coeff_p(m, n, j);
                let dv = coeff_d(m, n, j + 1);
                if pv.is_zero() || dv.is_zero() {
                    return Ok(false);
                }
                p_prod *= pv;
                d_prod *= dv;
            }
            let q_prod = prod_skip_zeros((1..m).map(|j| coeff_q(m, n, j)));
            let d_skip = prod_skip_zeros((1..m).map(|j| coeff_d(m, n, j)));
            ok &= p_prod * rat(6 + 4 * m - 5 * n + n * n) * d_skip
                == d_prod * rat(4 * m * m) * q_prod;
            Ok(ok)
        });
    }

    {
        let lhs = &lhs;
        let rhs = &rhs;
        let pf = prefactor.clone();
        let cf = closed_form.clone();
        stage(&mut stages, "final-equality", || {
            let mut ok = lhs == rhs;
            if let (Some(p), Some(c)) = (pf, cf) {
                ok &= p * c == *lhs;
            } else {
                ok = false;
            }
            Ok(ok)
        });
    }

    Ok(VerifyReport {
        instance: Instance::Theorem2 { m, n },
        lhs,
        rhs,
        hypergeometric,
        prefactor,
        closed_form,
        stages,
        zero_skips,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theorem1_pipeline_instances() {
        let r6 = pipeline_theorem1(6).unwrap();
        assert!(r6.pass(), "{:?}", r6.stages);
        assert_eq!(r6.lhs, ratio(18, 19));
        assert_eq!(r6.closed_form.clone().unwrap(), ratio(3, 2));

        let r7 = pipeline_theorem1(7).unwrap();
        assert!(r7.pass(), "{:?}", r7.stages);
        assert_eq!(r7.lhs, ratio(27, 31));

        let r8 = pipeline_theorem1(8).unwrap();
        assert!(r8.pass(), "{:?}", r8.stages);
        assert_eq!(r8.closed_form.clone().unwrap(), ratio(12, 7));
    }

    #[test]
    fn theorem1_small_edge_instances() {
        for n in 3..=5 {
            let r = pipeline_theorem1(n).unwrap();
            assert!(r.pass(), "n={n}: {:?}", r.stages);
            assert_eq!(r.lhs, rat(1));
        }
    }

    #[test]
    fn theorem2_pipeline_instances() {
        let r = pipeline_theorem2(3, 4).unwrap();
        assert!(r.pass(), "{:?}", r.stages);
        assert_eq!(r.lhs, ratio(7, 8));
        assert_eq!(r.closed_form.clone().unwrap(), ratio(7, 6));
        assert!(r.zero_skips.is_empty());

        let r32 = pipeline_theorem2(3, 2).unwrap();
        assert!(r32.pass(), "{:?}", r32.stages);
        assert_eq!(r32.lhs, rat(1));
        assert_eq!(r32.zero_skips, vec!["q(1)=0".to_string(), "d(2)=0".to_string()]);

        // Odd n with a collapsed (perfect-square) radicand.
        let r53 = pipeline_theorem2(5, 3).unwrap();
        assert!(r53.pass(), "{:?}", r53.stages);
        assert_eq!(r53.lhs, rat(1));
    }

    #[test]
    fn report_serialization() {
        let r = pipeline_theorem1(6).unwrap();
        let v = r.to_json();
        assert_eq!(v["theorem"], 1);
        assert_eq!(v["lhs"], "18/19");
        assert_eq!(v["pass"], true);
        assert_eq!(r.csv_row(), "theorem1 n=6,18/19,18/19,true");
    }
}
