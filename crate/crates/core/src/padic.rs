//! Valuation condition for attaining a maximal obstruction, and the
//! critical-polynomial witness check.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::ball::DEFAULT_PRECISION_CAP;
use crate::cheb::{strict_below, sup_log_upper, WeightedProduct};
use crate::error::{Error, Result};
use crate::factor::factor;
use crate::obstruction::ObstructionValue;
use crate::poly::Poly;
use crate::robinson::ObstructionRecord;
use crate::roots::{all_roots_in, RatInterval};

type IntPoly = Poly<BigInt>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AttainmentStatus {
    Impossible,
    Consistent,
}

/// One failed valuation inequality `v_p(a_k) >= e k / d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValuationFailure {
    #[serde(with = "crate::io::bigint_string")]
    pub prime: BigInt,
    /// Coefficient index `k` (of `x^k`).
    pub index: usize,
    #[serde(with = "crate::io::rational_string")]
    pub required: BigRational,
    /// `None` for a zero coefficient (infinite valuation).
    pub actual: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AttainmentVerdict {
    pub status: AttainmentStatus,
    pub gcd_failure: bool,
    pub failures: Vec<ValuationFailure>,
}

impl AttainmentVerdict {
    pub fn is_consistent(&self) -> bool {
        self.status == AttainmentStatus::Consistent
    }
}

/// Prime factors of `|n|` by trial division.
pub fn prime_factors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            out.push(p.clone());
            while (&n % &p).is_zero() {
                n /= &p;
            }
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

/// `v_p(n)`, `None` for `n = 0`.
pub fn valuation(n: &BigInt, p: &BigInt) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let mut n = n.clone();
    let mut v = 0;
    while (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    Some(v)
}

/// Necessary condition for a monic integer polynomial to attain
/// `a_d^(-1/d)`: `gcd(a_0, a_d) = 1` and, for each prime `p | a_d` with
/// `e = v_p(a_d)`, `v_p(a_k) >= e k / d` for every `k`.
pub fn attainment_obstruction(q: &IntPoly) -> Result<AttainmentVerdict> {
    let d = q.degree();
    let a = q.lead().abs();
    if d == 0 || a.is_one() {
        return Err(Error::MonicInput);
    }
    let gcd_failure = !q.coeff(0).gcd(&a).is_one();
    let mut failures = Vec::new();
    for p in prime_factors(&a) {
        let e = valuation(&a, &p).expect("nonzero lead");
        for k in 0..d {
            let actual = valuation(&q.coeff(k), &p);
            let ok = match actual {
                None => true,
                Some(v) => v * d as u64 >= e * k as u64,
            };
            if !ok {
                failures.push(ValuationFailure {
                    prime: p.clone(),
                    index: k,
                    required: BigRational::new(BigInt::from(e * k as u64), BigInt::from(d)),
                    actual,
                });
            }
        }
    }
    let status =
        if gcd_failure || !failures.is_empty() { AttainmentStatus::Impossible } else { AttainmentStatus::Consistent };
    Ok(AttainmentVerdict { status, gcd_failure, failures })
}

#[derive(Clone, Debug, PartialEq)]
pub enum WitnessVerdict {
    /// `||R||*_I < a_d^(-1/d)` is certified, so `Q` is critical for `I`.
    Critical,
    Inconclusive(String),
}

/// Product form of an integer polynomial of content 1.
pub fn product_of_poly(r: &IntPoly) -> Result<WeightedProduct> {
    let f = factor(r);
    if !f.content.abs().is_one() {
        return Err(Error::precondition("witness polynomial must have content 1"));
    }
    WeightedProduct::from_exponents(f.factors.into_iter().map(|(g, m)| (g, BigInt::from(m))).collect())
}

fn divides_product(q: &IntPoly, r: &WeightedProduct) -> bool {
    r.active().any(|(f, _)| f.div_exact(q).is_some())
}

/// Certifies `||R||*_I < a_d^(-1/d)` for a factor `Q` of `R`.
pub fn critical_witness(r: &WeightedProduct, q: &IntPoly, i: &RatInterval) -> Result<WitnessVerdict> {
    if !all_roots_in(q, i) {
        return Err(Error::RootsEscapeI);
    }
    if !divides_product(q, r) {
        return Err(Error::QNotDividingR);
    }
    let m = ObstructionValue::of_poly(q)?;
    match strict_below(r, i, &m, None, DEFAULT_PRECISION_CAP) {
        Ok(_) => Ok(WitnessVerdict::Critical),
        Err(e @ (Error::SupExceedsM { .. } | Error::StrictMaxUndecided { .. })) => {
            Ok(WitnessVerdict::Inconclusive(e.to_string()))
        }
        Err(e) => Err(e),
    }
}

/// The nonmonic irreducible factors of `R` with all roots in `I` whose value
/// exceeds the certified `||R||*_I`; exactly one is the maximal critical
/// polynomial.
pub fn identify_maximal_critical(r: &WeightedProduct, i: &RatInterval) -> Result<ObstructionRecord> {
    let prec = 128;
    let bound = sup_log_upper(r, i, prec);
    let mut found = Vec::new();
    for (f, _) in r.active() {
        if f.lead().abs() < BigInt::from(2) || !all_roots_in(f, i) {
            continue;
        }
        let v = ObstructionValue::of_poly(f)?;
        let above = match &bound {
            None => true,
            Some(u) => v.ln_ball(prec).lower() > *u,
        };
        if above {
            found.push(f.clone());
        }
    }
    match found.len() {
        0 => Err(Error::NoCandidate),
        1 => ObstructionRecord::new(found.remove(0), 64),
        n => Err(Error::MultipleCandidates(n)),
    }
}

/// Normalised sup bound as a float, for reporting.
pub fn sup_bound_f64(r: &WeightedProduct, i: &RatInterval) -> Option<f64> {
    sup_log_upper(r, i, 128).map(|u| u.to_f64().exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::rat;

    fn p(s: &str) -> IntPoly {
        Poly::parse(s).unwrap()
    }

    #[test]
    fn counterexample_rejected() {
        let v = attainment_obstruction(&p("7x^3+4x^2-2x-1")).unwrap();
        assert_eq!(v.status, AttainmentStatus::Impossible);
        assert!(v.failures.iter().any(|f| f.prime == BigInt::from(7) && f.index == 2 && f.required == rat(2, 3)));
    }

    #[test]
    fn consistent_cases() {
        assert!(attainment_obstruction(&p("7x^3-7x^2+1")).unwrap().is_consistent());
        assert!(attainment_obstruction(&p("4x^2-2x-1")).unwrap().is_consistent());
        for n in 2..10 {
            let q = IntPoly::from_i64s(&[-1, n]);
            assert!(attainment_obstruction(&q).unwrap().is_consistent());
        }
        assert!(matches!(attainment_obstruction(&p("x^2-2")), Err(Error::MonicInput)));
    }

    #[test]
    fn gcd_failure() {
        let v = attainment_obstruction(&p("2x-2")).unwrap();
        assert!(v.gcd_failure);
    }

    #[test]
    fn witness_on_unit_interval() {
        let r = product_of_poly(&(&p("2x-1") * &p("x^2-x").pow(2))).unwrap();
        let i = RatInterval::from_ints(0, 1, 1, 1);
        assert_eq!(critical_witness(&r, &p("2x-1"), &i).unwrap(), WitnessVerdict::Critical);
        let rec = identify_maximal_critical(&r, &i).unwrap();
        assert_eq!(rec.poly, p("2x-1"));
        assert!(matches!(critical_witness(&r, &p("3x-1"), &i), Err(Error::QNotDividingR)));
        let cube = product_of_poly(&p("x^3")).unwrap();
        assert!(matches!(
            identify_maximal_critical(&cube, &RatInterval::from_ints(0, 1, 1, 3)),
            Err(Error::NoCandidate)
        ));
    }
}
