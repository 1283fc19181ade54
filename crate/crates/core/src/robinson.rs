//! Robinson's enumeration of integer polynomials with all roots real and in a
//! box `I0`, followed by the obstruction sieve.
//!
//! Coefficients are fixed from the top down. With `a_d, ..., a_{k+1}` fixed the
//! `(k+1)`-th derivative `D_{k+1}` is known, and the `k`-th derivative is
//! `D_k = E + k! a_k` where `E` is the antiderivative of `D_{k+1}` without
//! constant term. If the full polynomial is real-rooted in `I0` then so is
//! every derivative, and the roots of `D_k` interlace those of `D_{k+1}`. That
//! gives weak sign conditions on `D_k` at `R`, at the roots of `D_{k+1}` and at
//! `L`, each linear in `a_k`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ball::Ball;
use crate::error::{Error, Result};
use crate::factor::{factor, poly_order};
use crate::obstruction::ObstructionValue;
use crate::poly::{falling_factorial, Poly};
use crate::roots::{all_roots_in, isolate_roots, root_range, root_span, RatInterval, RootBox};
use crate::scalar::{format_rational, parse_rational};

type IntPoly = Poly<BigInt>;

/// Bits to which critical-point boxes are refined before evaluation.
const BOX_BITS: u32 = 48;

/// One enumeration cell: degree, leading coefficient and root box.
#[derive(Clone, Debug)]
pub struct SearchCell {
    pub degree: usize,
    pub lead: BigInt,
    pub box_: RatInterval,
}

impl SearchCell {
    pub fn new(degree: usize, lead: impl Into<BigInt>, box_: RatInterval) -> Result<Self> {
        let lead = lead.into();
        if degree == 0 || !lead.is_positive() {
            return Err(Error::precondition("search cell needs d >= 1 and a_d >= 1"));
        }
        Ok(SearchCell { degree, lead, box_ })
    }
}

/// Certified obstruction polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionRecord {
    pub poly: IntPoly,
    pub value: ObstructionValue,
    pub span: Ball,
    pub root_range: RatInterval,
}

impl ObstructionRecord {
    /// Builds a record for a real-rooted polynomial, with span and root range
    /// certified to `bits` bits.
    pub fn new(poly: IntPoly, bits: u32) -> Result<Self> {
        let value = ObstructionValue::of_poly(&poly)?;
        let span = root_span(&poly, bits)?;
        let root_range = root_range(&poly, bits)?;
        Ok(ObstructionRecord { poly, value, span, root_range })
    }

    pub fn lead(&self) -> BigInt {
        self.poly.lead()
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }
}

#[derive(Serialize, Deserialize)]
struct RecordJson {
    coeffs: Vec<String>,
    lead: String,
    degree: usize,
    root_lo: String,
    root_hi: String,
    span_lo: String,
    span_hi: String,
}

impl ObstructionRecord {
    /// One JSON line in the obstruction database format.
    pub fn to_json_line(&self) -> String {
        let j = RecordJson {
            coeffs: self.poly.coeffs().iter().map(|c| c.to_string()).collect(),
            lead: self.lead().to_string(),
            degree: self.degree(),
            root_lo: format_rational(&self.root_range.lo),
            root_hi: format_rational(&self.root_range.hi),
            span_lo: format_rational(&self.span.lower_rational()),
            span_hi: format_rational(&self.span.upper_rational()),
        };
        serde_json::to_string(&j).expect("record serializes")
    }

    pub fn from_json_line(line: &str) -> Result<Self> {
        let j: RecordJson = serde_json::from_str(line)?;
        let coeffs = j
            .coeffs
            .iter()
            .map(|c| c.parse::<BigInt>().map_err(|e| Error::parse(0, e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        let poly = Poly::new(coeffs);
        let rat = |s: &str| parse_rational(s).ok_or_else(|| Error::parse(0, format!("bad rational '{s}'")));
        let value = ObstructionValue::of_poly(&poly)?;
        let span = Ball::from_rational_interval(&rat(&j.span_lo)?, &rat(&j.span_hi)?, 128);
        let root_range = RatInterval::new(rat(&j.root_lo)?, rat(&j.root_hi)?)?;
        Ok(ObstructionRecord { poly, value, span, root_range })
    }
}

/// Distinct roots of `p` with multiplicities, as isolating boxes refined to
/// `bits` bits, in increasing order.
fn roots_with_multiplicity(p: &IntPoly, bits: u32) -> Vec<(RootBox, usize)> {
    let parts = p.squarefree_decomposition();
    let mut out = Vec::new();
    for bx in isolate_roots(p) {
        let bx = bx.refine_bits(bits);
        let mult = parts
            .iter()
            .find(|(s, _)| crate::roots::count_roots_in(s, &bx.interval).unwrap_or(0) > 0)
            .map(|(_, m)| *m)
            .unwrap_or(1);
        out.push((bx, mult));
    }
    out
}

fn ceil_rat(q: &BigRational) -> BigInt {
    q.numer().div_ceil(q.denom())
}

fn floor_rat(q: &BigRational) -> BigInt {
    q.numer().div_floor(q.denom())
}

/// Conservative integer range for `a_k` given the fixed top coefficients.
///
/// `high` holds `a_d x^d + ... + a_{k+1} x^{k+1}` (lower coefficients are
/// ignored). The range never excludes a value for which the completed `D_k`
/// is real-rooted in `I0`.
pub fn coefficient_range(high: &IntPoly, k: usize, i0: &RatInterval) -> Result<(BigInt, BigInt)> {
    let d = high.degree();
    if k >= d {
        return Err(Error::precondition("coefficient index must be below the degree"));
    }
    let top = Poly::new((0..=d).map(|i| if i > k { high.coeff(i) } else { BigInt::zero() }).collect());
    let e = top.derivative(k);
    let dk1 = top.derivative(k + 1);
    let kf = BigRational::from_integer(falling_factorial(k, k));
    let n = d - k;
    let mut lo: Option<BigInt> = None;
    let mut hi: Option<BigInt> = None;
    let mut lower = |v: BigInt| lo = Some(lo.take().map_or(v.clone(), |x: BigInt| x.max(v)));
    let mut upper_bounds: Vec<BigInt> = Vec::new();
    // D_k(R) >= 0
    lower(ceil_rat(&(-e.eval_rational(&i0.hi) / &kf)));
    // (-1)^n D_k(L) >= 0
    let vl = -e.eval_rational(&i0.lo) / &kf;
    if n.is_multiple_of(2) {
        lower(ceil_rat(&vl));
    } else {
        upper_bounds.push(floor_rat(&vl));
    }
    // (-1)^(S+1) D_k(gamma) >= 0 at each distinct root of D_{k+1}
    if dk1.degree() >= 1 {
        let roots = roots_with_multiplicity(&dk1, BOX_BITS);
        let mut above = 0usize;
        for (bx, mult) in roots.iter().rev() {
            let (v_lo, v_hi) = if bx.is_exact() {
                let v = -e.eval_rational(&bx.interval.lo) / &kf;
                (v.clone(), v)
            } else {
                let val = e.eval_in(&bx.to_ball(128));
                (-val.upper_rational() / &kf, -val.lower_rational() / &kf)
            };
            if (above + 1).is_multiple_of(2) {
                lower(ceil_rat(&v_lo));
            } else {
                upper_bounds.push(floor_rat(&v_hi));
            }
            above += mult;
        }
    }
    for u in upper_bounds {
        hi = Some(hi.map_or(u.clone(), |x: BigInt| x.min(u)));
    }
    match (lo, hi) {
        (Some(l), Some(h)) if l <= h => Ok((l, h)),
        (Some(_), Some(_)) => Err(Error::EmptyRange),
        _ => Err(Error::precondition("unbounded coefficient range")),
    }
}

/// All integer polynomials of the cell's degree and lead with every root real
/// and in `I0`, in lexicographic coefficient order.
pub fn enumerate(cell: &SearchCell) -> Vec<IntPoly> {
    let d = cell.degree;
    let mut coeffs = vec![BigInt::zero(); d + 1];
    coeffs[d] = cell.lead.clone();
    let mut out = Vec::new();
    descend(&mut coeffs, d - 1, &cell.box_, &mut out);
    out.sort_by(|a, b| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()));
    out
}

/// Enumeration with the top level split across worker threads.
pub fn enumerate_parallel(cell: &SearchCell) -> Vec<IntPoly> {
    let d = cell.degree;
    let mut top = vec![BigInt::zero(); d + 1];
    top[d] = cell.lead.clone();
    let Ok((lo, hi)) = coefficient_range(&Poly::new(top.clone()), d - 1, &cell.box_) else {
        return Vec::new();
    };
    let values: Vec<BigInt> = num_iter(&lo, &hi).collect();
    let mut out: Vec<IntPoly> = values
        .par_iter()
        .flat_map_iter(|a| {
            let mut coeffs = top.clone();
            coeffs[d - 1] = a.clone();
            let mut local = Vec::new();
            if level_ok(&coeffs, d - 1, &cell.box_) {
                if d == 1 {
                    local.push(Poly::new(coeffs.clone()));
                } else {
                    descend(&mut coeffs, d - 2, &cell.box_, &mut local);
                }
            }
            local
        })
        .collect();
    out.sort_by(|a, b| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()));
    out
}

fn num_iter(lo: &BigInt, hi: &BigInt) -> impl Iterator<Item = BigInt> {
    let lo = lo.clone();
    let count = (hi - &lo + 1u32).max(BigInt::zero());
    let n: u64 = num_traits::ToPrimitive::to_u64(&count).unwrap_or(0);
    (0..n).map(move |i| &lo + i)
}

/// `D_k` (from the current coefficients) is real-rooted in `I0`.
fn level_ok(coeffs: &[BigInt], k: usize, i0: &RatInterval) -> bool {
    let p = Poly::new(coeffs.to_vec());
    let dk = p.derivative(k);
    if dk.degree() == 0 {
        return true;
    }
    all_roots_in(&dk, i0)
}

fn descend(coeffs: &mut Vec<BigInt>, k: usize, i0: &RatInterval, out: &mut Vec<IntPoly>) {
    let high = Poly::new(coeffs.clone());
    let Ok((lo, hi)) = coefficient_range(&high, k, i0) else {
        return;
    };
    for a in num_iter(&lo, &hi) {
        coeffs[k] = a;
        if !level_ok(coeffs, k, i0) {
            continue;
        }
        if k == 0 {
            out.push(Poly::new(coeffs.clone()));
        } else {
            descend(coeffs, k - 1, i0, out);
        }
    }
    coeffs[k] = BigInt::zero();
}

/// Brute-force oracle: every coefficient vector inside the root-bound box,
/// filtered by the exact real-rootedness test.
pub fn enumerate_brute_force(cell: &SearchCell) -> Vec<IntPoly> {
    let d = cell.degree;
    let rho = cell.box_.lo.abs().max(cell.box_.hi.abs());
    let bounds: Vec<BigInt> = (0..d)
        .map(|i| {
            // |a_i| <= a_d C(d, i) rho^(d-i)
            let c = binomial(d, i);
            floor_rat(&(BigRational::from_integer(&cell.lead * c) * num_traits::pow(rho.clone(), d - i)))
        })
        .collect();
    let mut out = Vec::new();
    let mut coeffs = vec![BigInt::zero(); d + 1];
    coeffs[d] = cell.lead.clone();
    fn rec(i: usize, coeffs: &mut Vec<BigInt>, bounds: &[BigInt], i0: &RatInterval, out: &mut Vec<IntPoly>) {
        if i == bounds.len() {
            let p = Poly::new(coeffs.clone());
            if all_roots_in(&p, i0) {
                out.push(p);
            }
            return;
        }
        for a in num_iter(&-&bounds[i], &bounds[i]) {
            coeffs[i] = a;
            rec(i + 1, coeffs, bounds, i0, out);
        }
    }
    rec(0, &mut coeffs, &bounds, &cell.box_, &mut out);
    out.sort_by(|a, b| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()));
    out
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// Compares two distinct real algebraic numbers given by isolating boxes.
fn compare_roots(a: &RootBox, b: &RootBox) -> Ordering {
    let (mut a, mut b) = (a.clone(), b.clone());
    loop {
        if a.interval.hi < b.interval.lo {
            return Ordering::Less;
        }
        if b.interval.hi < a.interval.lo {
            return Ordering::Greater;
        }
        if a.is_exact() && b.is_exact() {
            return a.interval.lo.cmp(&b.interval.lo);
        }
        if a.is_exact() {
            return match b.side_of(&a.interval.lo) {
                1 => Ordering::Less,
                -1 => Ordering::Greater,
                _ => Ordering::Equal,
            };
        }
        if b.is_exact() {
            return match a.side_of(&b.interval.lo) {
                1 => Ordering::Greater,
                -1 => Ordering::Less,
                _ => Ordering::Equal,
            };
        }
        a.bisect();
        b.bisect();
    }
}

/// Root range of `outer` contains that of `inner` (exact).
fn range_contains(outer: &IntPoly, inner: &IntPoly) -> bool {
    let ro = isolate_roots(outer);
    let ri = isolate_roots(inner);
    let (Some(o_lo), Some(o_hi), Some(i_lo), Some(i_hi)) = (ro.first(), ro.last(), ri.first(), ri.last()) else {
        return false;
    };
    compare_roots(o_lo, i_lo) != Ordering::Greater && compare_roots(o_hi, i_hi) != Ordering::Less
}

/// Keeps irreducible content-1 polynomials with obstruction value above `t`
/// and drops, within each (degree, lead), any polynomial whose root range
/// contains another kept polynomial's root range.
pub fn sieve(polys: &[IntPoly], t: &BigRational) -> Vec<ObstructionRecord> {
    let mut kept: Vec<IntPoly> = polys
        .iter()
        .filter(|p| p.degree() >= 1)
        .filter(|p| ObstructionValue::of_poly(p).map(|v| v.exceeds(t)).unwrap_or(false))
        .filter(|p| factor(p).is_irreducible_primitive() && p.lead().is_positive())
        .cloned()
        .collect();
    kept.sort_by(poly_order);
    kept.dedup();
    let n = kept.len();
    let mut drop = vec![false; n];
    for i in 0..n {
        for j in 0..n {
            if i == j || drop[j] {
                continue;
            }
            let (r, q) = (&kept[i], &kept[j]);
            if r.degree() == q.degree() && r.lead() == q.lead() && range_contains(r, q) {
                drop[i] = true;
                break;
            }
        }
    }
    let mut out: Vec<ObstructionRecord> = kept
        .into_iter()
        .zip(drop)
        .filter(|(_, d)| !d)
        .filter_map(|(p, _)| ObstructionRecord::new(p, 64).ok())
        .collect();
    sort_records(&mut out);
    out
}

/// Deterministic order: degree, lead, then coefficients from the top.
pub fn sort_records(records: &mut [ObstructionRecord]) {
    records.sort_by(|a, b| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| a.lead().cmp(&b.lead()))
            .then_with(|| a.poly.coeffs().iter().rev().cmp(b.poly.coeffs().iter().rev()))
    });
}

/// Desk-scale sweep: degrees ascending, leads descending from `2^d` (capped
/// by `max_lead`) to 2, sieved against `t`.
pub fn search(max_degree: usize, max_lead: Option<u64>, i0: &RatInterval, t: &BigRational) -> Vec<ObstructionRecord> {
    let mut records = Vec::new();
    for d in 1..=max_degree {
        let cap = 1u64 << d.min(62);
        let top = max_lead.map_or(cap, |m| m.min(cap));
        for a in (2..=top).rev() {
            let cell = SearchCell::new(d, a, i0.clone()).expect("valid cell");
            records.extend(sieve(&enumerate_parallel(&cell), t));
        }
    }
    sort_records(&mut records);
    records
}

/// The box must be longer than the best span plus one for the cover argument.
pub fn box_is_wide_enough(i0: &RatInterval, best_span: &BigRational) -> bool {
    i0.width() > best_span + BigRational::one()
}
