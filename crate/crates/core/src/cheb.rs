//! Monic integer Chebyshev search: LLL candidate factors, resultant filter,
//! weight optimisation and exact attainment certificates.
//!
//! A candidate is a weighted product `F(x) = sum (alpha_i / deg f_i) log|f_i(x)|`
//! standing for `log |P(x)|^(1/deg P)`. Products are never expanded.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::ball::{Ball, Dyadic, DEFAULT_PRECISION_CAP, START_PRECISION};
use crate::error::{Error, Result};
use crate::factor::{factor, poly_order};
use crate::lll::{form_value, lll_gram, lll_rows};
use crate::lp::{minimize_max, Equality};
use crate::obstruction::ObstructionValue;
use crate::padic::attainment_obstruction;
use crate::poly::Poly;
use crate::resultant::resultant;
use crate::roots::{all_roots_in, isolate_roots, isolate_roots_in, RatInterval, RootBox};
use crate::scalar::rational_to_f64;

type IntPoly = Poly<BigInt>;

/// Normalised product `prod f_i^(alpha_i / deg f_i)` with `sum alpha_i = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedProduct {
    factors: Vec<(IntPoly, BigRational)>,
}

impl WeightedProduct {
    /// Checks nonconstant distinct factors and nonnegative weights summing
    /// to one.
    pub fn new(factors: Vec<(IntPoly, BigRational)>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::precondition("empty product"));
        }
        let mut sum = BigRational::zero();
        for (i, (f, a)) in factors.iter().enumerate() {
            if f.degree() == 0 {
                return Err(Error::precondition("constant factor"));
            }
            if a.is_negative() {
                return Err(Error::precondition("negative weight"));
            }
            if factors[..i].iter().any(|(g, _)| g == f) {
                return Err(Error::precondition(format!("repeated factor {f}")));
            }
            sum += a;
        }
        if !sum.is_one() {
            return Err(Error::precondition("weights do not sum to 1"));
        }
        Ok(WeightedProduct { factors })
    }

    /// `prod f_i^(e_i)` normalised: `alpha_i = e_i deg f_i / deg P`.
    pub fn from_exponents(factors: Vec<(IntPoly, BigInt)>) -> Result<Self> {
        let n: BigInt = factors.iter().map(|(f, e)| e * BigInt::from(f.degree())).sum();
        if !n.is_positive() || factors.iter().any(|(_, e)| e.is_negative()) {
            return Err(Error::precondition("exponents must be nonnegative with positive degree"));
        }
        Self::new(
            factors
                .into_iter()
                .map(|(f, e)| {
                    let a = BigRational::new(e * BigInt::from(f.degree()), n.clone());
                    (f, a)
                })
                .collect(),
        )
    }

    pub fn factors(&self) -> &[(IntPoly, BigRational)] {
        &self.factors
    }

    pub fn alphas(&self) -> Vec<BigRational> {
        self.factors.iter().map(|(_, a)| a.clone()).collect()
    }

    /// Factors with positive weight.
    pub fn active(&self) -> impl Iterator<Item = (&IntPoly, &BigRational)> {
        self.factors.iter().filter(|(_, a)| a.is_positive()).map(|(f, a)| (f, a))
    }

    pub fn is_monic(&self) -> bool {
        self.active().all(|(f, _)| f.is_monic())
    }

    /// Per-factor log weights `alpha_i / deg f_i`.
    pub fn log_weights(&self) -> Vec<BigRational> {
        self.factors.iter().map(|(f, a)| a / BigInt::from(f.degree())).collect()
    }

    /// Integer exponents `e_i` and degree `n = sum e_i deg f_i` of the
    /// smallest polynomial `P` with `P^(1/n)` equal to the product.
    pub fn integer_exponents(&self) -> (Vec<BigInt>, BigInt) {
        let w = self.log_weights();
        let n = w.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let e = w.iter().map(|c| (c * &n).to_integer()).collect();
        (e, n)
    }

    /// `N = sum c_i f_i' prod_{j != i} f_j` with integer `c_i` proportional to
    /// the log weights; the zeros of `F'` off the factor roots are its roots.
    pub fn critical_numerator(&self) -> IntPoly {
        let (e, _) = self.integer_exponents();
        let active: Vec<(&IntPoly, &BigInt)> =
            self.factors.iter().zip(&e).filter(|(_, e)| e.is_positive()).map(|((f, _), e)| (f, e)).collect();
        let mut n = IntPoly::zero();
        for (i, (fi, ei)) in active.iter().enumerate() {
            let mut term = fi.derivative(1).scale(ei);
            for (j, (fj, _)) in active.iter().enumerate() {
                if i != j {
                    term = &term * *fj;
                }
            }
            n = &n + &term;
        }
        n
    }

    /// `F` as a ball; `None` when an active factor's ball contains zero.
    pub fn log_ball(&self, x: &Ball, prec: u32) -> Option<Ball> {
        let mut acc = Ball::from_int(0).with_prec(prec);
        for (f, c) in self.factors.iter().zip(self.log_weights()) {
            if c.is_zero() {
                continue;
            }
            let v = f.0.eval_in(x).abs();
            let l = v.ln()?;
            acc = acc.add_ref(&l.mul_ref(&Ball::from_rational(&c, prec + 8)));
        }
        Some(acc.with_prec(prec))
    }

    /// Upper bound of `F` over the ball; `None` is `-inf`.
    pub fn log_upper(&self, x: &Ball, prec: u32) -> Option<Dyadic> {
        let mut acc = Ball::from_int(0).with_prec(prec);
        for (f, c) in self.factors.iter().zip(self.log_weights()) {
            if c.is_zero() {
                continue;
            }
            let u = f.0.eval_in(x).with_prec(prec).ln_abs_upper()?;
            acc = acc.add_ref(&Ball::exact(u).mul_ref(&Ball::from_rational(&c, prec + 8)));
        }
        Some(acc.upper())
    }

    /// Lower bound of `F` over the ball; `None` is `-inf`.
    pub fn log_lower(&self, x: &Ball, prec: u32) -> Option<Dyadic> {
        self.log_ball(x, prec).map(|b| b.lower())
    }

    /// Floating-point `F(x)`.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.factors
            .iter()
            .zip(self.log_weights())
            .filter(|(_, c)| c.is_positive())
            .map(|((f, _), c)| rational_to_f64(&c) * f.to_f64().eval(&x).abs().ln())
            .sum()
    }
}

/// Result of the strict comparison at one candidate maximum.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCheck {
    pub location: RatInterval,
    /// Certified upper bound of `F` there (`-inf` as `None`).
    pub log_upper: Option<f64>,
    pub bits: u32,
    /// `F = log m` exactly at this rational point.
    pub attained: bool,
}

/// How the roots of `Q` were shown to be critical points of `F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CriticalCheck {
    /// `Q` divides the critical-point numerator.
    Divides,
    /// The single (rational) root of `Q` is an endpoint of the interval.
    EndpointRoot,
}

/// How `F = log m` was established at the roots of `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootValueCheck {
    /// Linear `Q`: `|f_i(b/a)| = a^(-deg f_i)` from the resultants.
    Linear,
    /// `a^n P(beta)^d` is a totally real unit whose conjugates are all `+-1`.
    ConjugateUnit { signs: Vec<i32>, bits: u32 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub resultants: Vec<BigInt>,
    pub critical: CriticalCheck,
    pub points: Vec<PointCheck>,
    pub root_values: RootValueCheck,
}

/// A product whose sup over the interval is certified to equal `sup_value`.
#[derive(Clone, Debug, PartialEq)]
pub struct CertifiedProduct {
    pub product: WeightedProduct,
    pub interval: RatInterval,
    pub obstruction: IntPoly,
    pub sup_value: ObstructionValue,
    pub certificate: Certificate,
}

/// Certifies `sup_I exp(F) = a^(-1/d)` for the obstruction `Q`, with the
/// default precision cap.
pub fn certify_attainment(product: &WeightedProduct, i: &RatInterval, q: &IntPoly) -> Result<CertifiedProduct> {
    certify_attainment_with(product, i, q, DEFAULT_PRECISION_CAP)
}

pub fn certify_attainment_with(
    product: &WeightedProduct,
    i: &RatInterval,
    q: &IntPoly,
    cap: u32,
) -> Result<CertifiedProduct> {
    let q = q.primitive_part();
    if q.lead() < BigInt::from(2) {
        return Err(Error::precondition("obstruction polynomial must be nonmonic"));
    }
    if !all_roots_in(&q, i) {
        return Err(Error::RootsEscapeI);
    }
    if !product.is_monic() {
        return Err(Error::precondition("product factors must be monic"));
    }
    let m = ObstructionValue::of_poly(&q)?;
    // (1) unit resultants
    let mut resultants = Vec::new();
    for (f, _) in product.active() {
        let r = resultant(f, &q);
        if r.abs() != BigInt::one() {
            return Err(Error::ResultantFailed { factor: f.to_string() });
        }
        resultants.push(r);
    }
    // (2) roots of Q are critical points of F
    let n = product.critical_numerator();
    let endpoint_root = q.degree() == 1 && (q.sign_at(&i.lo) == 0 || q.sign_at(&i.hi) == 0);
    let critical = if endpoint_root {
        CriticalCheck::EndpointRoot
    } else if n.div_exact(&q).is_some() {
        CriticalCheck::Divides
    } else {
        return Err(Error::NotCritical);
    };
    // (3) every other candidate maximum is strictly below log m
    let points = strict_below(product, i, &m, Some(&q), cap)?;
    // (4) F = log m at the roots of Q
    let root_values = if q.degree() == 1 { RootValueCheck::Linear } else { conjugate_unit_check(product, &q, cap)? };
    Ok(CertifiedProduct {
        product: product.clone(),
        interval: i.clone(),
        obstruction: q,
        sup_value: m,
        certificate: Certificate { resultants, critical, points, root_values },
    })
}

/// Removes every factor of `q` from `p`.
fn strip_factor(p: &IntPoly, q: &IntPoly) -> IntPoly {
    let mut p = p.clone();
    while p.degree() >= q.degree() {
        match p.div_exact(q) {
            Some(r) => p = r,
            None => break,
        }
    }
    p
}

/// Shows `F < log m` at every critical point of `F` in `I` and at both
/// endpoints, skipping the roots of `skip`.
pub fn strict_below(
    product: &WeightedProduct,
    i: &RatInterval,
    m: &ObstructionValue,
    skip: Option<&IntPoly>,
    cap: u32,
) -> Result<Vec<PointCheck>> {
    candidate_boxes(product, i, skip).par_iter().map(|b| check_point(product, b, m, cap)).collect()
}

/// Critical points of `F` in `I` (as isolating boxes) and the endpoints,
/// without the roots of `skip`.
pub(crate) fn candidate_boxes(product: &WeightedProduct, i: &RatInterval, skip: Option<&IntPoly>) -> Vec<RootBox> {
    let mut n = product.critical_numerator();
    if let Some(q) = skip {
        n = strip_factor(&n, q);
    }
    let mut boxes = Vec::new();
    if n.degree() >= 1 {
        // rational critical points become exact boxes
        let mut rest = IntPoly::constant(BigInt::one());
        for (g, _) in factor(&n).factors {
            if g.degree() == 1 {
                let r = BigRational::new(-g.coeff(0), g.coeff(1));
                if i.contains(&r) {
                    boxes.push(RootBox { interval: RatInterval::point(r), poly: g, sign_left: 0, sign_right: 0 });
                }
            } else {
                rest = &rest * &g;
            }
        }
        if rest.degree() >= 1 {
            boxes.extend(isolate_roots_in(&rest, i));
        }
    }
    for e in [&i.lo, &i.hi] {
        if skip.is_some_and(|q| q.sign_at(e) == 0) {
            continue;
        }
        if boxes.iter().any(|b| b.is_exact() && b.interval.lo == *e) {
            continue;
        }
        boxes.push(RootBox { interval: RatInterval::point(e.clone()), poly: Poly::x(), sign_left: 0, sign_right: 0 });
    }
    boxes
}

/// Certified upper bound of `sup_I F` from boxes refined to `prec` bits;
/// `None` is `-inf`.
pub fn sup_log_upper(product: &WeightedProduct, i: &RatInterval, prec: u32) -> Option<Dyadic> {
    candidate_boxes(product, i, None)
        .par_iter()
        .filter_map(|b| product.log_upper(&b.refine_bits(prec).to_ball(prec + 16), prec + 16))
        .max()
}

fn check_point(product: &WeightedProduct, b: &RootBox, m: &ObstructionValue, cap: u32) -> Result<PointCheck> {
    if b.is_exact() && attains_exactly(product, &b.interval.lo, m) {
        return Ok(PointCheck {
            location: b.interval.clone(),
            log_upper: Some(m.ln_ball(64).to_f64()),
            bits: 0,
            attained: true,
        });
    }
    let mut prec = START_PRECISION;
    loop {
        let bx = b.refine_bits(prec);
        let ball = bx.to_ball(prec + 16);
        let target = m.ln_ball(prec + 16);
        match product.log_upper(&ball, prec + 16) {
            None => {
                return Ok(PointCheck { location: bx.interval, log_upper: None, bits: prec, attained: false });
            }
            Some(u) if u < target.lower() => {
                return Ok(PointCheck {
                    location: bx.interval,
                    log_upper: Some(u.to_f64()),
                    bits: prec,
                    attained: false,
                });
            }
            Some(_) => {}
        }
        if let Some(l) = product.log_lower(&ball, prec + 16) {
            if l > target.upper() {
                return Err(Error::SupExceedsM { point: format!("{:.12}", rational_to_f64(&bx.interval.midpoint())) });
            }
        }
        if prec >= cap {
            return Err(Error::StrictMaxUndecided { bits: cap });
        }
        prec = (prec * 2).min(cap);
    }
}

/// `F(r) = log m` exactly at a rational point, decided over a coprime base of
/// the values `|f_i(r)|` and the lead of `Q`.
fn attains_exactly(product: &WeightedProduct, r: &BigRational, m: &ObstructionValue) -> bool {
    let mut terms = Vec::new();
    for ((f, _), c) in product.factors().iter().zip(product.log_weights()) {
        if c.is_zero() {
            continue;
        }
        let v = f.eval_rational(r).abs();
        if v.is_zero() {
            return false;
        }
        terms.push((c, v));
    }
    terms
        .push((BigRational::new(BigInt::one(), BigInt::from(m.root_index)), BigRational::from_integer(m.base.clone())));
    log_combination_vanishes(&terms)
}

/// `sum w_i ln v_i == 0` for positive rationals `v_i`, exactly.
pub fn log_combination_vanishes(terms: &[(BigRational, BigRational)]) -> bool {
    let mut base: Vec<BigInt> = Vec::new();
    for (_, v) in terms {
        for n in [v.numer(), v.denom()] {
            if !n.is_one() {
                base.push(n.clone());
            }
        }
    }
    // factor refinement to a pairwise coprime set
    'outer: loop {
        base.sort();
        base.dedup();
        for i in 0..base.len() {
            for j in i + 1..base.len() {
                let g = base[i].gcd(&base[j]);
                if !g.is_one() {
                    let (x, y) = (&base[i] / &g, &base[j] / &g);
                    base.remove(j);
                    base.remove(i);
                    base.extend([x, y, g].into_iter().filter(|z| !z.is_one()));
                    continue 'outer;
                }
            }
        }
        break;
    }
    let exponent = |n: &BigInt, p: &BigInt| {
        let mut n = n.clone();
        let mut k = 0i64;
        while (&n % p).is_zero() {
            n /= p;
            k += 1;
        }
        k
    };
    base.iter().all(|p| {
        let s: BigRational = terms
            .iter()
            .map(|(w, v)| w * BigRational::from_integer(BigInt::from(exponent(v.numer(), p) - exponent(v.denom(), p))))
            .sum();
        s.is_zero()
    })
}

/// `F(beta_j) = log m` at every root of `Q`, via the unit
/// `w = a^n P(beta)^d`: all conjugates of `w` are `+-1`.
fn conjugate_unit_check(product: &WeightedProduct, q: &IntPoly, cap: u32) -> Result<RootValueCheck> {
    let verdict = attainment_obstruction(q)?;
    if !verdict.is_consistent() {
        return Err(Error::ConjugateCheckFailed("valuation condition fails, so a^n P(beta)^d is not a unit".into()));
    }
    let (exps, n) = product.integer_exponents();
    let d = q.degree();
    let a = q.lead();
    let scale = BigInt::from(d) * &n;
    let extra = scale.bits() as u32 + 16;
    let boxes = isolate_roots(q);
    let mut prec = START_PRECISION;
    loop {
        let wp = prec + extra;
        match conjugate_poly(product, &boxes, &exps, &n, &a, d, wp) {
            Some((chi, signs)) => {
                if all_roots_unit(&chi) {
                    return Ok(RootValueCheck::ConjugateUnit { signs, bits: wp });
                }
                return Err(Error::ConjugateCheckFailed(format!(
                    "characteristic polynomial {chi} of a^n P(beta)^d has a root other than +-1"
                )));
            }
            None if prec >= cap => {
                return Err(Error::ConjugateCheckFailed(format!("conjugate values not pinned at {wp} bits")));
            }
            None => {}
        }
        if prec >= cap {
            return Err(Error::StrictMaxUndecided { bits: cap });
        }
        prec = (prec * 2).min(cap);
    }
}

/// Integer characteristic polynomial of `w` with the sign of each conjugate,
/// when the enclosures pin every coefficient.
fn conjugate_poly(
    product: &WeightedProduct,
    boxes: &[RootBox],
    exps: &[BigInt],
    n: &BigInt,
    a: &BigInt,
    d: usize,
    wp: u32,
) -> Option<(IntPoly, Vec<i32>)> {
    let ln_a = Ball::ln_rational(&BigRational::from_integer(a.clone()), wp);
    let dn = Ball::from_int(BigInt::from(d) * n);
    let mut ws = Vec::new();
    let mut signs = Vec::new();
    for b in boxes {
        let ball = b.refine_bits(wp).to_ball(wp);
        let f = product.log_ball(&ball, wp)?;
        let lw = f.mul_ref(&dn).add_ref(&ln_a.mul_ref(&Ball::from_int(n.clone())));
        if lw.rad() > &Dyadic::pow2(-4) {
            return None;
        }
        // sign of P(beta)^d
        let mut neg = false;
        for ((f, _), e) in product.factors().iter().zip(exps) {
            let s = f.eval_in(&ball).sign()?;
            if s < 0 && (e * BigInt::from(d)).is_odd() {
                neg = !neg;
            }
        }
        let mag = lw.exp();
        ws.push(if neg { -mag } else { mag });
        signs.push(if neg { -1 } else { 1 });
    }
    // prod (x - w_j)
    let mut coeffs = vec![Ball::from_int(1)];
    for w in &ws {
        let mut next = vec![Ball::from_int(0); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] = next[k + 1].add_ref(c);
            next[k] = next[k].sub_ref(&c.mul_ref(w));
        }
        coeffs = next;
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut ints = Vec::new();
    for c in &coeffs {
        let mid = c.mid().to_rational();
        let k = (&mid + &half).floor().to_integer();
        let kq = BigRational::from_integer(k.clone());
        if !(c.lower_rational() > &kq - &half && c.upper_rational() < &kq + &half) {
            return None;
        }
        ints.push(k);
    }
    Some((Poly::new(ints), signs))
}

fn all_roots_unit(chi: &IntPoly) -> bool {
    let mut p = chi.clone();
    for lin in [IntPoly::from_i64s(&[-1, 1]), IntPoly::from_i64s(&[1, 1])] {
        while p.degree() >= 1 {
            match p.div_exact(&lin) {
                Some(r) => p = r,
                None => break,
            }
        }
    }
    p.degree() == 0
}

/// Gram matrix of `<R1, R2> = int_I R1 R2 dx + b_k c_k` on the monomial
/// basis of degree `k`.
pub fn gram_matrix(i: &RatInterval, k: usize) -> Vec<Vec<BigRational>> {
    let moment = |s: usize| {
        let e = s + 1;
        (num_traits::pow(i.hi.clone(), e) - num_traits::pow(i.lo.clone(), e)) / BigInt::from(e)
    };
    let moments: Vec<BigRational> = (0..=2 * k).map(moment).collect();
    (0..=k)
        .map(|r| {
            (0..=k)
                .map(|c| {
                    let mut v = moments[r + c].clone();
                    if r == k && c == k {
                        v += BigRational::one();
                    }
                    v
                })
                .collect()
        })
        .collect()
}

/// LLL candidate factors up to degree `k_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidates {
    /// Monic irreducible factors, deduplicated and ordered.
    pub factors: Vec<IntPoly>,
    /// Degrees whose reduced basis had no vector with unit leading coefficient.
    pub no_monic: Vec<usize>,
}

/// For each `k <= k_max`, reduces the monomial basis under the weighted
/// inner product and factors the short vectors with unit leading
/// coefficient. Near-minimal neighbours `b + sum c_j b_j` (`c_j` in
/// `{-1, 0, 1}`, `b_j` of lower degree) are included.
pub fn lll_candidates(i: &RatInterval, k_max: usize) -> Candidates {
    let mut factors: Vec<IntPoly> = Vec::new();
    let mut no_monic = Vec::new();
    for k in 1..=k_max {
        let gram = gram_matrix(i, k);
        let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
        let basis = lll_gram(&gram, delta);
        let (leading, lower): (Vec<_>, Vec<_>) = basis.into_iter().partition(|v| !v[k].is_zero());
        let mut monic: Vec<(Vec<BigInt>, BigRational)> = Vec::new();
        for b in leading.iter().filter(|v| v[k].abs().is_one()) {
            let sign = if b[k].is_negative() { -BigInt::one() } else { BigInt::one() };
            let b: Vec<BigInt> = b.iter().map(|c| c * &sign).collect();
            let tail: Vec<&Vec<BigInt>> = lower.iter().take(8).collect();
            let combos = 3usize.pow(tail.len() as u32);
            for code in 0..combos {
                let mut v = b.clone();
                let mut c = code;
                for t in &tail {
                    let digit = (c % 3) as i64 - 1;
                    c /= 3;
                    if digit != 0 {
                        for (x, y) in v.iter_mut().zip(t.iter()) {
                            *x += y * digit;
                        }
                    }
                }
                let val = form_value(&gram, &v);
                monic.push((v, val));
            }
        }
        if monic.is_empty() {
            no_monic.push(k);
            continue;
        }
        let best = monic.iter().map(|(_, v)| v.clone()).min().expect("nonempty");
        let bound = best * BigInt::from(2);
        for (v, val) in monic {
            if val > bound {
                continue;
            }
            let p = Poly::new(v);
            for (f, _) in factor(&p).factors {
                if f.is_monic() && !factors.contains(&f) {
                    factors.push(f);
                }
            }
        }
    }
    factors.sort_by(poly_order);
    Candidates { factors, no_monic }
}

/// Candidates with `|Res(f, Q)| = 1`, in their input order.
pub fn filter_factors(candidates: &[IntPoly], q: &IntPoly) -> Vec<IntPoly> {
    candidates.iter().filter(|f| resultant(f, q).abs().is_one()).cloned().collect()
}

/// Tuning for [`optimize_weights_with`].
#[derive(Clone, Debug)]
pub struct LpOptions {
    pub samples_per_factor: usize,
    /// Samples closer than this to a factor root are dropped.
    pub guard: f64,
    pub max_denominator: u64,
    /// Extra linear equalities on the weights.
    pub equalities: Vec<Equality>,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions { samples_per_factor: 500, guard: 1e-6, max_denominator: 1_000_000, equalities: Vec::new() }
    }
}

/// Simplex weights minimising the discretised sup of `F` on `I`, with
/// criticality constraints at the interior roots of `Q`.
pub fn optimize_weights(factors: &[IntPoly], i: &RatInterval, q: Option<&IntPoly>) -> Result<(f64, Vec<BigRational>)> {
    optimize_weights_with(factors, i, q, &LpOptions::default())
}

pub fn optimize_weights_with(
    factors: &[IntPoly],
    i: &RatInterval,
    q: Option<&IntPoly>,
    opts: &LpOptions,
) -> Result<(f64, Vec<BigRational>)> {
    if factors.is_empty() {
        return Err(Error::precondition("no factors"));
    }
    let k = factors.len();
    let count = (opts.samples_per_factor * k).max(10 * k).max(2);
    let roots: Vec<f64> = factors
        .iter()
        .flat_map(|f| isolate_roots(f).into_iter().map(|b| rational_to_f64(&b.refine_bits(60).interval.midpoint())))
        .collect();
    let (lo, hi) = (rational_to_f64(&i.lo), rational_to_f64(&i.hi));
    let (mid, half) = ((lo + hi) / 2.0, (hi - lo) / 2.0);
    let fl: Vec<Poly<f64>> = factors.iter().map(|f| f.to_f64()).collect();
    let degs: Vec<f64> = factors.iter().map(|f| f.degree() as f64).collect();
    let mut samples: Vec<f64> = (0..count)
        .map(|s| mid + half * (std::f64::consts::PI * s as f64 / (count - 1) as f64).cos())
        .filter(|x| roots.iter().all(|r| (x - r).abs() > opts.guard))
        .collect();
    let mut eqs = opts.equalities.clone();
    let mut exact: Vec<(Vec<BigRational>, BigRational)> = vec![(vec![BigRational::one(); k], BigRational::one())];
    if let Some(q) = q {
        for b in isolate_roots_in(q, i) {
            if b.is_exact() && (b.interval.lo == i.lo || b.interval.lo == i.hi) {
                continue;
            }
            if !b.is_exact() && !(i.lo < b.interval.lo && b.interval.hi < i.hi) {
                let r = b.refine_bits(64);
                if r.interval.lo <= i.lo || r.interval.hi >= i.hi {
                    continue;
                }
            }
            let bx = b.refine_bits(60);
            let beta = rational_to_f64(&bx.interval.midpoint());
            let coeffs: Vec<f64> =
                fl.iter().zip(&degs).map(|(f, d)| f.derivative(1).eval(&beta) / (d * f.eval(&beta))).collect();
            eqs.push(Equality { coeffs, rhs: 0.0 });
            samples.push(beta);
            if bx.is_exact() {
                let x = &bx.interval.lo;
                let g = factors
                    .iter()
                    .map(|f| f.derivative(1).eval_rational(x) / (f.eval_rational(x) * BigInt::from(f.degree())))
                    .collect();
                exact.push((g, BigRational::zero()));
            }
        }
    }
    let row = |x: f64| -> Vec<f64> { fl.iter().zip(&degs).map(|(f, d)| f.eval(&x).abs().ln() / d).collect() };
    let rows: Vec<Vec<f64>> = samples.iter().map(|&x| row(x)).collect();
    if rows.is_empty() {
        return Err(Error::precondition("no admissible samples"));
    }
    let (_, alpha) = minimize_max(&rows, &eqs)?;
    let mut alphas: Vec<BigRational> = alpha.iter().map(|a| best_rational(*a, opts.max_denominator)).collect();
    repair(&mut alphas, &alpha, &exact)?;
    if alphas.iter().any(|a| a.is_negative()) {
        return Err(Error::Infeasible);
    }
    let af: Vec<f64> = alphas.iter().map(rational_to_f64).collect();
    let t = rows
        .iter()
        .map(|r| r.iter().zip(&af).map(|(x, a)| if *a == 0.0 { 0.0 } else { x * a }).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max);
    Ok((t, alphas))
}

/// Re-solves the exact equalities for the largest weights, keeping the
/// others at their rounded values.
#[allow(clippy::needless_range_loop)]
fn repair(alphas: &mut [BigRational], approx: &[f64], exact: &[(Vec<BigRational>, BigRational)]) -> Result<()> {
    let k = alphas.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| approx[b].partial_cmp(&approx[a]).unwrap_or(Ordering::Equal));
    // greedy pivot choice with exact elimination
    let rows = exact.len();
    let mut m: Vec<Vec<BigRational>> = exact.iter().map(|(c, _)| c.clone()).collect();
    let mut rhs: Vec<BigRational> = exact.iter().map(|(_, r)| r.clone()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for &col in &order {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(r, p);
        rhs.swap(r, p);
        let pv = m[r][col].clone();
        for j in 0..k {
            m[r][j] = &m[r][j] / &pv;
        }
        rhs[r] = &rhs[r] / &pv;
        for i in 0..rows {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..k {
                    let v = &m[r][j] * &f;
                    m[i][j] -= v;
                }
                let v = &rhs[r] * &f;
                rhs[i] -= v;
            }
        }
        pivots.push(col);
        r += 1;
    }
    if (r..rows).any(|i| !rhs[i].is_zero()) {
        return Err(Error::Infeasible);
    }
    for (row, &col) in pivots.iter().enumerate() {
        let mut v = rhs[row].clone();
        for j in 0..k {
            if !pivots.contains(&j) {
                v -= &m[row][j] * &alphas[j];
            }
        }
        alphas[col] = v;
    }
    Ok(())
}

/// Best rational approximation with denominator at most `max_den`.
pub fn best_rational(x: f64, max_den: u64) -> BigRational {
    let (mut h0, mut h1, mut k0, mut k1) = (0i128, 1i128, 1i128, 0i128);
    let mut y = x;
    for _ in 0..64 {
        let a = y.floor();
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = y - a;
        if frac.abs() < 1e-15 {
            break;
        }
        y = 1.0 / frac;
    }
    if k1 == 0 {
        return BigRational::from_integer(BigInt::from(x.round() as i128));
    }
    BigRational::new(BigInt::from(h1), BigInt::from(k1))
}

/// Integer relation `c_0 log a + sum c_i log|f_i(beta)| = 0`, found by
/// lattice reduction and checked at twice the search precision. Relations
/// are heuristic and only ever tighten the linear program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub coeffs: Vec<BigInt>,
    pub heuristic: bool,
}

pub fn relation_basis(factors: &[IntPoly], q: &IntPoly, beta: &RootBox) -> Vec<Relation> {
    const BITS: u32 = 192;
    let values = |prec: u32| -> Option<Vec<Ball>> {
        let b = beta.refine_bits(prec + 32).to_ball(prec + 32);
        let mut v = vec![Ball::ln_rational(&BigRational::from_integer(q.lead().abs()), prec)];
        for f in factors {
            v.push(f.eval_in(&b).abs().ln()?.with_prec(prec));
        }
        Some(v)
    };
    let Some(v) = values(BITS) else { return Vec::new() };
    let Some(check) = values(2 * BITS) else { return Vec::new() };
    let n = v.len();
    let scale = Dyadic::pow2(BITS as i64 - 32);
    let rows: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            let mut r: Vec<BigInt> = (0..n).map(|c| if c == j { BigInt::one() } else { BigInt::zero() }).collect();
            let s = v[j].mid().mul(&scale).to_rational();
            r.push((s + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer());
            r
        })
        .collect();
    let reduced = lll_rows(rows, BigRational::new(BigInt::from(3), BigInt::from(4)));
    let tol = Dyadic::pow2(-(2 * BITS as i64) + 64);
    let mut out: Vec<Relation> = Vec::new();
    for r in reduced {
        let c: Vec<BigInt> = r[..n].to_vec();
        if c.iter().all(|x| x.is_zero()) || c.iter().any(|x| x.abs().bits() > 32) {
            continue;
        }
        let mut s = Ball::from_int(0).with_prec(2 * BITS);
        for (ci, vi) in c.iter().zip(&check) {
            s = s.add_ref(&vi.mul_ref(&Ball::from_int(ci.clone())));
        }
        if s.mag() > tol {
            continue;
        }
        let first = c.iter().find(|x| !x.is_zero()).expect("nonzero");
        let c = if first.is_negative() { c.iter().map(|x| -x).collect() } else { c };
        if !out.iter().any(|o| o.coeffs == c) {
            out.push(Relation { coeffs: c, heuristic: true });
        }
    }
    out
}

/// LLL, resultant filter and LP in one pass; the output still has to be
/// certified.
pub fn search_product(i: &RatInterval, q: &IntPoly, k_max: usize) -> Result<WeightedProduct> {
    let cands = filter_factors(&lll_candidates(i, k_max).factors, q);
    if cands.is_empty() {
        return Err(Error::Infeasible);
    }
    let (_, alphas) = optimize_weights(&cands, i, Some(q))?;
    WeightedProduct::new(cands.into_iter().zip(alphas).filter(|(_, a)| a.is_positive()).collect())
}

/// Approximate sup of `exp(F)` on a grid, for screening.
pub fn sup_estimate(product: &WeightedProduct, i: &RatInterval, samples: usize) -> f64 {
    let (lo, hi) = (rational_to_f64(&i.lo), rational_to_f64(&i.hi));
    (0..=samples)
        .map(|s| product.eval_f64(lo + (hi - lo) * s as f64 / samples as f64))
        .fold(f64::NEG_INFINITY, f64::max)
        .exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::rat;

    fn p(s: &str) -> IntPoly {
        Poly::parse(s).unwrap()
    }

    fn wp(items: &[(&str, i64, i64)]) -> WeightedProduct {
        WeightedProduct::new(items.iter().map(|(f, n, d)| (p(f), rat(*n, *d))).collect()).unwrap()
    }

    fn unit() -> RatInterval {
        RatInterval::from_ints(0, 1, 1, 1)
    }

    #[test]
    fn gram_examples() {
        assert_eq!(gram_matrix(&unit(), 1), vec![vec![rat(1, 1), rat(1, 2)], vec![rat(1, 2), rat(4, 3)]]);
        assert_eq!(gram_matrix(&unit(), 0), vec![vec![rat(2, 1)]]);
        let sym = RatInterval::from_ints(-1, 1, 1, 1);
        assert_eq!(gram_matrix(&sym, 1), vec![vec![rat(2, 1), rat(0, 1)], vec![rat(0, 1), rat(5, 3)]]);
    }

    #[test]
    fn lll_examples() {
        let c = lll_candidates(&unit(), 1);
        assert!(c.factors.contains(&p("x")) && c.factors.contains(&p("x-1")));
        let c = lll_candidates(&RatInterval::from_ints(0, 1, 1, 3), 1);
        assert!(c.factors.contains(&p("x")));
        assert!(c.factors.iter().all(|f| f.is_monic()));
    }

    #[test]
    fn filter_examples() {
        assert_eq!(filter_factors(&[p("x"), p("x-1")], &p("3x-1")), vec![p("x")]);
        assert_eq!(filter_factors(&[p("x^2+x-1")], &p("2x-1")), vec![p("x^2+x-1")]);
        assert_eq!(filter_factors(&[p("x"), p("x-1")], &p("2x-1")), vec![p("x"), p("x-1")]);
    }

    #[test]
    fn optimize_examples() {
        let (t, a) = optimize_weights(&[p("x"), p("x-1")], &unit(), Some(&p("2x-1"))).unwrap();
        assert_eq!(a, vec![rat(1, 2), rat(1, 2)]);
        assert!((t.exp() - 0.5).abs() < 1e-9);
        let third = RatInterval::from_ints(0, 1, 1, 3);
        let (t, a) = optimize_weights(&[p("x")], &third, Some(&p("3x-1"))).unwrap();
        assert_eq!(a, vec![rat(1, 1)]);
        assert!((t.exp() - 1.0 / 3.0).abs() < 1e-9);
        let (t, _) = optimize_weights(&[p("x-1")], &third, Some(&p("3x-1"))).unwrap();
        assert!(t.abs() < 1e-12);
        assert!(filter_factors(&[p("x-1")], &p("3x-1")).is_empty());
    }

    #[test]
    fn certify_unit_interval() {
        let prod = wp(&[("x", 1, 2), ("x-1", 1, 2)]);
        let c = certify_attainment(&prod, &unit(), &p("2x-1")).unwrap();
        assert_eq!(c.sup_value.to_string(), "1/2");
        assert_eq!(c.certificate.critical, CriticalCheck::Divides);
    }

    #[test]
    fn certify_failures() {
        let prod = wp(&[("x", 1, 1)]);
        assert!(matches!(certify_attainment(&prod, &unit(), &p("2x-1")), Err(Error::NotCritical)));
        let c = certify_attainment(&prod, &RatInterval::from_ints(0, 1, 1, 2), &p("2x-1")).unwrap();
        assert_eq!(c.certificate.critical, CriticalCheck::EndpointRoot);
        let prod = wp(&[("x", 1, 1)]);
        assert!(matches!(
            certify_attainment(&prod, &RatInterval::from_ints(0, 1, 1, 3), &p("3x-2")),
            Err(Error::RootsEscapeI)
        ));
        let prod = wp(&[("x", 1, 2), ("x-1", 1, 2)]);
        assert!(matches!(certify_attainment(&prod, &unit(), &p("3x-1")), Err(Error::ResultantFailed { .. })));
        let prod = wp(&[("x", 501, 1000), ("x-1", 499, 1000)]);
        assert!(certify_attainment(&prod, &unit(), &p("2x-1")).is_err());
    }

    #[test]
    fn sup_exceeds_detected() {
        // |x(x-1)|^(1/2) on [-1/2, 1] has sup 3^(1/2)/2 at -1/2, above 1/2
        let prod = wp(&[("x", 1, 2), ("x-1", 1, 2)]);
        let i = RatInterval::from_ints(-1, 2, 1, 1);
        assert!(matches!(certify_attainment(&prod, &i, &p("2x-1")), Err(Error::SupExceedsM { .. })));
    }

    #[test]
    fn relations() {
        let b = isolate_roots(&p("3x-1")).remove(0);
        let r = relation_basis(&[p("x")], &p("3x-1"), &b);
        assert!(r.iter().any(|r| r.coeffs == vec![BigInt::one(), BigInt::one()]));
        let b = isolate_roots(&p("2x-1")).remove(0);
        let r = relation_basis(&[p("x^2+x-1")], &p("2x-1"), &b);
        assert!(r.iter().any(|r| r.coeffs == vec![BigInt::from(2), BigInt::one()]));
    }

    #[test]
    fn search_pipeline_unit_interval() {
        let prod = search_product(&unit(), &p("2x-1"), 1).unwrap();
        let c = certify_attainment(&prod, &unit(), &p("2x-1")).unwrap();
        assert_eq!(c.sup_value.to_string(), "1/2");
    }

    #[test]
    fn exponent_form() {
        let prod =
            WeightedProduct::from_exponents(vec![(p("x"), BigInt::from(1)), (p("x-1"), BigInt::from(1))]).unwrap();
        assert_eq!(prod.alphas(), vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(prod.integer_exponents(), (vec![BigInt::one(), BigInt::one()], BigInt::from(2)));
        assert_eq!(prod.critical_numerator(), p("2x-1"));
    }
}
