//! Farey intervals, Pell families, the `P_n` family for `[0, 1/n + delta]`
//! and the lower bound for the exponent `gamma(b)` of `x`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::ball::Ball;
use crate::bounds::{sign_of, x_ln_x};
use crate::error::{Error, Result};
use crate::obstruction::ObstructionValue;
use crate::poly::Poly;
use crate::roots::{isolate_roots, RatInterval, RootBox, Sturm};

type IntPoly = Poly<BigInt>;

/// `[b1/c1, b2/c2]` with `b2 c1 - b1 c2 = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FareyInterval {
    #[serde(with = "crate::io::bigint_string")]
    pub b1: BigInt,
    #[serde(with = "crate::io::bigint_string")]
    pub c1: BigInt,
    #[serde(with = "crate::io::bigint_string")]
    pub b2: BigInt,
    #[serde(with = "crate::io::bigint_string")]
    pub c2: BigInt,
}

impl FareyInterval {
    pub fn new(
        b1: impl Into<BigInt>,
        c1: impl Into<BigInt>,
        b2: impl Into<BigInt>,
        c2: impl Into<BigInt>,
    ) -> Result<Self> {
        let f = FareyInterval { b1: b1.into(), c1: c1.into(), b2: b2.into(), c2: c2.into() };
        if f.c1 < BigInt::one() || f.c2 < BigInt::one() {
            return Err(Error::precondition("Farey denominators must be positive"));
        }
        if &f.b2 * &f.c1 - &f.b1 * &f.c2 != BigInt::one() {
            return Err(Error::precondition("Farey endpoints must have determinant 1"));
        }
        Ok(f)
    }

    pub fn left(&self) -> BigRational {
        BigRational::new(self.b1.clone(), self.c1.clone())
    }

    pub fn right(&self) -> BigRational {
        BigRational::new(self.b2.clone(), self.c2.clone())
    }

    pub fn mediant(&self) -> BigRational {
        BigRational::new(&self.b1 + &self.b2, &self.c1 + &self.c2)
    }

    pub fn interval(&self) -> RatInterval {
        RatInterval { lo: self.left(), hi: self.right() }
    }
}

impl fmt::Display for FareyInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}/{}, {}/{}]", self.b1, self.c1, self.b2, self.c2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FareyCase {
    LeftEndpoint,
    RightEndpoint,
    FullFarey,
    Mediant,
}

/// Maximal obstruction of an interval and its linear critical polynomial.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObstructionVerdict {
    pub value: ObstructionValue,
    pub polynomial: IntPoly,
    pub case_tag: FareyCase,
    pub farey: FareyInterval,
}

fn interior_has_integer(i: &RatInterval) -> bool {
    // smallest integer strictly above lo
    let k = i.lo.floor() + BigRational::one();
    k < i.hi
}

/// Consecutive fractions of the Farey sequence of order `q - 1` bracketing
/// `I`, where `q` is the least denominator of a fraction inside `I`.
pub fn minimal_farey_interval(i: &RatInterval) -> Result<FareyInterval> {
    if i.lo >= i.hi {
        return Err(Error::precondition("interval must have positive length"));
    }
    if interior_has_integer(i) {
        return Err(Error::ContainsInteger);
    }
    let k = i.lo.floor().to_integer();
    let (mut b1, mut c1, mut b2, mut c2) = (k.clone(), BigInt::one(), k + 1, BigInt::one());
    // Stern-Brocot descent towards the simplest fraction in the interior
    loop {
        let m = BigRational::new(&b1 + &b2, &c1 + &c2);
        if m <= i.lo {
            b1 += &b2;
            c1 += &c2;
        } else if m >= i.hi {
            b2 += &b1;
            c2 += &c1;
        } else {
            return FareyInterval::new(b1, c1, b2, c2);
        }
    }
}

fn linear(c: &BigInt, b: &BigInt) -> IntPoly {
    Poly::new(vec![-b.clone(), c.clone()])
}

/// Maximal obstruction from the minimal Farey interval. Bracket endpoints
/// count only when they lie in `I` (closed) and have denominator at least 2.
pub fn farey_max_obstruction(i: &RatInterval) -> Result<ObstructionVerdict> {
    let f = minimal_farey_interval(i)?;
    let two = BigInt::from(2);
    let in1 = f.c1 >= two && i.contains(&f.left());
    let in2 = f.c2 >= two && i.contains(&f.right());
    let (c, b, case_tag) = match (in1, in2) {
        (true, false) => (f.c1.clone(), f.b1.clone(), FareyCase::LeftEndpoint),
        (false, true) => (f.c2.clone(), f.b2.clone(), FareyCase::RightEndpoint),
        (true, true) if f.c1 <= f.c2 => (f.c1.clone(), f.b1.clone(), FareyCase::FullFarey),
        (true, true) => (f.c2.clone(), f.b2.clone(), FareyCase::FullFarey),
        (false, false) => (&f.c1 + &f.c2, &f.b1 + &f.b2, FareyCase::Mediant),
    };
    Ok(ObstructionVerdict {
        value: ObstructionValue::new(c.clone(), 1)?,
        polynomial: linear(&c, &b),
        case_tag,
        farey: f,
    })
}

/// Largest `1/c` over fractions `b/c` in `I` with `2 <= c <= max_c`, by
/// enumeration.
pub fn brute_force_linear_obstruction(i: &RatInterval, max_c: u64) -> Option<(BigInt, BigInt)> {
    for c in 2..=max_c {
        let c = BigInt::from(c);
        let lo = (&i.lo * BigRational::from_integer(c.clone())).ceil().to_integer();
        let hi = (&i.hi * BigRational::from_integer(c.clone())).floor().to_integer();
        let mut b = lo;
        while b <= hi {
            if b.gcd(&c).is_one() {
                return Some((c, b));
            }
            b += 1;
        }
    }
    None
}

/// Outcome of the Farey-interval hypothesis check.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum FareyCheck {
    /// `t_M = 1/c1`, witnessed by a monic quadratic with its maximum at the
    /// left endpoint.
    Proved {
        value: ObstructionValue,
        witness: IntPoly,
        #[serde(with = "crate::io::bigint_string")]
        b: BigInt,
    },
    Inconclusive,
}

/// Smallest `|B|` with `B = n (mod m)`, ties to positive.
fn least_residue(n: &BigInt, m: &BigInt) -> BigInt {
    let r = n.mod_floor(m);
    let s = &r - m;
    if s.abs() < r {
        s
    } else {
        r
    }
}

/// Checks `b1^2 = +-1 (mod c1)` and `b2^2 = B (mod c2)` with
/// `c1^2 |B| < c2^2`, and builds the witness quadratic.
pub fn farey_conjecture_check(f: &FareyInterval) -> Result<FareyCheck> {
    if f.c1 < BigInt::from(2) {
        return Err(Error::precondition("c1 must be at least 2"));
    }
    let r1 = (&f.b1 * &f.b1).mod_floor(&f.c1);
    let eps = if r1.is_one() {
        BigInt::one()
    } else if r1 == &f.c1 - 1 {
        -BigInt::one()
    } else {
        return Ok(FareyCheck::Inconclusive);
    };
    let b = least_residue(&(&f.b2 * &f.b2), &f.c2);
    if &f.c1 * &f.c1 * b.abs() >= &f.c2 * &f.c2 {
        return Ok(FareyCheck::Inconclusive);
    }
    // x^2 + p x + q with c1^2 P(b1/c1) = eps and c2^2 P(b2/c2) = B
    let u = (&eps - &f.b1 * &f.b1) / &f.c1;
    let v = (&b - &f.b2 * &f.b2) / &f.c2;
    let p = &v * &f.c1 - &u * &f.c2;
    let q = &f.b2 * &u - &f.b1 * &v;
    let witness = Poly::new(vec![q, p, BigInt::one()]);
    let at = |x: &BigRational| witness.eval_rational(x);
    let c1sq = BigRational::from_integer(&f.c1 * &f.c1);
    let c2sq = BigRational::from_integer(&f.c2 * &f.c2);
    assert_eq!(at(&f.left()) * &c1sq, BigRational::from_integer(eps), "witness at b1/c1");
    assert_eq!(at(&f.right()) * &c2sq, BigRational::from_integer(b.clone()), "witness at b2/c2");
    // the vertex lies outside the open interval, so |P| peaks at an endpoint
    let vertex = BigRational::new(-witness.coeff(1), BigInt::from(2));
    if f.left() < vertex && vertex < f.right() {
        return Ok(FareyCheck::Inconclusive);
    }
    Ok(FareyCheck::Proved { value: ObstructionValue::new(f.c1.clone(), 1)?, witness, b })
}

/// All Farey intervals `[b1/c1, b2/c2]` inside `[0, 1]` with both
/// denominators in `2..=max_c`.
pub fn farey_intervals(max_c: u64) -> Vec<FareyInterval> {
    let mut out = Vec::new();
    for c1 in 2..=max_c {
        for b1 in 1..c1 {
            if b1.gcd(&c1) != 1 {
                continue;
            }
            for c2 in 2..=max_c {
                // b2 c1 - b1 c2 = 1
                let num = 1 + b1 as i64 * c2 as i64;
                if num % c1 as i64 == 0 {
                    let b2 = num / c1 as i64;
                    if b2 < c2 as i64 {
                        out.push(FareyInterval::new(b1, c1, b2, c2).expect("determinant 1"));
                    }
                }
            }
        }
    }
    out
}

/// Integer solutions of `b^2 + a1 b c + a0 c^2 = +-1` with `1 <= c <= limit`.
pub fn pell_solutions(p: &IntPoly, limit: u64) -> Result<Vec<(BigInt, BigInt)>> {
    check_pell_quadratic(p)?;
    let (a0, a1) = (p.coeff(0), p.coeff(1));
    // roots lie in |x| <= 1 + |a0| + |a1|
    let bound = BigInt::one() + a0.abs() + a1.abs();
    let mut out = Vec::new();
    for c in 1..=limit {
        let c = BigInt::from(c);
        let reach: BigInt = &bound * &c + 1;
        let mut b = -reach.clone();
        while b <= reach {
            let n = &b * &b + &a1 * &b * &c + &a0 * &c * &c;
            if n.abs().is_one() {
                out.push((b.clone(), c.clone()));
            }
            b += 1;
        }
    }
    Ok(out)
}

fn check_pell_quadratic(p: &IntPoly) -> Result<()> {
    if p.degree() != 2 || !p.lead().is_one() {
        return Err(Error::precondition("expected a monic quadratic"));
    }
    let disc = p.coeff(1) * p.coeff(1) - BigInt::from(4) * p.coeff(0);
    if !disc.is_positive() || disc.sqrt().pow(2) == disc {
        return Err(Error::ReducibleOrComplex);
    }
    Ok(())
}

/// A Farey interval on which the quadratic attains the maximal obstruction
/// `1/c1` at its left endpoint.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PellInterval {
    pub farey: FareyInterval,
    pub value: ObstructionValue,
}

/// Pell-equation solutions approaching each root from below, turned into
/// Farey intervals on which `P` attains `1/c_i`.
pub fn pell_family(p: &IntPoly, limit: u64) -> Result<Vec<PellInterval>> {
    let sols = pell_solutions(p, limit)?;
    let roots = isolate_roots(p);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let vertex = BigRational::new(-p.coeff(1), BigInt::from(2));
    let mut out = Vec::new();
    for root in &roots {
        let below = |x: &BigRational| root.side_of(x) > 0;
        let mut chain: Vec<(BigInt, BigInt)> = Vec::new();
        for (b, c) in &sols {
            let x = BigRational::new(b.clone(), c.clone());
            if !below(&x) {
                continue;
            }
            match chain.last() {
                Some((pb, pc)) if !(c > pc && x > BigRational::new(pb.clone(), pc.clone())) => {}
                _ => chain.push((b.clone(), c.clone())),
            }
        }
        for w in chain.windows(2) {
            let (lo, hi) =
                (BigRational::new(w[0].0.clone(), w[0].1.clone()), BigRational::new(w[1].0.clone(), w[1].1.clone()));
            // no half-integer (in particular the vertex) strictly inside
            let first_half = (&lo - &half).floor() + BigRational::one() + &half;
            if first_half < hi || (lo < vertex && vertex < hi) {
                continue;
            }
            let (b1, c1) = (&w[0].0, &w[0].1);
            // right Farey neighbour of b1/c1 that stays below the next term
            let (mut b, mut c) = farey_right_neighbour(b1, c1);
            while BigRational::new(b.clone(), c.clone()) > hi {
                b += b1;
                c += c1;
            }
            let f = FareyInterval::new(b1.clone(), c1.clone(), b, c)?;
            if f.c1 < BigInt::from(2) {
                continue;
            }
            let at_left = p.eval_rational(&f.left()).abs() * BigRational::from_integer(c1 * c1);
            let at_right = p.eval_rational(&f.right()).abs() * BigRational::from_integer(c1 * c1);
            if at_left.is_one() && at_right <= BigRational::one() {
                out.push(PellInterval { value: ObstructionValue::new(c1.clone(), 1)?, farey: f });
            }
        }
    }
    Ok(out)
}

/// `(b, c)` with `b c1 - c b1 = 1` and `1 <= c <= c1`.
fn farey_right_neighbour(b1: &BigInt, c1: &BigInt) -> (BigInt, BigInt) {
    // c = -b1^{-1} mod c1
    let e = b1.extended_gcd(c1);
    let mut c = (-e.x).mod_floor(c1);
    if c.is_zero() {
        c = c1.clone();
    }
    let b = (BigInt::one() + &c * b1) / c1;
    (b, c)
}

/// `x^(n^2 - 2) (x^2 - n x + 1)`.
pub fn p_n(n: u64) -> IntPoly {
    let q = Poly::new(vec![BigInt::one(), -BigInt::from(n), BigInt::one()]);
    &Poly::monomial(BigInt::one(), (n * n - 2) as usize) * &q
}

/// Certified `beta_n` and `alpha_n` for `P_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaN {
    pub n: u64,
    /// Smaller root of `x^2 - n x + 1`.
    pub beta: Ball,
    /// Least root above `beta_n` of `|P_n(x)| = n^(-n^2)`.
    pub alpha: Ball,
    /// Sturm-certified shape: increasing on `[0, 1/n]`, decreasing on
    /// `[1/n, beta_n]`.
    pub shape_certified: bool,
}

impl DeltaN {
    /// Lower bound `alpha_n - 1/n` for `delta_n`.
    pub fn delta_lower(&self) -> BigRational {
        self.alpha.lower_rational() - BigRational::new(BigInt::one(), BigInt::from(self.n))
    }
}

const DELTA_BITS: u32 = 64;

pub fn delta_n(n: u64) -> Result<DeltaN> {
    if n < 2 {
        return Err(Error::precondition("n must be at least 2"));
    }
    let q = Poly::new(vec![BigInt::one(), -BigInt::from(n), BigInt::one()]);
    let beta_box = isolate_roots(&q).into_iter().next().expect("real roots").refine_bits(DELTA_BITS);
    let p = p_n(n);
    let scale = BigInt::from(n).pow((n * n) as u32);
    let mut best: Option<RootBox> = None;
    for s in [1i64, -1] {
        // n^(n^2) P_n(x) - s
        let r = &p.scale(&scale) - &Poly::constant(BigInt::from(s));
        for b in isolate_roots(&r) {
            let mut b = b.refine_bits(DELTA_BITS);
            // separate from beta_n
            let mut bb = beta_box.clone();
            while !(b.interval.lo > bb.interval.hi || b.interval.hi < bb.interval.lo) {
                b.bisect();
                bb.bisect();
            }
            if b.interval.lo > bb.interval.hi && best.as_ref().is_none_or(|cur| b.interval.hi < cur.interval.lo) {
                best = Some(b);
            }
        }
    }
    let alpha = best.ok_or(Error::NoRoot)?;
    let shape_certified = p_n_shape(n, &beta_box);
    Ok(DeltaN { n, beta: beta_box.to_ball(DELTA_BITS + 16), alpha: alpha.to_ball(DELTA_BITS + 16), shape_certified })
}

/// `P_n'` has no root in `(0, 1/n)` or `(1/n, beta_n)`, is positive just
/// right of 0 and negative just right of `1/n`.
fn p_n_shape(n: u64, beta: &RootBox) -> bool {
    let d = p_n(n).derivative(1);
    let inv = BigRational::new(BigInt::one(), BigInt::from(n));
    let zero = BigRational::zero();
    let sturm = Sturm::new(&d.squarefree_part());
    // (0, 1/n] holds only the root 1/n
    let left = sturm.count_half_open(&zero, &inv);
    let b = &beta.interval.lo;
    let right = sturm.count_half_open(&inv, b) - usize::from(d.sign_at(b) == 0);
    let mid_left = &inv / BigRational::from_integer(BigInt::from(2));
    let mid_right = (&inv + &beta.interval.lo) / BigRational::from_integer(BigInt::from(2));
    left == 1 && right == 0 && d.sign_at(&mid_left) > 0 && d.sign_at(&mid_right) < 0
}

/// `ln[(1+x)^(1+x) / ((1-x)^(1-x) (2x)^(2x) b^x)] + ln m`.
fn gamma_equation(x: &BigRational, b: &BigRational, m: &BigRational, prec: u32) -> Ball {
    let one = BigRational::one();
    let two = BigRational::from_integer(BigInt::from(2));
    x_ln_x(&(&one + x), prec)
        .sub_ref(&x_ln_x(&(&one - x), prec))
        .sub_ref(&x_ln_x(&(&two * x), prec))
        .sub_ref(&Ball::ln_rational(b, prec).mul_ref(&Ball::from_rational(x, prec)))
        .add_ref(&Ball::ln_rational(m, prec))
}

/// Enclosure of the least positive root of
/// `(1+x)^(1+x) / ((1-x)^(1-x) (2x)^(2x) b^x) = 1/m`, a lower bound for
/// `gamma(b)` when `m >= t_M([0, b])`.
pub fn gamma_lower(b: &BigRational, m: &BigRational) -> Result<Ball> {
    let one = BigRational::one();
    if !b.is_positive() || *b > one || !m.is_positive() || *m >= one {
        return Err(Error::precondition("need 0 < b <= 1 and 0 < m < 1"));
    }
    // increasing on (0, 1/sqrt(1 + 4b)) from ln m < 0
    let s = &one / (&one + BigRational::from_integer(BigInt::from(4)) * b);
    let bits = 64u32;
    let scale = BigInt::one() << (2 * bits);
    let top =
        BigRational::new((s * BigRational::from_integer(scale)).floor().to_integer().sqrt(), BigInt::one() << bits);
    let sign = |x: &BigRational| sign_of(|p| gamma_equation(x, b, m, p));
    if sign(&top)? < 0 {
        return Err(Error::NoRoot);
    }
    let mut lo = BigRational::new(BigInt::one(), BigInt::from(1024));
    while sign(&lo)? > 0 {
        lo /= BigRational::from_integer(BigInt::from(2));
    }
    let mut hi = top;
    let width = BigRational::new(BigInt::one(), BigInt::one() << 40);
    let two = BigRational::from_integer(BigInt::from(2));
    while &hi - &lo > width {
        let mid = (&lo + &hi) / &two;
        if sign(&mid)? < 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Ball::from_rational_interval(&lo, &hi, 64))
}

/// `x > 1 - sqrt(b)`, exactly.
pub fn exceeds_one_minus_sqrt(x: &BigRational, b: &BigRational) -> bool {
    let d = BigRational::one() - x;
    d.is_negative() || &d * &d < *b
}
