//! Certified real-root machinery: Sturm sequences, exact root counting,
//! isolation, refinement, root spans and ball evaluation.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ball::Ball;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{format_rational, parse_rational};

type IntPoly = Poly<BigInt>;

/// Closed interval with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RatInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Result<Self> {
        if lo > hi {
            return Err(Error::precondition("interval with lo > hi"));
        }
        Ok(RatInterval { lo, hi })
    }

    pub fn from_ints(lo_n: i64, lo_d: i64, hi_n: i64, hi_d: i64) -> Self {
        Self::new(rat(lo_n, lo_d), rat(hi_n, hi_d)).expect("ordered endpoints")
    }

    pub fn point(x: BigRational) -> Self {
        RatInterval { lo: x.clone(), hi: x }
    }

    /// Parses two endpoint strings ("p/q" or exact decimals).
    pub fn parse(lo: &str, hi: &str) -> Result<Self> {
        let l = parse_rational(lo).ok_or_else(|| Error::parse(0, format!("bad rational '{lo}'")))?;
        let h = parse_rational(hi).ok_or_else(|| Error::parse(0, format!("bad rational '{hi}'")))?;
        Self::new(l, h)
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigInt::from(2)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &RatInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn translate(&self, c: &BigRational) -> Self {
        RatInterval { lo: &self.lo + c, hi: &self.hi + c }
    }

    /// Image under `x -> 1 - x`.
    pub fn reflect_half(&self) -> Self {
        let one = BigRational::one();
        RatInterval { lo: &one - &self.hi, hi: &one - &self.lo }
    }

    pub fn to_ball(&self, prec: u32) -> Ball {
        Ball::from_rational_interval(&self.lo, &self.hi, prec)
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", format_rational(&self.lo), format_rational(&self.hi))
    }
}

#[derive(Serialize, Deserialize)]
struct IntervalJson {
    lo: String,
    hi: String,
}

impl Serialize for RatInterval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        IntervalJson { lo: format_rational(&self.lo), hi: format_rational(&self.hi) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatInterval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = IntervalJson::deserialize(d)?;
        RatInterval::parse(&raw.lo, &raw.hi).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Isolating interval for one real root of a squarefree polynomial.
///
/// Either `lo == hi` is the (rational) root itself, or the polynomial has
/// exactly one root in `[lo, hi]`, it lies in the open interior, and the
/// endpoint signs are `sign_left = -sign_right`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootBox {
    pub interval: RatInterval,
    pub poly: IntPoly,
    pub sign_left: i32,
    pub sign_right: i32,
}

impl RootBox {
    pub fn is_exact(&self) -> bool {
        self.interval.lo == self.interval.hi
    }

    pub fn width(&self) -> BigRational {
        self.interval.width()
    }

    /// One bisection step with exact sign evaluation.
    pub fn bisect(&mut self) {
        if self.is_exact() {
            return;
        }
        let m = self.interval.midpoint();
        let s = self.poly.sign_at(&m);
        if s == 0 {
            self.interval = RatInterval::point(m);
            self.sign_left = 0;
            self.sign_right = 0;
        } else if s == self.sign_left {
            self.interval.lo = m;
        } else {
            self.interval.hi = m;
        }
    }

    /// Refines until the width is at most `eps`.
    pub fn refine(&self, eps: &BigRational) -> RootBox {
        let mut b = self.clone();
        while !b.is_exact() && b.width() > *eps {
            b.bisect();
        }
        b
    }

    /// Refines until the width is at most `2^-bits`.
    pub fn refine_bits(&self, bits: u32) -> RootBox {
        let eps = BigRational::new(BigInt::one(), BigInt::one() << bits as usize);
        self.refine(&eps)
    }

    pub fn to_ball(&self, prec: u32) -> Ball {
        self.interval.to_ball(prec)
    }

    /// Which side of a rational point the root lies on: -1 left, 0 equal,
    /// 1 right. Exact.
    pub fn side_of(&self, x: &BigRational) -> i32 {
        if self.is_exact() {
            return sign_cmp(&self.interval.lo, x);
        }
        if *x <= self.interval.lo {
            return 1;
        }
        if *x >= self.interval.hi {
            return -1;
        }
        let s = self.poly.sign_at(x);
        if s == 0 {
            0
        } else if s == self.sign_left {
            1
        } else {
            -1
        }
    }
}

fn sign_cmp(a: &BigRational, b: &BigRational) -> i32 {
    match a.cmp(b) {
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Greater => 1,
    }
}

/// Sturm sequence of a squarefree polynomial, built with a signed primitive
/// pseudo-remainder sequence.
#[derive(Clone, Debug)]
pub struct Sturm {
    seq: Vec<IntPoly>,
}

impl Sturm {
    pub fn new(p: &IntPoly) -> Self {
        let mut seq = vec![p.clone()];
        if p.degree() == 0 {
            return Sturm { seq };
        }
        seq.push(p.derivative(1));
        loop {
            let n = seq.len();
            let (a, b) = (&seq[n - 2], &seq[n - 1]);
            if b.degree() == 0 {
                break;
            }
            let r = a.pseudo_rem(b);
            if r.is_zero() {
                break;
            }
            // prem = lc(b)^(delta+1) rem; keep next = -(positive) * rem
            let delta = a.degree() - b.degree();
            let flip = b.lead().is_negative() && (delta + 1) % 2 == 1;
            let next = if flip { r } else { -r };
            let c = next.content();
            seq.push(next.map(|x| x / &c));
        }
        Sturm { seq }
    }

    fn variations(signs: impl Iterator<Item = i32>) -> usize {
        let mut last = 0;
        let mut v = 0;
        for s in signs {
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    pub fn variations_at(&self, x: &BigRational) -> usize {
        Self::variations(self.seq.iter().map(|p| p.sign_at(x)))
    }

    pub fn variations_at_pos_inf(&self) -> usize {
        Self::variations(self.seq.iter().map(|p| p.sign_at_pos_inf()))
    }

    pub fn variations_at_neg_inf(&self) -> usize {
        Self::variations(self.seq.iter().map(|p| p.sign_at_neg_inf()))
    }

    /// Distinct roots in `(a, b]`.
    pub fn count_half_open(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }

    /// Distinct roots in `[a, b]`.
    pub fn count_closed(&self, a: &BigRational, b: &BigRational) -> usize {
        let root_at_a = usize::from(self.seq[0].sign_at(a) == 0);
        self.count_half_open(a, b) + root_at_a
    }

    /// All distinct real roots.
    pub fn count_all(&self) -> usize {
        self.variations_at_neg_inf().saturating_sub(self.variations_at_pos_inf())
    }
}

/// Distinct real roots of `p` in the closed interval `I`.
pub fn count_roots_in(p: &IntPoly, i: &RatInterval) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.degree() == 0 {
        return Ok(0);
    }
    let s = Sturm::new(&p.squarefree_part());
    Ok(s.count_closed(&i.lo, &i.hi))
}

/// Real roots of `p` in the closed interval `I`, counted with multiplicity.
pub fn count_roots_with_multiplicity(p: &IntPoly, i: &RatInterval) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(p.squarefree_decomposition().iter().map(|(s, m)| Sturm::new(s).count_closed(&i.lo, &i.hi) * m).sum())
}

/// Number of real roots of `p`, counted with multiplicity.
pub fn count_real_roots(p: &IntPoly) -> usize {
    p.squarefree_decomposition().iter().map(|(s, m)| Sturm::new(s).count_all() * m).sum()
}

/// True when every complex root of `p` is real.
pub fn is_real_rooted(p: &IntPoly) -> bool {
    p.degree() >= 1 && count_real_roots(p) == p.degree()
}

/// True when every root of `p` is real and lies in the closed interval `I`.
pub fn all_roots_in(p: &IntPoly, i: &RatInterval) -> bool {
    p.degree() >= 1 && count_roots_with_multiplicity(p, i).map(|c| c == p.degree()).unwrap_or(false)
}

/// Power of two strictly above the Cauchy root bound.
pub fn root_bound(p: &IntPoly) -> BigRational {
    let lead = p.lead().abs();
    let max = p.coeffs()[..p.degree()].iter().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero);
    let bound = BigRational::one() + BigRational::new(max, lead);
    let mut b = BigRational::one();
    while b <= bound {
        b *= BigInt::from(2);
    }
    b
}

/// Interior split point of `(a, b)` that is not a root of `p`.
fn split_point(p: &IntPoly, a: &BigRational, b: &BigRational) -> BigRational {
    let w = b - a;
    for den in 2i64.. {
        for num in 1..den {
            let t = a + &w * rat(num, den);
            if p.sign_at(&t) != 0 {
                return t;
            }
        }
    }
    unreachable!()
}

/// Isolating boxes for all distinct real roots of `p`, in increasing order.
pub fn isolate_roots(p: &IntPoly) -> Vec<RootBox> {
    if p.degree() == 0 {
        return Vec::new();
    }
    let sf = p.squarefree_part();
    let sturm = Sturm::new(&sf);
    let b = root_bound(&sf);
    isolate_with(&sf, &sturm, -b.clone(), b)
}

fn isolate_with(sf: &IntPoly, sturm: &Sturm, lo: BigRational, hi: BigRational) -> Vec<RootBox> {
    // neither endpoint is a root; boxes are (a, b] with count from Sturm
    let mut out = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone(), sturm.count_half_open(&lo, &hi))];
    while let Some((a, b, n)) = stack.pop() {
        match n {
            0 => {}
            1 => {
                let sl = sf.sign_at(&a);
                let sr = sf.sign_at(&b);
                out.push(RootBox {
                    interval: RatInterval { lo: a, hi: b },
                    poly: sf.clone(),
                    sign_left: sl,
                    sign_right: sr,
                });
            }
            _ => {
                let m = split_point(sf, &a, &b);
                let nl = sturm.count_half_open(&a, &m);
                stack.push((m.clone(), b, n - nl));
                stack.push((a, m, nl));
            }
        }
    }
    out.sort_by(|x, y| x.interval.lo.cmp(&y.interval.lo));
    out
}

/// Isolating boxes for the distinct roots of `p` lying in the closed
/// interval `I`, with every box contained in `I`.
pub fn isolate_roots_in(p: &IntPoly, i: &RatInterval) -> Vec<RootBox> {
    let mut out = Vec::new();
    for mut bx in isolate_roots(p) {
        if bx.interval.hi < i.lo || bx.interval.lo > i.hi {
            continue;
        }
        for e in [&i.lo, &i.hi] {
            if bx.is_exact() || !(bx.interval.lo < *e && *e < bx.interval.hi) {
                continue;
            }
            let s = bx.poly.sign_at(e);
            if s == 0 {
                bx = RootBox {
                    interval: RatInterval::point(e.clone()),
                    poly: bx.poly.clone(),
                    sign_left: 0,
                    sign_right: 0,
                };
            } else if s == bx.sign_left {
                bx.interval.lo = e.clone();
            } else {
                bx.interval.hi = e.clone();
            }
        }
        if i.contains_interval(&bx.interval) {
            out.push(bx);
        }
    }
    out
}

/// Refines a root box to width at most `eps`.
pub fn refine(b: &RootBox, eps: &BigRational) -> RootBox {
    b.refine(eps)
}

/// Outward enclosure of `max root - min root`, for polynomials with only real
/// roots, refined until the enclosure width is below `2^-bits`.
pub fn root_span(p: &IntPoly, bits: u32) -> Result<Ball> {
    if !is_real_rooted(p) {
        return Err(Error::ComplexRoots);
    }
    let boxes = isolate_roots(p);
    let lo = boxes.first().expect("at least one root").refine_bits(bits + 1);
    let hi = boxes.last().expect("at least one root").refine_bits(bits + 1);
    let a = &hi.interval.lo - &lo.interval.hi;
    let b = &hi.interval.hi - &lo.interval.lo;
    Ok(Ball::from_rational_interval(&a, &b, bits + 16))
}

/// Exact rational enclosure `[min root, max root]` with boxes refined to
/// width `2^-bits`; the returned interval is outward-rounded.
pub fn root_range(p: &IntPoly, bits: u32) -> Result<RatInterval> {
    if !is_real_rooted(p) {
        return Err(Error::ComplexRoots);
    }
    let boxes = isolate_roots(p);
    let lo = boxes.first().expect("root").refine_bits(bits);
    let hi = boxes.last().expect("root").refine_bits(bits);
    RatInterval::new(lo.interval.lo, hi.interval.hi)
}

/// Ball enclosure of `p` over the ball `x` (Horner with outward rounding).
pub fn eval_ball(p: &IntPoly, x: &Ball) -> Ball {
    p.eval_in::<Ball>(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPoly {
        Poly::parse(s).unwrap()
    }

    fn f(x: f64) -> BigRational {
        BigRational::from_float(x).unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(count_roots_in(&p("3x^2-1"), &RatInterval::from_ints(-1, 1, 1, 1)).unwrap(), 2);
        assert_eq!(count_roots_in(&p("7x^3-7x^2+1"), &RatInterval::from_ints(-67, 200, 3, 4)).unwrap(), 3);
        assert_eq!(count_roots_in(&p("x^2+1"), &RatInterval::from_ints(-10, 1, 10, 1)).unwrap(), 0);
        assert!(matches!(
            count_roots_in(&Poly::zero(), &RatInterval::from_ints(0, 1, 1, 1)),
            Err(Error::ZeroPolynomial)
        ));
        // closed endpoints count
        assert_eq!(count_roots_in(&p("x^2-x"), &RatInterval::from_ints(0, 1, 1, 1)).unwrap(), 2);
        assert_eq!(count_roots_with_multiplicity(&p("x^3-x^2"), &RatInterval::from_ints(0, 1, 1, 1)).unwrap(), 3);
    }

    #[test]
    fn isolation() {
        let b = isolate_roots(&p("x^2-x"));
        assert_eq!(b.len(), 2);
        assert!(b[0].interval.contains(&rat(0, 1)) && b[1].interval.contains(&rat(1, 1)));
        let b = isolate_roots(&p("2x^2-1"));
        assert_eq!(b.len(), 2);
        let r = b[1].refine(&rat(1, 1_000_000));
        assert!((crate::scalar::rational_to_f64(&r.interval.lo) - 0.5f64.sqrt()).abs() < 1e-6);
        let b = isolate_roots(&p("7x^3+7x^2-1"));
        assert_eq!(b.len(), 3);
        let lo = b[0].refine(&rat(1, 10000));
        let hi = b[2].refine(&rat(1, 10000));
        assert!(
            lo.interval.contains(&f(-0.7369)) || (crate::scalar::rational_to_f64(&lo.interval.lo) + 0.737).abs() < 1e-3
        );
        assert!((crate::scalar::rational_to_f64(&hi.interval.hi) - 0.328).abs() < 1e-3);
    }

    #[test]
    fn refinement() {
        let b = &isolate_roots(&p("2x-1"))[0];
        let eps = BigRational::new(BigInt::one(), BigInt::from(10).pow(20));
        let r = b.refine(&eps);
        assert!(r.interval.contains(&rat(1, 2)));
        assert!(r.width() <= eps);
        let b = isolate_roots(&p("7x^3-7x^2+1"));
        let r = b[2].refine(&rat(1, 1_000_000_000));
        assert!(r.width() <= rat(1, 1_000_000_000));
        assert!(r.interval.contains(&f(0.736976229099578)));
        let b = isolate_roots(&p("3x^2-1"));
        let r = b[0].refine(&rat(1, 1_000_000_000));
        assert!(r.interval.contains(&f(-0.5773502691896257)));
    }

    #[test]
    fn spans() {
        let s = root_span(&p("2x^2-1"), 40).unwrap();
        assert!((s.to_f64() - 2f64.sqrt()).abs() < 1e-10);
        let s = root_span(&p("3x^2-1"), 40).unwrap();
        assert!((s.to_f64() - 1.154700538).abs() < 1e-9);
        let s = root_span(&p("x^2-x"), 40).unwrap();
        assert!(s.contains_rational(&rat(1, 1)));
        assert!(matches!(root_span(&p("x^3-2"), 10), Err(Error::ComplexRoots)));
    }

    #[test]
    fn ball_evaluation() {
        let two = Ball::from_int(2);
        let v = eval_ball(&p("x^2"), &two);
        assert!(v.is_exact() && v.contains_rational(&rat(4, 1)));
        let v = eval_ball(&p("2x-1"), &Ball::from_rational(&rat(1, 2), 64));
        assert!(v.is_exact() && v.contains_rational(&rat(0, 1)));
        // x = (1+sqrt 2)/2 as a tight ball from its root box
        let bx = isolate_roots(&p("4x^2-4x-1"))[1].refine_bits(200);
        let v = eval_ball(&p("x^2-x"), &bx.to_ball(256));
        assert!(v.contains_rational(&rat(1, 4)));
        assert!(v.rad().to_f64() < 1e-50);
    }

    #[test]
    fn roots_in_interval_trim_boxes() {
        let i = RatInterval::from_ints(0, 1, 1, 2);
        let b = isolate_roots_in(&p("2x^2-1"), &i);
        assert!(b.is_empty());
        let i = RatInterval::from_ints(0, 1, 3, 4);
        let b = isolate_roots_in(&p("2x^2-1"), &i);
        assert_eq!(b.len(), 1);
        assert!(i.contains_interval(&b[0].interval));
        let b = isolate_roots_in(&p("x^2-x"), &RatInterval::from_ints(0, 1, 1, 1));
        assert_eq!(b.len(), 2);
    }
}
