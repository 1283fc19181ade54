//! Dyadic ball arithmetic with outward rounding.
//!
//! A [`Ball`] is a midpoint `mid` and radius `rad`, both [`Dyadic`] numbers,
//! together with a working precision in bits. Every operation returns a ball
//! that contains the exact result for all inputs inside the operand balls.
//! Precision `0` marks an exact ball (integers, dyadic rationals); exact balls
//! stay exact under ring operations until combined with a rounded ball.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Mutex;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Mantissa bits kept in radii (rounded up).
const RAD_BITS: u64 = 64;

/// First rung of the precision ladder.
pub const START_PRECISION: u32 = 64;
/// Default precision cap of the ladder.
pub const DEFAULT_PRECISION_CAP: u32 = 4096;

/// The exact number `man * 2^exp`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

impl Dyadic {
    pub fn new(man: BigInt, exp: i64) -> Self {
        if man.is_zero() {
            return Dyadic { man, exp: 0 };
        }
        let tz = man.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            Dyadic { man: man >> tz as usize, exp: exp + tz as i64 }
        } else {
            Dyadic { man, exp }
        }
    }

    pub fn zero() -> Self {
        Dyadic { man: BigInt::zero(), exp: 0 }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n.into(), 0)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        Dyadic { man: BigInt::one(), exp: e }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.man.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic { man: self.man.abs(), exp: self.exp }
    }

    /// Smallest `k` with `|self| < 2^k`; `i64::MIN` for zero.
    pub fn magnitude_bits(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.man.bits() as i64 + self.exp
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        Dyadic { man: self.man.clone(), exp: self.exp + k }
    }

    fn aligned(a: &Self, b: &Self) -> (BigInt, BigInt, i64) {
        let e = a.exp.min(b.exp);
        let am = &a.man << (a.exp - e) as usize;
        let bm = &b.man << (b.exp - e) as usize;
        (am, bm, e)
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b, e) = Self::aligned(self, other);
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Dyadic { man: -&self.man, exp: self.exp }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Dyadic::new(&self.man * &other.man, self.exp + other.exp)
    }

    /// Rounds to at most `prec` significant bits in the given direction.
    pub fn round(&self, prec: u32, dir: Round) -> Self {
        let bits = self.man.bits();
        if prec == 0 || bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        // BigInt >> rounds toward negative infinity
        let mut man = &self.man >> shift as usize;
        if dir == Round::Up && (&man << shift as usize) != self.man {
            man += 1;
        }
        Dyadic::new(man, self.exp + shift as i64)
    }

    /// Rational rounded to `prec` significant bits in the given direction.
    pub fn from_rational(q: &BigRational, prec: u32, dir: Round) -> Self {
        if q.is_zero() {
            return Dyadic::zero();
        }
        let n = q.numer();
        let d = q.denom();
        if d.is_one() || (d & (d - BigInt::one())).is_zero() {
            let exact = Dyadic::new(n.clone(), -(d.bits() as i64 - 1));
            return exact.round(prec, dir);
        }
        let k = prec as i64 + 2 - (n.bits() as i64 - d.bits() as i64);
        let scaled_num = if k >= 0 { n << k as usize } else { n.clone() };
        let scaled_den = if k >= 0 { d.clone() } else { d << (-k) as usize };
        let (fl, _) = scaled_num.div_mod_floor(&scaled_den);
        let man = match dir {
            Round::Down => fl,
            Round::Up => fl + 1,
        };
        Dyadic::new(man, -k).round(prec, dir)
    }

    /// `a / b` rounded to `prec` bits in the given direction.
    pub fn div(a: &Self, b: &Self, prec: u32, dir: Round) -> Self {
        assert!(!b.is_zero(), "dyadic division by zero");
        let q = BigRational::new(a.man.clone(), b.man.clone());
        Dyadic::from_rational(&q, prec.max(1), dir).mul_pow2(a.exp - b.exp)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.man << self.exp as usize)
        } else {
            BigRational::new(self.man.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits();
        let (m, e) = if bits > 60 {
            let s = bits - 60;
            (&self.man >> s as usize, self.exp + s as i64)
        } else {
            (self.man.clone(), self.exp)
        };
        let mf = m.to_f64().unwrap_or(f64::NAN);
        if e > 2000 {
            return mf.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        mf * 2f64.powi(e as i32)
    }

    pub fn from_f64(x: f64) -> Option<Self> {
        let q = BigRational::from_float(x)?;
        Some(Dyadic::from_rational(&q, 0, Round::Down))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let (ma, mb) = (self.magnitude_bits(), other.magnitude_bits());
        if ma != mb {
            let by_mag = ma.cmp(&mb);
            return if sa > 0 { by_mag } else { by_mag.reverse() };
        }
        let (a, b, _) = Self::aligned(self, other);
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

/// Closed ball `[mid - rad, mid + rad]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    mid: Dyadic,
    rad: Dyadic,
    prec: u32,
}

fn join_prec(a: u32, b: u32) -> u32 {
    match (a, b) {
        (0, p) | (p, 0) => p,
        (p, q) => p.max(q),
    }
}

/// Sum of two non-negative dyadics, rounded up; cheap when the exponents are
/// far apart.
fn add_up(a: &Dyadic, b: &Dyadic) -> Dyadic {
    if a.is_zero() {
        return b.round(RAD_BITS as u32, Round::Up);
    }
    if b.is_zero() {
        return a.round(RAD_BITS as u32, Round::Up);
    }
    let (big, small) = if a.magnitude_bits() >= b.magnitude_bits() { (a, b) } else { (b, a) };
    let big = big.round(RAD_BITS as u32, Round::Up);
    if small.magnitude_bits() < big.exp - 2 {
        // small < 2^(big.exp): bump one unit in the last place
        return Dyadic::new(&big.man + 1, big.exp);
    }
    big.add(small).round(RAD_BITS as u32, Round::Up)
}

fn mul_up(a: &Dyadic, b: &Dyadic) -> Dyadic {
    a.mul(b).round(RAD_BITS as u32, Round::Up)
}

impl Ball {
    pub fn new(mid: Dyadic, rad: Dyadic, prec: u32) -> Self {
        assert!(rad.signum() >= 0, "negative radius");
        let mut b = Ball { mid, rad: rad.round(RAD_BITS as u32, Round::Up), prec };
        b.normalize();
        b
    }

    pub fn exact(d: Dyadic) -> Self {
        Ball { mid: d, rad: Dyadic::zero(), prec: 0 }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Ball::exact(Dyadic::from_int(n))
    }

    /// Tightest ball at `prec` bits containing the rational `q`.
    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        let lo = Dyadic::from_rational(q, prec, Round::Down);
        if lo.to_rational() == *q {
            return Ball { mid: lo, rad: Dyadic::zero(), prec };
        }
        let hi = Dyadic::from_rational(q, prec, Round::Up);
        Ball::from_endpoints(&lo, &hi, prec)
    }

    /// Ball containing `[lo, hi]`.
    pub fn from_endpoints(lo: &Dyadic, hi: &Dyadic, prec: u32) -> Self {
        assert!(lo <= hi, "inverted endpoints");
        let sum = lo.add(hi);
        let mid = sum.mul_pow2(-1);
        let mid_r = if prec > 0 { mid.round(prec, Round::Down) } else { mid };
        let r1 = hi.sub(&mid_r);
        let r2 = mid_r.sub(lo);
        let rad = if r1 > r2 { r1 } else { r2 };
        Ball::new(mid_r, rad, prec)
    }

    /// Ball containing the closed rational interval `[lo, hi]`.
    pub fn from_rational_interval(lo: &BigRational, hi: &BigRational, prec: u32) -> Self {
        let l = Dyadic::from_rational(lo, prec, Round::Down);
        let h = Dyadic::from_rational(hi, prec, Round::Up);
        Ball::from_endpoints(&l, &h, prec)
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(mut self, prec: u32) -> Self {
        self.prec = prec;
        self.normalize();
        self
    }

    pub fn lower(&self) -> Dyadic {
        self.mid.sub(&self.rad)
    }

    pub fn upper(&self) -> Dyadic {
        self.mid.add(&self.rad)
    }

    pub fn lower_rational(&self) -> BigRational {
        self.lower().to_rational()
    }

    pub fn upper_rational(&self) -> BigRational {
        self.upper().to_rational()
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn width(&self) -> Dyadic {
        self.rad.mul_pow2(1)
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        self.lower() <= *x && *x <= self.upper()
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        self.lower_rational() <= *q && *q <= self.upper_rational()
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Dyadic::zero())
    }

    /// Every element is strictly positive.
    pub fn is_positive(&self) -> bool {
        self.lower().signum() > 0
    }

    /// Every element is strictly negative.
    pub fn is_negative(&self) -> bool {
        self.upper().signum() < 0
    }

    /// Sign when decided.
    pub fn sign(&self) -> Option<i32> {
        if self.is_positive() {
            Some(1)
        } else if self.is_negative() {
            Some(-1)
        } else if self.mid.is_zero() && self.rad.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    /// `Less` when every element of `self` is below every element of
    /// `other`, `Greater` symmetrically, `Equal` for identical exact balls,
    /// `None` when overlapping.
    pub fn compare(&self, other: &Ball) -> Option<Ordering> {
        if self.upper() < other.lower() {
            Some(Ordering::Less)
        } else if self.lower() > other.upper() {
            Some(Ordering::Greater)
        } else if self.is_exact() && other.is_exact() && self.mid == other.mid {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Smallest ball containing both operands.
    pub fn union(&self, other: &Ball) -> Ball {
        let lo = self.lower().min(other.lower());
        let hi = self.upper().max(other.upper());
        Ball::from_endpoints(&lo, &hi, join_prec(self.prec, other.prec))
    }

    fn normalize(&mut self) {
        if self.prec == 0 {
            return;
        }
        let bits = self.mid.man.bits();
        if bits > self.prec as u64 {
            let rounded = self.mid.round(self.prec, Round::Down);
            let err = self.mid.sub(&rounded);
            self.mid = rounded;
            self.rad = add_up(&self.rad, &err);
        }
    }

    pub fn abs(&self) -> Ball {
        if self.mid.signum() >= 0 {
            self.clone()
        } else {
            self.neg_ref()
        }
    }

    /// Upper bound of `|x|` over the ball.
    pub fn mag(&self) -> Dyadic {
        self.mid.abs().add(&self.rad)
    }

    /// Lower bound of `|x|` over the ball (zero when it straddles zero).
    pub fn mig(&self) -> Dyadic {
        let d = self.mid.abs().sub(&self.rad);
        if d.signum() > 0 {
            d
        } else {
            Dyadic::zero()
        }
    }

    fn neg_ref(&self) -> Ball {
        Ball { mid: self.mid.neg(), rad: self.rad.clone(), prec: self.prec }
    }

    pub fn add_ref(&self, other: &Ball) -> Ball {
        let prec = join_prec(self.prec, other.prec);
        Ball::new(self.mid.add(&other.mid), add_up(&self.rad, &other.rad), prec)
    }

    pub fn sub_ref(&self, other: &Ball) -> Ball {
        self.add_ref(&other.neg_ref())
    }

    pub fn mul_ref(&self, other: &Ball) -> Ball {
        let prec = join_prec(self.prec, other.prec);
        let mid = self.mid.mul(&other.mid);
        let rad = if self.rad.is_zero() && other.rad.is_zero() {
            Dyadic::zero()
        } else {
            let a = mul_up(&self.mid.abs(), &other.rad);
            let b = mul_up(&other.mid.abs(), &self.rad);
            let c = mul_up(&self.rad, &other.rad);
            add_up(&add_up(&a, &b), &c)
        };
        Ball::new(mid, rad, prec)
    }

    pub fn sqr(&self) -> Ball {
        self.mul_ref(self)
    }

    pub fn mul_pow2(&self, k: i64) -> Ball {
        Ball { mid: self.mid.mul_pow2(k), rad: self.rad.mul_pow2(k), prec: self.prec }
    }

    /// Adds `[-r, r]` to the ball.
    pub fn add_error(&self, r: &Dyadic) -> Ball {
        Ball::new(self.mid.clone(), add_up(&self.rad, &r.abs()), self.prec)
    }

    fn working_prec(&self) -> u32 {
        if self.prec == 0 {
            START_PRECISION
        } else {
            self.prec
        }
    }

    /// `1 / x`; `None` when the ball contains zero.
    pub fn recip(&self) -> Option<Ball> {
        self.recip_at(self.working_prec())
    }

    fn recip_at(&self, prec: u32) -> Option<Ball> {
        if self.contains_zero() {
            return None;
        }
        let m = &self.mid;
        let one = Dyadic::from_int(1);
        let lo = Dyadic::div(&one, m, prec, Round::Down);
        let hi = Dyadic::div(&one, m, prec, Round::Up);
        let center = Ball::from_endpoints(&lo, &hi, prec);
        if self.rad.is_zero() {
            return Some(center);
        }
        // |1/x - 1/m| <= r / (|m| (|m| - r))
        let am = m.abs();
        let denom = am.mul(&am.sub(&self.rad)).round(RAD_BITS as u32, Round::Down);
        let extra = Dyadic::div(&self.rad, &denom, RAD_BITS as u32, Round::Up);
        Some(center.add_error(&extra))
    }

    /// `self / other`; `None` when `other` contains zero.
    pub fn div(&self, other: &Ball) -> Option<Ball> {
        let prec = match join_prec(self.prec, other.prec) {
            0 => START_PRECISION,
            p => p,
        };
        Some(self.mul_ref(&other.recip_at(prec)?).with_prec(prec))
    }

    pub fn div_int(&self, n: i64) -> Ball {
        self.div(&Ball::from_int(n)).expect("nonzero divisor")
    }

    pub fn powi(&self, mut e: u64) -> Ball {
        let mut base = self.clone();
        let mut acc = Ball::from_int(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    /// Natural logarithm; `None` unless the ball is strictly positive.
    pub fn ln(&self) -> Option<Ball> {
        if !self.is_positive() {
            return None;
        }
        let prec = self.working_prec();
        let center = ln_point(&self.mid, prec);
        if self.rad.is_zero() {
            return Some(center);
        }
        // mean value bound: |ln x - ln m| <= r / (m - r)
        let lo = self.lower().round(RAD_BITS as u32, Round::Down);
        let extra = Dyadic::div(&self.rad, &lo, RAD_BITS as u32, Round::Up);
        Some(center.add_error(&extra))
    }

    /// Upper bound of `ln |x|` over the ball; `None` stands for `-inf`
    /// (the ball is exactly zero).
    pub fn ln_abs_upper(&self) -> Option<Dyadic> {
        let m = self.mag();
        if m.is_zero() {
            return None;
        }
        let prec = self.working_prec();
        Some(ln_point(&m, prec).upper())
    }

    pub fn exp(&self) -> Ball {
        let prec = self.working_prec();
        let center = exp_point(&self.mid, prec);
        if self.rad.is_zero() {
            return center;
        }
        // exp(m + e) = exp(m) * exp(e), and exp([-r, r]) lies in 1 +- 2r when r <= 1
        let r = self.rad.clone();
        let factor = if r <= Dyadic::from_int(1) {
            Ball::new(Dyadic::from_int(1), r.mul_pow2(1), prec)
        } else {
            let up = exp_point(&r, prec).upper();
            Ball::from_endpoints(&Dyadic::zero(), &up, prec)
        };
        center.mul_ref(&factor)
    }

    /// Natural log of 2 at the given precision.
    pub fn ln2(prec: u32) -> Ball {
        static CACHE: Mutex<Option<Ball>> = Mutex::new(None);
        let mut guard = CACHE.lock().expect("ln2 cache");
        if let Some(b) = guard.as_ref() {
            if b.prec >= prec {
                return b.clone().with_prec(prec);
            }
        }
        // ln 2 = 2 atanh(1/3)
        let wp = prec + 16;
        let third = Ball::from_rational(&BigRational::new(1.into(), 3.into()), wp);
        let v = atanh_series(&third, wp).mul_pow2(1);
        *guard = Some(v.clone());
        v.with_prec(prec)
    }

    /// `ln(q)` for a positive rational.
    pub fn ln_rational(q: &BigRational, prec: u32) -> Ball {
        Ball::from_rational(q, prec + 8).ln().expect("positive rational").with_prec(prec)
    }
}

/// `atanh(z) = z + z^3/3 + ...` for `|z| <= 1/5`, with a tail bound.
fn atanh_series(z: &Ball, prec: u32) -> Ball {
    let z2 = z.sqr();
    let mut term = z.clone();
    let mut sum = Ball::from_int(0).with_prec(prec);
    let eps = Dyadic::pow2(-(prec as i64) - 4);
    let mut j: i64 = 0;
    loop {
        sum = sum.add_ref(&term.div_int(2 * j + 1));
        term = term.mul_ref(&z2);
        j += 1;
        if term.mag() < eps {
            break;
        }
    }
    // remaining terms are bounded by |term| / (1 - z^2) <= 25/24 |term|
    sum.add_error(&term.mag().mul_pow2(1))
}

fn ln_point(m: &Dyadic, prec: u32) -> Ball {
    assert!(m.signum() > 0, "logarithm of a nonpositive number");
    let wp = prec + 24;
    // m = y 2^k with y in [3/4, 3/2)
    let mut k = m.magnitude_bits() - 1;
    let mut y = m.mul_pow2(-k);
    if y >= Dyadic::new(BigInt::from(3), -1) {
        k += 1;
        y = y.mul_pow2(-1);
    }
    let yb = Ball::exact(y);
    let one = Ball::from_int(1);
    let z = yb.sub_ref(&one).div(&yb.add_ref(&one).with_prec(wp)).expect("y + 1 > 0");
    let z = z.with_prec(wp);
    let mut out = atanh_series(&z, wp).mul_pow2(1);
    if k != 0 {
        out = out.add_ref(&Ball::ln2(wp).mul_ref(&Ball::from_int(k)));
    }
    out.with_prec(prec)
}

fn exp_point(m: &Dyadic, prec: u32) -> Ball {
    if m.is_zero() {
        return Ball::from_int(1).with_prec(prec);
    }
    let s = (m.magnitude_bits() + 8).max(0);
    let wp = prec + s as u32 + 24;
    let r = Ball::exact(m.mul_pow2(-s)).with_prec(wp);
    let eps = Dyadic::pow2(-(wp as i64) - 4);
    let mut sum = Ball::from_int(1).with_prec(wp);
    let mut term = Ball::from_int(1).with_prec(wp);
    let mut j: i64 = 1;
    loop {
        term = term.mul_ref(&r).div_int(j);
        sum = sum.add_ref(&term);
        j += 1;
        if term.mag() < eps {
            break;
        }
    }
    // |r| < 2^-8, so the tail is at most twice the last term
    let mut out = sum.add_error(&term.mag().mul_pow2(1));
    for _ in 0..s {
        out = out.sqr();
    }
    out.with_prec(prec)
}

/// Runs `f` at 64, 128, ... bits up to `cap`, returning the first decided
/// answer.
pub fn precision_ladder<T>(cap: u32, mut f: impl FnMut(u32) -> Option<T>) -> Result<T> {
    let mut prec = START_PRECISION.min(cap.max(1));
    loop {
        if let Some(v) = f(prec) {
            return Ok(v);
        }
        if prec >= cap {
            return Err(Error::Undecided { bits: cap });
        }
        prec = (prec * 2).min(cap);
    }
}

impl Add for Ball {
    type Output = Ball;
    fn add(self, rhs: Ball) -> Ball {
        self.add_ref(&rhs)
    }
}

impl Sub for Ball {
    type Output = Ball;
    fn sub(self, rhs: Ball) -> Ball {
        self.sub_ref(&rhs)
    }
}

impl Mul for Ball {
    type Output = Ball;
    fn mul(self, rhs: Ball) -> Ball {
        self.mul_ref(&rhs)
    }
}

impl Neg for Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        self.neg_ref()
    }
}

impl<'a> Add<&'a Ball> for &'a Ball {
    type Output = Ball;
    fn add(self, rhs: &Ball) -> Ball {
        self.add_ref(rhs)
    }
}

impl<'a> Sub<&'a Ball> for &'a Ball {
    type Output = Ball;
    fn sub(self, rhs: &Ball) -> Ball {
        self.sub_ref(rhs)
    }
}

impl<'a> Mul<&'a Ball> for &'a Ball {
    type Output = Ball;
    fn mul(self, rhs: &Ball) -> Ball {
        self.mul_ref(rhs)
    }
}

impl Zero for Ball {
    fn zero() -> Self {
        Ball::from_int(0)
    }
    fn is_zero(&self) -> bool {
        self.mid.is_zero() && self.rad.is_zero()
    }
}

impl One for Ball {
    fn one() -> Self {
        Ball::from_int(1)
    }
}

impl Scalar for Ball {
    fn from_integer(n: &BigInt) -> Self {
        Ball::from_int(n.clone())
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.17e} +/- {:.3e}]", self.mid.to_f64(), self.rad.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn shift_rounds_down_for_negatives() {
        assert_eq!(BigInt::from(-5) >> 1usize, BigInt::from(-3));
        let d = Dyadic::from_int(-5);
        assert_eq!(d.round(2, Round::Down), Dyadic::from_int(-6));
        assert_eq!(d.round(2, Round::Up), Dyadic::from_int(-4));
    }

    #[test]
    fn rational_rounding_brackets() {
        for (n, d) in [(1, 3), (-2, 7), (22, 7), (1, 1000003)] {
            let x = q(n, d);
            let lo = Dyadic::from_rational(&x, 53, Round::Down);
            let hi = Dyadic::from_rational(&x, 53, Round::Up);
            assert!(lo.to_rational() < x && x < hi.to_rational());
            let w = (hi.to_rational() - lo.to_rational()) / x.clone();
            assert!(w.abs() < q(1, 1 << 50));
        }
        assert_eq!(Dyadic::from_rational(&q(3, 8), 10, Round::Up).to_rational(), q(3, 8));
    }

    #[test]
    fn exact_ring_ops_stay_exact() {
        let two = Ball::from_int(2);
        let four = &two * &two;
        assert!(four.is_exact());
        assert_eq!(four.mid().to_rational(), q(4, 1));
    }

    #[test]
    fn recip_contains_truth() {
        let x = Ball::from_rational(&q(3, 7), 80);
        let r = x.recip().unwrap();
        assert!(r.contains_rational(&q(7, 3)));
        assert!(r.rad().to_f64() < 1e-20);
        assert!(Ball::from_rational_interval(&q(-1, 2), &q(1, 2), 64).recip().is_none());
    }

    #[test]
    fn logarithms() {
        let l2 = Ball::ln2(200);
        assert!((l2.to_f64() - std::f64::consts::LN_2).abs() < 1e-15);
        assert!(l2.rad().to_f64() < 1e-55);
        let l10 = Ball::ln_rational(&q(10, 1), 128);
        assert!((l10.to_f64() - 10f64.ln()).abs() < 1e-15);
        let lt = Ball::ln_rational(&q(1, 3), 128);
        assert!((lt.to_f64() + 3f64.ln()).abs() < 1e-15);
        assert!(Ball::from_int(0).ln().is_none());
        // ln(2^k * 3/4) near the reduction boundary
        let b = Ball::ln_rational(&q(3, 2), 100);
        assert!((b.to_f64() - 1.5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn exponentials() {
        let e = Ball::from_int(1).with_prec(128).exp();
        assert!((e.to_f64() - std::f64::consts::E).abs() < 1e-15);
        let big = Ball::from_int(50).with_prec(128).exp();
        assert!(((big.to_f64() - 50f64.exp()) / 50f64.exp()).abs() < 1e-14);
        let neg = Ball::from_rational(&q(-7, 3), 128).exp();
        assert!((neg.to_f64() - (-7.0f64 / 3.0).exp()).abs() < 1e-15);
        // exp(ln x) = x
        let x = Ball::ln_rational(&q(5, 1), 160).exp();
        assert!(x.contains_rational(&q(5, 1)));
    }

    #[test]
    fn ladder_escalates_and_caps() {
        let got = precision_ladder(4096, |p| (p >= 256).then_some(p)).unwrap();
        assert_eq!(got, 256);
        let err = precision_ladder::<()>(512, |_| None).unwrap_err();
        assert!(matches!(err, Error::Undecided { bits: 512 }));
    }

    #[test]
    fn compare_decides_separated_balls() {
        let a = Ball::from_rational(&q(1, 3), 64);
        let b = Ball::from_rational(&q(1, 2), 64);
        assert_eq!(a.compare(&b), Some(Ordering::Less));
        assert_eq!(b.compare(&a), Some(Ordering::Greater));
        assert_eq!(a.compare(&a), None);
    }
}
