//! Cover systems and certified bounds for `L-(t)` and `L+(t)`.
//!
//! `L-(t)` is the infimum of lengths of intervals with `t_M(I) > t`, and
//! `L+(t)` the supremum of lengths with `t_M(I) <= t`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::ball::{precision_ladder, Ball};
use crate::cheb::{certify_attainment, CertifiedProduct, WeightedProduct};
use crate::error::{Error, Result};
use crate::io::format_directed;
use crate::obstruction::ObstructionValue;
use crate::robinson::ObstructionRecord;
use crate::roots::RatInterval;

const SIGN_CAP: u32 = 1024;

/// What certifies the interval of a cover entry.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    /// Obstruction polynomial; its root range is the interval.
    Record(ObstructionRecord),
    /// Certified product; its interval is the interval.
    Product(CertifiedProduct),
}

impl Witness {
    pub fn base_interval(&self) -> &RatInterval {
        match self {
            Witness::Record(r) => &r.root_range,
            Witness::Product(p) => &p.interval,
        }
    }
}

/// A witness placed at an integer translate of its own interval.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverEntry {
    pub interval: RatInterval,
    pub shift: BigInt,
    pub witness: Witness,
}

impl CoverEntry {
    pub fn new(witness: Witness, shift: BigInt) -> Self {
        let interval = witness.base_interval().translate(&BigRational::from_integer(shift.clone()));
        CoverEntry { interval, shift, witness }
    }
}

/// Intervals `I_i = [a_i, b_i]` with `a_1 < ... < a_n = a_1 + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverSystem {
    entries: Vec<CoverEntry>,
}

/// A gap `b_{i+1} - a_i` or `b_i - a_{i+1}` and its (1-based) index `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Gap {
    pub value: BigRational,
    pub index: usize,
}

impl Gap {
    pub fn enclosure(&self) -> Ball {
        Ball::from_rational(&self.value, 128)
    }
}

impl CoverSystem {
    /// Sorts by left endpoint and checks strict increase and closure.
    pub fn new(mut entries: Vec<CoverEntry>) -> Result<Self> {
        entries.sort_by(|a, b| a.interval.lo.cmp(&b.interval.lo));
        if entries.len() < 2 {
            return Err(Error::MissingTranslateClosure);
        }
        if entries.windows(2).any(|w| w[0].interval.lo >= w[1].interval.lo) {
            return Err(Error::precondition("left endpoints must be strictly increasing"));
        }
        let first = &entries[0].interval.lo;
        let last = &entries[entries.len() - 1].interval.lo;
        if *last != first + BigRational::one() {
            return Err(Error::MissingTranslateClosure);
        }
        Ok(CoverSystem { entries })
    }

    /// Cover from obstruction records: each root range is translated into
    /// one period, ranges containing a translate of another are dropped,
    /// and the first entry is repeated one unit to the right.
    pub fn from_records(records: &[ObstructionRecord]) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::MissingTranslateClosure);
        }
        let mut placed: Vec<CoverEntry> = records
            .iter()
            .map(|r| {
                let k = -r.root_range.lo.floor().to_integer();
                CoverEntry::new(Witness::Record(r.clone()), k)
            })
            .collect();
        placed.sort_by(|a, b| a.interval.lo.cmp(&b.interval.lo).then(a.interval.hi.cmp(&b.interval.hi)));
        let one = BigRational::one();
        let contains_translate = |outer: &RatInterval, inner: &RatInterval| {
            [-&one, BigRational::zero(), one.clone()].iter().any(|c| outer.contains_interval(&inner.translate(c)))
        };
        let mut kept: Vec<CoverEntry> = Vec::new();
        for (i, e) in placed.iter().enumerate() {
            let dominated = placed.iter().enumerate().any(|(j, o)| {
                j != i && contains_translate(&e.interval, &o.interval) && (o.interval != e.interval || j < i)
            });
            if !dominated {
                kept.push(e.clone());
            }
        }
        let first = kept[0].clone();
        kept.push(CoverEntry::new(first.witness, first.shift + 1));
        Self::new(kept)
    }

    pub fn entries(&self) -> &[CoverEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The whole system moved by an integer.
    pub fn translate(&self, k: &BigInt) -> Self {
        CoverSystem { entries: self.entries.iter().map(|e| CoverEntry::new(e.witness.clone(), &e.shift + k)).collect() }
    }

    fn gaps(&self, f: impl Fn(&RatInterval, &RatInterval) -> BigRational) -> Vec<Gap> {
        self.entries
            .windows(2)
            .enumerate()
            .map(|(i, w)| Gap { value: f(&w[0].interval, &w[1].interval), index: i + 1 })
            .collect()
    }
}

/// `L-(t) <= span` for an obstruction with value above `t`.
pub fn lminus_upper(rec: &ObstructionRecord, t: &BigRational) -> Result<Ball> {
    if rec.lead().abs() < BigInt::from(2) {
        return Err(Error::MonicInput);
    }
    if !rec.value.exceeds(t) {
        return Err(Error::ValueNotAboveT);
    }
    Ok(rec.span.clone())
}

/// `M = max (b_{i+1} - a_i)`: every interval of length `M` contains a
/// translate of some root range, so `L+(t) <= M`.
pub fn cover_max_gap(cover: &CoverSystem, t: &BigRational) -> Result<Gap> {
    for e in cover.entries() {
        match &e.witness {
            Witness::Record(r) if r.value.exceeds(t) => {}
            Witness::Record(_) => return Err(Error::ValueNotAboveT),
            Witness::Product(_) => return Err(Error::precondition("upper covers need obstruction records")),
        }
    }
    let gaps = cover.gaps(|a, b| &b.hi - &a.lo);
    Ok(gaps.into_iter().max_by(|x, y| x.value.cmp(&y.value).then(y.index.cmp(&x.index))).expect("two entries"))
}

/// `m = min (b_i - a_{i+1})`: every interval of length `m` lies in a
/// translate of some certified interval, so `L-(t) >= m`.
pub fn cover_min_gap(cover: &CoverSystem, t: &BigRational) -> Result<Gap> {
    for e in cover.entries() {
        match &e.witness {
            Witness::Product(p) if p.sup_value.cmp_rational(t) != Ordering::Greater => {}
            Witness::Product(p) => {
                return Err(Error::NotCertified(format!("sup value {} exceeds t", p.sup_value)));
            }
            Witness::Record(_) => return Err(Error::NotCertified("lower covers need certified products".into())),
        }
    }
    let gaps = cover.gaps(|a, b| &a.hi - &b.lo);
    Ok(gaps.into_iter().min_by(|x, y| x.value.cmp(&y.value).then(x.index.cmp(&y.index))).expect("two entries"))
}

/// `L+(sup) >= |I|` for a certified product.
pub fn lplus_lower(product: &CertifiedProduct) -> (ObstructionValue, BigRational) {
    (product.sup_value.clone(), product.interval.width())
}

/// Certifies the product and returns `|I|`; certificate failures become
/// `NotCertified`.
pub fn lplus_lower_for(product: &WeightedProduct, i: &RatInterval, q: &crate::IntPoly) -> Result<BigRational> {
    certify_attainment(product, i, q).map(|c| c.interval.width()).map_err(|e| Error::NotCertified(e.to_string()))
}

/// The certified product reflected about `1/2` (re-certified).
pub fn reflect_product(p: &CertifiedProduct) -> Result<CertifiedProduct> {
    let factors = p.product.factors().iter().map(|(f, a)| (f.reflect_half(), a.clone())).collect();
    let product = WeightedProduct::new(factors)?;
    certify_attainment(&product, &p.interval.reflect_half(), &p.obstruction.reflect_half())
}

/// The cover formed by products on `I_1..I_k`, their reflections `1 - I_i`
/// and `1 + I_1`.
pub fn reflected_cover(products: &[CertifiedProduct]) -> Result<CoverSystem> {
    let mut entries = Vec::new();
    for p in products {
        entries.push(CoverEntry::new(Witness::Product(p.clone()), BigInt::zero()));
        entries.push(CoverEntry::new(Witness::Product(reflect_product(p)?), BigInt::zero()));
    }
    let first =
        products.iter().min_by(|a, b| a.interval.lo.cmp(&b.interval.lo)).ok_or(Error::MissingTranslateClosure)?;
    entries.push(CoverEntry::new(Witness::Product(first.clone()), BigInt::one()));
    CoverSystem::new(entries)
}

/// `t_M(I) = 1/2` for `1 <= |I|`, when `I` lies in a translate of a cover
/// interval certified at `1/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalOneVerdict {
    /// Half-integer in `I`: the root of the obstruction `2x - (2k+1)`.
    pub half_integer: BigRational,
    /// 1-based index of the containing cover entry and the translation.
    pub entry: usize,
    pub shift: BigInt,
}

pub fn interval_one(i: &RatInterval, cover: &CoverSystem) -> Result<IntervalOneVerdict> {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    if i.width() < BigRational::one() {
        return Err(Error::precondition("interval shorter than 1"));
    }
    let half_integer = (&i.lo - &half).ceil() + &half;
    for e in cover.entries() {
        if let Witness::Product(p) = &e.witness {
            if p.sup_value.cmp_rational(&half) == Ordering::Greater {
                return Err(Error::NotCertified("cover value exceeds 1/2".into()));
            }
        }
    }
    for (idx, e) in cover.entries().iter().enumerate() {
        if !matches!(e.witness, Witness::Product(_)) {
            continue;
        }
        // integer k with I + k inside the entry
        let k = (&e.interval.lo - &i.lo).ceil();
        let moved = i.translate(&k);
        if e.interval.contains_interval(&moved) {
            return Ok(IntervalOneVerdict { half_integer, entry: idx + 1, shift: k.to_integer() });
        }
    }
    Err(Error::NotCertified(format!("{i} is not inside a translate of a cover interval")))
}

pub(crate) fn sign_of(f: impl Fn(u32) -> Ball) -> Result<i32> {
    precision_ladder(SIGN_CAP, |prec| f(prec).sign().filter(|s| *s != 0))
}

pub(crate) fn x_ln_x(x: &BigRational, prec: u32) -> Ball {
    if x.is_zero() {
        Ball::from_int(0)
    } else {
        Ball::ln_rational(x, prec).mul_ref(&Ball::from_rational(x, prec))
    }
}

/// `ln 4 + a ln a + (1-a) ln(1-a) - a ln 5`, zero at `alpha*`.
fn alpha_equation(a: &BigRational, prec: u32) -> Ball {
    let one = BigRational::one();
    let ln4 = Ball::ln2(prec).mul_pow2(1);
    let ln5 = Ball::ln_rational(&BigRational::from_integer(BigInt::from(5)), prec);
    ln4.add_ref(&x_ln_x(a, prec))
        .add_ref(&x_ln_x(&(&one - a), prec))
        .sub_ref(&ln5.mul_ref(&Ball::from_rational(a, prec)))
}

fn bisect(
    mut lo: BigRational,
    mut hi: BigRational,
    sign_lo: i32,
    width: &BigRational,
    sign: impl Fn(&BigRational) -> Result<i32>,
) -> Result<(BigRational, BigRational)> {
    let two = BigRational::from_integer(BigInt::from(2));
    while &hi - &lo > *width {
        let mid = (&lo + &hi) / &two;
        if sign(&mid)? == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// Enclosure of the root `alpha*` in `(0, 1)` of `4 a^a (1-a)^(1-a) = 5^a`.
pub fn alpha_star() -> Ball {
    let width = BigRational::new(BigInt::one(), BigInt::from(10_000_000));
    // the equation is convex in a, positive at 0 and negative at 1
    let (lo, hi) = bisect(BigRational::zero(), BigRational::one(), 1, &width, |a| sign_of(|p| alpha_equation(a, p)))
        .expect("alpha* bisection is decided");
    Ball::from_rational_interval(&lo, &hi, 64)
}

/// `alpha <= alpha*`, decided with balls.
fn below_alpha_star(a: &BigRational) -> Result<bool> {
    Ok(sign_of(|p| alpha_equation(a, p))? > 0)
}

fn ln_abs(q: &BigRational, prec: u32) -> Ball {
    Ball::ln_rational(&q.abs(), prec)
}

/// `(1-a) ln|x^2 - 1| + a ln|1 - x^2/5|`, the log of
/// `|P_a(1/2 + x/2)| / (5^(a/2)/2)`.
fn ell_equation(a: &BigRational, x: &BigRational, prec: u32) -> Ball {
    let one = BigRational::one();
    let x2 = x * x;
    let five = BigRational::from_integer(BigInt::from(5));
    let u = ln_abs(&(&x2 - &one), prec).mul_ref(&Ball::from_rational(&(&one - a), prec));
    let v = ln_abs(&(&one - &x2 / &five), prec).mul_ref(&Ball::from_rational(a, prec));
    u.add_ref(&v)
}

/// Largest dyadic `r = n / 2^bits` with `r^2 <= s`.
fn sqrt_below(s: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << (2 * bits);
    let n = (s * BigRational::from_integer(scale)).floor().to_integer().sqrt();
    BigRational::new(n, BigInt::one() << bits)
}

/// Point of the curve `L+(5^(a/2)/2) >= ell_a`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaPoint {
    pub alpha: BigRational,
    /// `5^(a/2) / 2`.
    pub t: Ball,
    pub ell: Ball,
}

/// `t_a = 5^(a/2) / 2`.
pub fn t_alpha(a: &BigRational, prec: u32) -> Ball {
    let ln5 = Ball::ln_rational(&BigRational::from_integer(BigInt::from(5)), prec);
    ln5.mul_ref(&Ball::from_rational(&(a / BigRational::from_integer(BigInt::from(2))), prec)).exp().mul_pow2(-1)
}

/// Root `ell_a` of `P_a(1/2 + ell/2) = 5^(a/2)/2` on the branch `(1, sqrt 5)`
/// for `a <= alpha*` and `(sqrt 5, inf)` otherwise.
pub fn ell_alpha(a: &BigRational) -> Result<Ball> {
    if a.is_negative() {
        return Err(Error::AlphaOutOfRange);
    }
    // a ln 5 <= ln 4
    let over = sign_of(|p| {
        Ball::ln_rational(&BigRational::from_integer(BigInt::from(5)), p)
            .mul_ref(&Ball::from_rational(a, p))
            .sub_ref(&Ball::ln2(p).mul_pow2(1))
    })?;
    if over > 0 {
        return Err(Error::AlphaOutOfRange);
    }
    let one = BigRational::one();
    let five = BigRational::from_integer(BigInt::from(5));
    let width = BigRational::new(BigInt::one(), BigInt::one() << 40);
    let sign = |x: &BigRational| sign_of(|p| ell_equation(a, x, p));
    let (lo, hi) = if below_alpha_star(a)? {
        // increasing on (1, sqrt(5 - 4a)), from -inf to a nonnegative maximum
        let top = sqrt_below(&(&five - BigRational::from_integer(BigInt::from(4)) * a), 64);
        if sign(&top)? < 0 {
            return Err(Error::NoRoot);
        }
        let mut lo = &one + BigRational::new(BigInt::one(), BigInt::from(1024));
        while sign(&lo)? > 0 {
            lo = (&lo + &one) / BigRational::from_integer(BigInt::from(2));
        }
        bisect(lo, top, -1, &width, sign)?
    } else {
        // increasing on (sqrt 5, inf) from -inf to +inf
        let mut lo = sqrt_below(&five, 64) + BigRational::new(BigInt::one(), BigInt::one() << 60);
        let gap = &lo - sqrt_below(&five, 64);
        let mut step = gap;
        while sign(&lo)? > 0 {
            step = &step / BigRational::from_integer(BigInt::from(2));
            lo = sqrt_below(&five, 64) + &step;
        }
        let mut hi = BigRational::from_integer(BigInt::from(3));
        while sign(&hi)? < 0 {
            hi = &hi * BigRational::from_integer(BigInt::from(2));
        }
        bisect(lo, hi, -1, &width, sign)?
    };
    Ok(Ball::from_rational_interval(&lo, &hi, 64))
}

/// `ell_a` at `a = k / steps` for `k = 0, 1, ...` up to `ln 4 / ln 5`.
pub fn alpha_curve(steps: u32) -> Vec<AlphaPoint> {
    (0..=steps)
        .into_par_iter()
        .filter_map(|k| {
            let a = BigRational::new(BigInt::from(k), BigInt::from(steps));
            let ell = ell_alpha(&a).ok()?;
            Some(AlphaPoint { t: t_alpha(&a, 64), alpha: a, ell })
        })
        .collect()
}

/// Certified bounds at one `t`; absent sides are `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundPoint {
    pub t: BigRational,
    pub lminus_lo: Option<BigRational>,
    pub lminus_hi: Option<BigRational>,
    pub lplus_lo: Option<BigRational>,
    pub lplus_hi: Option<BigRational>,
}

/// Inputs of the envelope.
#[derive(Clone, Debug, Default)]
pub struct EnvelopeData {
    /// Obstruction records (spans for `L-`, covers for `L+`).
    pub records: Vec<ObstructionRecord>,
    /// Certified products (`L+(sup) >= |I|`).
    pub products: Vec<CertifiedProduct>,
    /// `(t0, m)`: `L-(t) >= m` for `t >= t0`, from certified lower covers.
    pub lminus_covers: Vec<(BigRational, BigRational)>,
    pub alpha_curve: Vec<AlphaPoint>,
}

fn max_opt(a: Option<BigRational>, b: Option<BigRational>) -> Option<BigRational> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn min_opt(a: Option<BigRational>, b: Option<BigRational>) -> Option<BigRational> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn raw_point(t: &BigRational, data: &EnvelopeData) -> BoundPoint {
    let one = BigRational::one();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    if *t >= one {
        let v = Some(t * BigRational::from_integer(BigInt::from(4)));
        return BoundPoint {
            t: t.clone(),
            lminus_lo: v.clone(),
            lminus_hi: v.clone(),
            lplus_lo: v.clone(),
            lplus_hi: v,
        };
    }
    let above: Vec<ObstructionRecord> =
        data.records.iter().filter(|r| r.lead().abs() >= BigInt::from(2) && r.value.exceeds(t)).cloned().collect();
    let mut lminus_hi = above.iter().map(|r| r.span.upper_rational()).min();
    let lplus_hi = CoverSystem::from_records(&above).ok().and_then(|c| cover_max_gap(&c, t).ok()).map(|g| g.value);
    let mut lplus_lo = None;
    if *t <= half {
        lplus_lo = Some(t * BigRational::from_integer(BigInt::from(2)));
    }
    for p in &data.products {
        if p.sup_value.cmp_rational(t) != Ordering::Greater {
            lplus_lo = max_opt(lplus_lo, Some(p.interval.width()));
        }
    }
    for a in &data.alpha_curve {
        if a.t.upper_rational() <= *t {
            lplus_lo = max_opt(lplus_lo, Some(a.ell.lower_rational()));
        }
    }
    let mut lminus_lo = None;
    for (t0, m) in &data.lminus_covers {
        if t0 <= t {
            lminus_lo = max_opt(lminus_lo, Some(m.clone()));
        }
    }
    if *t < half {
        lminus_lo = Some(BigRational::zero());
        lminus_hi = Some(BigRational::zero());
    }
    BoundPoint { t: t.clone(), lminus_lo, lminus_hi, lplus_lo, lplus_hi }
}

/// Best certified bounds on the grid, propagated by monotonicity of both
/// functions, `L- <= L+` and `L+(t) >= l + 1 => L-(t) >= l`.
pub fn envelope(t_grid: &[BigRational], data: &EnvelopeData) -> Vec<BoundPoint> {
    let mut grid = t_grid.to_vec();
    grid.sort();
    grid.dedup();
    let mut pts: Vec<BoundPoint> = grid.par_iter().map(|t| raw_point(t, data)).collect();
    let one = BigRational::one();
    for _ in 0..2 {
        let mut lo_m: Option<BigRational> = None;
        let mut lo_p: Option<BigRational> = None;
        for p in pts.iter_mut() {
            lo_p = max_opt(lo_p, p.lplus_lo.take());
            lo_m = max_opt(lo_m, p.lminus_lo.take());
            lo_m = max_opt(lo_m, lo_p.as_ref().map(|l| l - &one).filter(|l| !l.is_negative()));
            lo_p = max_opt(lo_p, lo_m.clone());
            p.lplus_lo = lo_p.clone();
            p.lminus_lo = lo_m.clone();
        }
        let mut hi_m: Option<BigRational> = None;
        let mut hi_p: Option<BigRational> = None;
        for p in pts.iter_mut().rev() {
            hi_p = min_opt(hi_p, p.lplus_hi.take());
            hi_m = min_opt(hi_m, p.lminus_hi.take());
            hi_m = min_opt(hi_m, hi_p.clone());
            p.lplus_hi = hi_p.clone();
            p.lminus_hi = hi_m.clone();
        }
    }
    pts
}

/// Default grid: just below each published threshold, plus `k/100` on
/// `[1/2, 1]`.
pub fn default_grid(thresholds: &[ObstructionValue]) -> Vec<BigRational> {
    let scale = BigInt::from(10u64.pow(10));
    let mut grid: Vec<BigRational> = thresholds
        .iter()
        .map(|v| {
            let f = (v.ln_ball(96).exp().lower_rational() * BigRational::from_integer(scale.clone())).floor();
            let mut t = f / BigRational::from_integer(scale.clone());
            while !v.exceeds(&t) {
                t -= BigRational::new(BigInt::one(), scale.clone());
            }
            t
        })
        .collect();
    grid.extend((50..=100).map(|k| BigRational::new(BigInt::from(k), BigInt::from(100))));
    grid.sort();
    grid.dedup();
    grid
}

pub const CSV_HEADER: &str = "t,lminus_lo,lminus_hi,lplus_lo,lplus_hi";

/// CSV rows with 10 significant digits, lower bounds rounded down and upper
/// bounds rounded up.
pub fn to_csv(points: &[BoundPoint]) -> String {
    let cell = |v: &Option<BigRational>, up: bool| v.as_ref().map(|q| format_directed(q, 10, up)).unwrap_or_default();
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for p in points {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            format_directed(&p.t, 10, false),
            cell(&p.lminus_lo, false),
            cell(&p.lminus_hi, true),
            cell(&p.lplus_lo, false),
            cell(&p.lplus_hi, true)
        ));
    }
    out
}
