//! Dense univariate polynomials.
//!
//! [`Poly<T>`] stores coefficients low-to-high with no trailing zeros, so the
//! zero polynomial is the empty vector. Ring operations, evaluation and
//! derivatives are generic over [`Scalar`]; content, gcd, exact division and
//! squarefree decomposition are specific to integer coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    /// Builds a polynomial from coefficients `a_0, ..., a_d`, trimming
    /// trailing zeros.
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c x^k`.
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(T::one(), 1)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn lead(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    /// Coefficient of `x^i` (zero above the degree).
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// Exact `k`-th derivative.
    pub fn derivative(&self, k: usize) -> Self {
        if k == 0 {
            return self.clone();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(k)
            .map(|(i, c)| T::from_integer(&falling_factorial(i, k)) * c.clone())
            .collect();
        Self::new(coeffs)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|a| a.clone() * c.clone())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(T::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `p(a x + b)`.
    pub fn compose_linear(&self, a: &T, b: &T) -> Self {
        let lin = Poly::new(vec![b.clone(), a.clone()]);
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Self::constant(c.clone());
        }
        acc
    }
}

/// `i (i-1) ... (i-k+1)`.
pub fn falling_factorial(i: usize, k: usize) -> BigInt {
    ((i + 1 - k.min(i + 1))..=i).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

impl<T: Scalar> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Scalar> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        self.map(|c| -c.clone())
    }
}

impl<T: Scalar> Add for Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: Poly<T>) -> Poly<T> {
        &self + &rhs
    }
}

impl<T: Scalar> Sub for Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: Poly<T>) -> Poly<T> {
        &self - &rhs
    }
}

impl<T: Scalar> Mul for Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: Poly<T>) -> Poly<T> {
        &self * &rhs
    }
}

impl<T: Scalar> Neg for Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        -&self
    }
}

impl Poly<BigInt> {
    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Evaluates in any ring that integers embed into.
    pub fn eval_in<S: Scalar>(&self, x: &S) -> S {
        let mut acc = S::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + S::from_integer(c);
        }
        acc
    }

    /// Exact value at a rational point.
    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let (num, den) = self.eval_homogeneous(x.numer(), x.denom());
        BigRational::new(num, den)
    }

    /// Returns `(q^d p(n/q), q^d)` without reducing.
    pub fn eval_homogeneous(&self, n: &BigInt, q: &BigInt) -> (BigInt, BigInt) {
        if self.is_zero() {
            return (BigInt::zero(), BigInt::one());
        }
        // Horner from the top: acc = sum a_i n^i q^(d-i)
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * n + c * &qpow;
            qpow *= q;
        }
        (acc, num_traits::pow(q.clone(), self.degree()))
    }

    /// Sign of `p(x)` at a rational point.
    pub fn sign_at(&self, x: &BigRational) -> i32 {
        sign_of(&self.eval_homogeneous(x.numer(), x.denom()).0)
    }

    /// Sign of `p` as `x -> +inf`.
    pub fn sign_at_pos_inf(&self) -> i32 {
        sign_of(&self.lead())
    }

    /// Sign of `p` as `x -> -inf`.
    pub fn sign_at_neg_inf(&self) -> i32 {
        let s = sign_of(&self.lead());
        if self.degree() % 2 == 1 {
            -s
        } else {
            s
        }
    }

    /// Non-negative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// `p / content(p)` normalised to a positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.lead().is_negative() {
            g = -g;
        }
        self.map(|c| c / &g)
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_one()
    }

    pub fn to_rational(&self) -> Poly<BigRational> {
        self.map(|c| BigRational::from_integer(c.clone()))
    }

    pub fn to_f64(&self) -> Poly<f64> {
        self.map(<f64 as Scalar>::from_integer)
    }

    /// `p(x + c)`.
    pub fn translate(&self, c: &BigInt) -> Self {
        self.compose_linear(&BigInt::one(), c)
    }

    /// `(-1)^d p(1 - x)`, i.e. the reflection of the root set about `1/2`
    /// with the sign chosen so the leading coefficient keeps its sign.
    pub fn reflect_half(&self) -> Self {
        let r = self.compose_linear(&-BigInt::one(), &BigInt::one());
        if self.degree() % 2 == 1 {
            -r
        } else {
            r
        }
    }

    /// `(-1)^d p(-x)`.
    pub fn reflect_zero(&self) -> Self {
        let r = self.compose_linear(&-BigInt::one(), &BigInt::zero());
        if self.degree() % 2 == 1 {
            -r
        } else {
            r
        }
    }

    /// Pseudo-remainder `prem(a, b) = lc(b)^(deg a - deg b + 1) a mod b`.
    pub fn pseudo_rem(&self, b: &Self) -> Self {
        assert!(!b.is_zero(), "pseudo-division by zero polynomial");
        if self.is_zero() || self.degree() < b.degree() {
            return self.clone();
        }
        let db = b.degree();
        let lb = b.lead();
        let mut r = self.coeffs.clone();
        let mut e = self.degree() - db + 1;
        while r.len() > db && !r.is_empty() {
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (j, bc) in b.coeffs.iter().enumerate() {
                r[dr - db + j] -= &lr * bc;
            }
            e -= 1;
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        let scale = num_traits::pow(lb, e);
        Poly::new(r.into_iter().map(|c| c * &scale).collect())
    }

    /// Exact quotient `self / b` over the integers, or `None` when `b` does
    /// not divide `self` in `Z[x]`.
    pub fn div_exact(&self, b: &Self) -> Option<Self> {
        let (q, r) = self.div_rem_integral(b)?;
        r.is_zero().then_some(q)
    }

    /// Division with remainder over `Z[x]` when every step divides exactly.
    fn div_rem_integral(&self, b: &Self) -> Option<(Self, Self)> {
        assert!(!b.is_zero(), "division by zero polynomial");
        if self.degree() < b.degree() || self.is_zero() {
            return Some((Self::zero(), self.clone()));
        }
        let db = b.degree();
        let lb = b.lead();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); self.degree() - db + 1];
        for k in (0..q.len()).rev() {
            let top = r[k + db].clone();
            if top.is_zero() {
                continue;
            }
            let (qk, rem) = top.div_rem(&lb);
            if !rem.is_zero() {
                return None;
            }
            for (j, bc) in b.coeffs.iter().enumerate() {
                r[k + j] -= &qk * bc;
            }
            q[k] = qk;
        }
        Some((Poly::new(q), Poly::new(r)))
    }

    /// Primitive gcd with positive leading coefficient (contents ignored).
    pub fn gcd_primitive(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.primitive_part(), other.primitive_part())
        } else {
            (other.primitive_part(), self.primitive_part())
        };
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.primitive_part()
    }

    /// Full gcd in `Z[x]`: gcd of contents times the primitive gcd.
    pub fn gcd(&self, other: &Self) -> Self {
        let c = self.content().gcd(&other.content());
        let g = self.gcd_primitive(other);
        if c.is_zero() {
            return Self::zero();
        }
        g.scale(&c)
    }

    /// Primitive squarefree part with positive leading coefficient.
    pub fn squarefree_part(&self) -> Self {
        if self.degree() == 0 {
            return self.primitive_part();
        }
        let p = self.primitive_part();
        let g = p.gcd_primitive(&p.derivative(1));
        p.div_exact(&g).expect("gcd divides its argument").primitive_part()
    }

    /// Yun's squarefree decomposition of the primitive part: pairwise coprime
    /// squarefree primitive `s_i` with `pp(self) = prod s_i^i`. Constant
    /// factors are omitted.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, usize)> {
        let f = self.primitive_part();
        if f.degree() == 0 {
            return Vec::new();
        }
        let fp = f.derivative(1);
        let a0 = f.gcd_primitive(&fp);
        let mut b = f.div_exact(&a0).expect("exact");
        let mut c = fp.div_exact(&a0).expect("exact");
        let mut d = &c - &b.derivative(1);
        let mut out = Vec::new();
        let mut i = 1;
        while b.degree() > 0 {
            let a = b.gcd_primitive(&d);
            if a.degree() > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_exact(&a).expect("exact");
            c = d.div_exact(&a).expect("exact");
            d = &c - &b.derivative(1);
            i += 1;
        }
        out
    }

    /// Parses the term syntax ("7x^3-7x^2+1", "x**2 - 1", "3x2+1") or the
    /// JSON form `{"coeffs": [...]}`.
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim_start();
        if trimmed.starts_with('{') {
            return serde_json::from_str::<Self>(trimmed).map_err(|e| Error::parse(e.column(), e.to_string()));
        }
        Parser::new(text).parse()
    }
}

fn sign_of(n: &BigInt) -> i32 {
    match n.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { bytes: text.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.bytes[start..self.pos]).unwrap())
    }

    fn parse(mut self) -> Result<Poly<BigInt>> {
        let mut coeffs: Vec<BigInt> = Vec::new();
        let mut first = true;
        loop {
            self.skip_ws();
            if self.peek().is_none() {
                if first {
                    return Err(Error::parse(self.pos, "empty polynomial"));
                }
                break;
            }
            let mut negative = false;
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                }
                Some(b'-') => {
                    negative = true;
                    self.pos += 1;
                }
                _ if !first => return Err(Error::parse(self.pos, "expected '+' or '-'")),
                _ => {}
            }
            first = false;
            self.skip_ws();
            let coeff_pos = self.pos;
            let coeff = self.digits().map(|d| d.parse::<BigInt>().unwrap());
            self.skip_ws();
            if self.peek() == Some(b'*') && self.bytes.get(self.pos + 1) != Some(&b'*') {
                if coeff.is_none() {
                    return Err(Error::parse(self.pos, "unexpected '*'"));
                }
                self.pos += 1;
                self.skip_ws();
            }
            let mut exponent = 0usize;
            if self.peek() == Some(b'x') || self.peek() == Some(b'X') {
                self.pos += 1;
                exponent = 1;
                self.skip_ws();
                let mut explicit = false;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    explicit = true;
                } else if self.peek() == Some(b'*') && self.bytes.get(self.pos + 1) == Some(&b'*') {
                    self.pos += 2;
                    explicit = true;
                }
                self.skip_ws();
                let exp_pos = self.pos;
                match self.digits() {
                    Some(d) => exponent = d.parse().map_err(|_| Error::parse(exp_pos, "exponent too large"))?,
                    None if explicit => return Err(Error::parse(exp_pos, "expected exponent")),
                    None => {}
                }
            } else if coeff.is_none() {
                return Err(Error::parse(coeff_pos, "expected coefficient or 'x'"));
            }
            let mut c = coeff.unwrap_or_else(BigInt::one);
            if negative {
                c = -c;
            }
            if coeffs.len() <= exponent {
                coeffs.resize(exponent + 1, BigInt::zero());
            }
            coeffs[exponent] += c;
        }
        Ok(Poly::new(coeffs))
    }
}

impl fmt::Display for Poly<BigInt> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if c.is_negative() {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            if i == 0 || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffsJson {
    coeffs: Vec<IntText>,
}

/// Big integer carried as a decimal string (numbers are also accepted).
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntText {
    Text(String),
    Number(i64),
}

impl Serialize for Poly<BigInt> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CoeffsJson { coeffs: self.coeffs.iter().map(|c| IntText::Text(c.to_string())).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly<BigInt> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CoeffsJson::deserialize(d)?;
        let coeffs = raw
            .coeffs
            .into_iter()
            .map(|c| match c {
                IntText::Text(s) => s.trim().parse::<BigInt>().map_err(serde::de::Error::custom),
                IntText::Number(n) => Ok(BigInt::from(n)),
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Poly::new(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly<BigInt> {
        Poly::parse(s).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parse_term_syntax() {
        assert_eq!(p("7x^3-7x^2+1"), Poly::from_i64s(&[1, 0, -7, 7]));
        assert_eq!(p("x"), Poly::from_i64s(&[0, 1]));
        assert_eq!(p("2x^2 - 1"), Poly::from_i64s(&[-1, 0, 2]));
        assert_eq!(p("x**2 + 3*x - 4"), Poly::from_i64s(&[-4, 3, 1]));
        assert_eq!(p("-x3+x"), Poly::from_i64s(&[0, 1, 0, -1]));
        assert_eq!(p("x-x"), Poly::zero());
        assert!(matches!(Poly::parse("7x^"), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(Poly::parse("3 y"), Err(Error::Parse { .. })));
        assert!(Poly::parse("").is_err());
    }

    #[test]
    fn display_round_trip() {
        for s in ["7x^3-7x^2+1", "x", "-x^2+x-1", "0", "2x-1", "x^8+172x^7-440x^6+1"] {
            assert_eq!(p(s).to_string(), s);
        }
    }

    #[test]
    fn json_round_trip() {
        let f = p("7x^3-7x^2+1");
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(text, r#"{"coeffs":["1","0","-7","7"]}"#);
        assert_eq!(Poly::parse(&text).unwrap(), f);
        assert_eq!(Poly::parse(r#"{"coeffs":[-1, 0, 2]}"#).unwrap(), p("2x^2-1"));
    }

    #[test]
    fn evaluation() {
        assert_eq!(p("2x-1").eval_rational(&q(1, 2)), q(0, 1));
        assert_eq!(p("x^2-x").eval_rational(&q(1, 2)), q(-1, 4));
        assert_eq!(p("7x^3-7x^2+1").eval_rational(&q(0, 1)), q(1, 1));
        assert_eq!(p("x^3+2").eval_rational(&q(-2, 3)), q(46, 27));
        assert_eq!(p("x^2-x").sign_at(&q(1, 2)), -1);
        assert_eq!(p("5").eval_rational(&q(7, 3)), q(5, 1));
    }

    #[test]
    fn derivatives() {
        assert_eq!(p("x^3").derivative(1), p("3x^2"));
        assert_eq!(p("7x^3+7x^2-1").derivative(2), p("42x+14"));
        assert_eq!(p("2x-1").derivative(2), Poly::zero());
        assert_eq!(p("x^5").derivative(5), p("120"));
    }

    #[test]
    fn content_and_gcd() {
        assert_eq!(p("6x^2-4").content(), BigInt::from(2));
        assert_eq!(p("-6x^2+4").primitive_part(), p("3x^2-2"));
        let a = p("x^2-x") * p("2x-1");
        let b = p("2x-1") * p("x+5");
        assert_eq!(a.gcd_primitive(&b), p("2x-1"));
        assert_eq!(p("4x^2-2x").gcd(&p("6x")), p("2x"));
        assert_eq!((p("2x-1") * p("3x+1")).div_exact(&p("3x+1")), Some(p("2x-1")));
        assert_eq!(p("x^2+1").div_exact(&p("2x-1")), None);
        assert_eq!(p("x^2").div_exact(&p("2x")), None);
    }

    #[test]
    fn squarefree() {
        let f = p("x-1").pow(3) * p("2x+1").pow(2) * p("x^2+1");
        let dec = f.squarefree_decomposition();
        assert_eq!(dec, vec![(p("x^2+1"), 1), (p("2x+1"), 2), (p("x-1"), 3)]);
        assert_eq!(f.squarefree_part(), p("x-1") * p("2x+1") * p("x^2+1"));
    }

    #[test]
    fn transforms() {
        assert_eq!(p("2x-1").reflect_half(), p("2x-1"));
        assert_eq!(p("x").reflect_half(), p("x-1"));
        assert_eq!(p("2x-1").translate(&BigInt::one()), p("2x+1"));
        assert_eq!(p("7x^3-7x^2+1").reflect_half(), p("7x^3-14x^2+7x-1"));
        assert_eq!(p("x^2-3").reflect_zero(), p("x^2-3"));
        assert_eq!(p("2x-1").reflect_zero(), p("2x+1"));
    }

    #[test]
    fn pseudo_remainder() {
        let a = p("x^3+2x+1");
        let b = p("2x^2+1");
        // 4 (x^3+2x+1) = (2x)(2x^2+1) + (6x + 4)
        assert_eq!(a.pseudo_rem(&b), p("6x+4"));
    }

    #[test]
    fn generic_float_eval() {
        let f = p("x^2-x").to_f64();
        assert!((f.eval(&0.5) + 0.25).abs() < 1e-15);
        let g: Poly<f32> = p("3x-1").map(<f32 as Scalar>::from_integer);
        assert!((g.eval(&(1.0 / 3.0))).abs() < 1e-6);
    }
}
