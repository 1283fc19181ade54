//! Scalar abstractions shared by the polynomial, lattice and enclosure code.
//!
//! Exact work happens over [`BigInt`] and [`BigRational`]; screening and the
//! linear program run in `f64`; certified numerics run over [`crate::Ball`].
//! Everything that only needs ring operations is written once against
//! [`Scalar`], and the lattice code is written against [`Field`].

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A commutative ring that integer polynomials can be evaluated in.
pub trait Scalar:
    Clone + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn from_integer(n: &BigInt) -> Self;
}

/// An ordered field with nearest-integer rounding.
pub trait Field: Scalar + Div<Output = Self> + PartialOrd {
    fn from_rational(q: &BigRational) -> Self;
    fn round_to_integer(&self) -> BigInt;
    fn to_f64(&self) -> f64;
    fn abs_value(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl Scalar for f64 {
    fn from_integer(n: &BigInt) -> Self {
        n.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {
    fn from_integer(n: &BigInt) -> Self {
        n.to_f32().unwrap_or(f32::NAN)
    }
}

impl Scalar for BigInt {
    fn from_integer(n: &BigInt) -> Self {
        n.clone()
    }
}

impl Scalar for BigRational {
    fn from_integer(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }
}

impl Field for f64 {
    fn from_rational(q: &BigRational) -> Self {
        rational_to_f64(q)
    }
    fn round_to_integer(&self) -> BigInt {
        BigInt::from(self.round() as i128)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Field for f32 {
    fn from_rational(q: &BigRational) -> Self {
        rational_to_f64(q) as f32
    }
    fn round_to_integer(&self) -> BigInt {
        BigInt::from(self.round() as i128)
    }
    fn to_f64(&self) -> f64 {
        *self as f64
    }
}

impl Field for BigRational {
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn round_to_integer(&self) -> BigInt {
        // floor(q + 1/2)
        let two = BigInt::from(2);
        let num = self.numer() * &two + self.denom();
        num.div_floor(&(self.denom() * two))
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
}

/// Converts a rational to the nearest-ish `f64` without overflowing on
/// large numerators and denominators.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let n = q.numer();
    let d = q.denom();
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    // scale so the quotient carries ~64 significant bits
    let shift = 64 - (nb - db);
    let scaled = if shift >= 0 { (n.abs() << shift as usize) / d } else { n.abs() / (d << (-shift) as usize) };
    let mant = scaled.to_f64().unwrap_or(f64::INFINITY);
    let v = mant * 2f64.powi(-shift as i32);
    if n.is_negative() {
        -v
    } else {
        v
    }
}

/// Parses "p/q", an integer, or a plain decimal ("-0.303", "1.5e-3") into an
/// exact rational. Decimal strings are read digit by digit, never via `f64`.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let n: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().ok()? };
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let mut q = if scale >= 0 {
        BigRational::from_integer(n * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(n, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        q = -q;
    }
    Some(q)
}

/// Formats a rational as "p/q" (or "p" when integral).
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Rational approximation of an `f64`, exact for the binary value.
pub fn f64_to_rational(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn decimal_strings_are_exact() {
        assert_eq!(parse_rational("0.303"), Some(q(303, 1000)));
        assert_eq!(parse_rational("-0.684"), Some(q(-684, 1000)));
        assert_eq!(parse_rational("7/20"), Some(q(7, 20)));
        assert_eq!(parse_rational("1.5e-3"), Some(q(3, 2000)));
        assert_eq!(parse_rational("2"), Some(q(2, 1)));
        assert_eq!(parse_rational(".5"), Some(q(1, 2)));
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn rounding_and_conversion() {
        assert_eq!(q(5, 2).round_to_integer(), BigInt::from(3));
        assert_eq!(q(-5, 2).round_to_integer(), BigInt::from(-2));
        assert_eq!(q(7, 3).round_to_integer(), BigInt::from(2));
        assert!((rational_to_f64(&q(1, 3)) - 1.0 / 3.0).abs() < 1e-16);
        let huge = BigRational::new(BigInt::from(10).pow(400u32) + 1, BigInt::from(10).pow(400u32));
        assert!((rational_to_f64(&huge) - 1.0).abs() < 1e-15);
    }
}
