//! Exact obstruction values `a^(-1/d)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::ball::Ball;
use crate::error::{Error, Result};
use crate::poly::Poly;

/// The positive real `base^(-1/root_index)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ObstructionValue {
    #[serde(with = "crate::io::bigint_string")]
    pub base: BigInt,
    pub root_index: u32,
}

impl ObstructionValue {
    pub fn new(base: BigInt, root_index: u32) -> Result<Self> {
        if !base.is_positive() || root_index == 0 {
            return Err(Error::precondition("obstruction value needs a >= 1 and d >= 1"));
        }
        Ok(ObstructionValue { base, root_index })
    }

    /// Value `|a_d|^(-1/d)` of a polynomial.
    pub fn of_poly(q: &Poly<BigInt>) -> Result<Self> {
        if q.degree() == 0 {
            return Err(Error::precondition("obstruction of a constant"));
        }
        Self::new(q.lead().abs(), q.degree() as u32)
    }

    /// `1/n` as the obstruction value `(n, 1)`.
    pub fn reciprocal(n: u64) -> Self {
        ObstructionValue { base: BigInt::from(n), root_index: 1 }
    }

    /// Compares with a positive rational `t = p/q`: `a^(-1/d) > t` iff
    /// `a p^d < q^d`.
    pub fn cmp_rational(&self, t: &BigRational) -> Ordering {
        if !t.is_positive() {
            return Ordering::Greater;
        }
        let d = self.root_index as usize;
        let lhs = &self.base * num_traits::pow(t.numer().clone(), d);
        let rhs = num_traits::pow(t.denom().clone(), d);
        rhs.cmp(&lhs)
    }

    pub fn exceeds(&self, t: &BigRational) -> bool {
        self.cmp_rational(t) == Ordering::Greater
    }

    /// Exact rational value when `a` is a perfect `d`-th power.
    pub fn as_rational(&self) -> Option<BigRational> {
        let r = num_integer::Roots::nth_root(&self.base, self.root_index);
        (num_traits::pow(r.clone(), self.root_index as usize) == self.base).then(|| BigRational::new(BigInt::one(), r))
    }

    /// `ln(value) = -ln(a)/d` as a ball.
    pub fn ln_ball(&self, prec: u32) -> Ball {
        let l = Ball::ln_rational(&BigRational::from_integer(self.base.clone()), prec + 8);
        (-l).div_int(self.root_index as i64).with_prec(prec)
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.base.to_f64().unwrap_or(f64::INFINITY);
        a.powf(-1.0 / self.root_index as f64)
    }
}

impl PartialOrd for ObstructionValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ObstructionValue {
    /// `a^(-1/d)` vs `c^(-1/e)`: compare `a^e` with `c^d`, reversed.
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = num_traits::pow(self.base.clone(), other.root_index as usize);
        let rhs = num_traits::pow(other.base.clone(), self.root_index as usize);
        rhs.cmp(&lhs)
    }
}

impl fmt::Display for ObstructionValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.root_index, self.as_rational()) {
            (_, Some(r)) => write!(f, "{}", crate::scalar::format_rational(&r)),
            (d, None) => write!(f, "{}^(-1/{})", self.base, d),
        }
    }
}
