//! Bounds and exact certificates for the monic integer transfinite diameter
//! `t_M(I)` of real intervals.
//!
//! The crate is organised bottom-up:
//!
//! * [`poly`], [`resultant`], [`factor`], [`obstruction`]: exact integer
//!   polynomial arithmetic.
//! * [`ball`], [`roots`]: dyadic ball arithmetic, Sturm sequences, root
//!   isolation and certified evaluation.
//! * [`robinson`]: enumeration of integer polynomials with all roots in a box.
//! * [`lll`], [`lp`], [`cheb`]: candidate-factor discovery, weight
//!   optimisation and exact attainment certificates.
//! * [`bounds`]: cover systems and the `L-(t)` / `L+(t)` envelopes.
//! * [`special`]: Farey intervals, Pell families, the `P_n` family, `gamma(b)`
//!   and the auxiliary transcendental constants.
//! * [`padic`]: the valuation condition and critical-polynomial witnesses.
//! * [`io`], [`fixtures`]: file formats and the shipped tables.

pub mod ball;
pub mod bounds;
pub mod cheb;
pub mod error;
pub mod factor;
pub mod fixtures;
pub mod io;
pub mod lll;
pub mod lp;
pub mod obstruction;
pub mod padic;
pub mod poly;
pub mod resultant;
pub mod robinson;
pub mod roots;
pub mod scalar;
pub mod special;

pub use ball::{Ball, Dyadic};
pub use error::{Error, Result};
pub use obstruction::ObstructionValue;
pub use poly::Poly;
pub use roots::{RatInterval, RootBox};
pub use scalar::{Field, Scalar};

/// Arbitrary-precision integer.
pub type Int = num_bigint::BigInt;
/// Exact rational.
pub type Rational = num_rational::BigRational;
/// Dense integer-coefficient polynomial.
pub type IntPoly = Poly<Int>;
/// Dense rational-coefficient polynomial.
pub type RatPoly = Poly<Rational>;
/// Polynomial with `f64` coefficients, used for numeric screening.
pub type FloatPoly = Poly<f64>;
/// Certified numeric enclosure.
pub type Enclosure = Ball;
