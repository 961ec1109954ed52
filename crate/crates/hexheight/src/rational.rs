//! Exact rational arithmetic helpers.
//!
//! Everything downstream that is tested for *exact* equality (periodic
//! minima, Bernoulli averages, tropical identities) runs on
//! [`BigRational`]; floating point enters only through `sin`, `cos` and
//! cube roots.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number used throughout the crate.
pub type Rat = BigRational;

/// Rational from a numerator/denominator pair.
pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational from a (possibly large) integer.
pub fn rat_big(n: i128) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Rat) -> Rat {
    x - x.floor()
}

/// Representative of `x` modulo 1 in the centered interval `[-1/2, 1/2)`.
pub fn centered(x: &Rat) -> Rat {
    x - (x + rat(1, 2)).floor()
}

/// `x` as f64 (panics only on denormal extremes far outside this crate's ranges).
pub fn to_f64(x: &Rat) -> f64 {
    x.to_f64().expect("rational out of f64 range")
}

/// True if `x` is an integer.
pub fn is_integer(x: &Rat) -> bool {
    x.denom().is_one()
}

/// Floor of `x` as i64.
pub fn floor_i64(x: &Rat) -> i64 {
    x.floor().to_integer().to_i64().expect("floor out of i64 range")
}

/// Nearest integer to `x` (ties round toward +infinity), as i64.
pub fn round_i64(x: &Rat) -> i64 {
    floor_i64(&(x + rat(1, 2)))
}

/// Sign of `x` as -1, 0, or 1.
pub fn sign(x: &Rat) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Compensated (Kahan) accumulator for long float sums.
///
/// Used by the quadrature oracle and the Fourier partial sums so results do
/// not depend on summation chunking.
#[derive(Debug, Clone, Copy, Default)]
pub struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let y = value - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum
    }
}
