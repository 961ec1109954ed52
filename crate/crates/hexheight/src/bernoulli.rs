//! The periodic second Bernoulli polynomial and its averaging toolkit.
//!
//! B₂(x) = {x}² − {x} + 1/6 with {x} the fractional part. Its Fourier
//! expansion is (1/2π²) Σ'_k e(kx)/k², which gives two workhorse facts used
//! by the local height bounds:
//!
//! * the distribution relation (1/N) Σ_j B₂(x + j/N) = B₂(Nx)/N², exact on
//!   rationals;
//! * a Fejér-kernel lower bound for pairwise averages over a set
//!   T ⊂ (1/R)ℤ of N points:
//!   Avg_{s≠t} B₂(s−t) ≥ 1/(6R²) − 1/(6(N−1)).

use crate::error::{Error, Result};
use crate::rational::{frac, rat, rat_int, to_f64, Kahan, Rat};
use num_traits::Zero;

/// B₂(x) = {x}² − {x} + 1/6, exact. Periodic with period 1 and even.
pub fn b2(x: &Rat) -> Rat {
    let f = frac(x);
    &f * &f - &f + rat(1, 6)
}

/// Truncated Fourier expansion (1/2π²) Σ_{0<|k|≤K} e(kx)/k², evaluated in f64.
pub fn b2_fourier_partial(x: &Rat, terms: u32) -> f64 {
    let xf = to_f64(x);
    let mut acc = Kahan::new();
    for k in 1..=terms {
        let kf = k as f64;
        acc.add((std::f64::consts::TAU * kf * xf).cos() / (kf * kf));
    }
    acc.total() / (std::f64::consts::PI * std::f64::consts::PI)
}

/// Both sides of the distribution relation at level N:
/// lhs = (1/N) Σ_{j<N} B₂(x + j/N), rhs = B₂(Nx)/N². They are always equal.
pub fn distribution_relation(x: &Rat, n: u32) -> Result<(Rat, Rat)> {
    if n == 0 {
        return Err(Error::Precondition("distribution level N must be >= 1".into()));
    }
    let mut lhs = Rat::zero();
    for j in 0..n {
        lhs += b2(&(x + rat(j as i64, n as i64)));
    }
    lhs /= rat_int(n as i64);
    let rhs = b2(&(x * rat_int(n as i64))) / rat_int((n as i64) * (n as i64));
    Ok((lhs, rhs))
}

/// A set of distinct rationals modulo 1 whose denominators divide R.
#[derive(Debug, Clone)]
pub struct RationalGridSet {
    r: u32,
    elements: Vec<Rat>,
}

impl RationalGridSet {
    /// Validates denominators and distinctness modulo 1.
    pub fn new(r: u32, elements: Vec<Rat>) -> Result<Self> {
        if r == 0 {
            return Err(Error::Precondition("grid resolution R must be >= 1".into()));
        }
        let mut reduced: Vec<Rat> = Vec::with_capacity(elements.len());
        for e in &elements {
            let scaled = e * rat_int(r as i64);
            if !scaled.is_integer() {
                return Err(Error::DenominatorMismatch {
                    element: e.to_string(),
                    r,
                });
            }
            reduced.push(frac(e));
        }
        let mut sorted = reduced.clone();
        sorted.sort();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Precondition(format!(
                    "grid elements are not distinct modulo 1 (duplicate {})",
                    w[0]
                )));
            }
        }
        Ok(Self {
            r,
            elements: reduced,
        })
    }

    pub fn resolution(&self) -> u32 {
        self.r
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Rat] {
        &self.elements
    }
}

/// Result of the Fejér pairwise lower bound.
#[derive(Debug, Clone, PartialEq)]
pub struct FejerReport {
    /// Avg over ordered distinct pairs of B₂(s − t), exact.
    pub average: Rat,
    /// 1/(6R²) − 1/(6(N−1)), exact.
    pub bound: Rat,
    /// average ≥ bound. Theorem-backed: false indicates an implementation bug.
    pub holds: bool,
}

/// Pairwise average of B₂ over a rational grid set against its Fejér bound.
pub fn fejer_lower_bound(set: &RationalGridSet) -> Result<FejerReport> {
    let n = set.len();
    if n < 2 {
        return Err(Error::TooFewPoints { required: 2, got: n });
    }
    let mut sum = Rat::zero();
    for i in 0..n {
        for j in (i + 1)..n {
            sum += b2(&(&set.elements[i] - &set.elements[j]));
        }
    }
    // B₂ is even, so the ordered sum is twice the unordered one.
    let pairs = rat_int((n * n - n) as i64);
    let average = sum * rat_int(2) / pairs;
    let r = set.resolution() as i64;
    let bound = rat(1, 6 * r * r) - rat(1, 6 * (n as i64 - 1));
    let holds = average >= bound;
    Ok(FejerReport {
        average,
        bound,
        holds,
    })
}
