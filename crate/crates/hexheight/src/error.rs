//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A quadratic form triple (a, b, c) failed `a > 0`, `c > 0` or `ac - b² > 0`.
    #[error("triple ({a}, {b}, {c}) is not positive definite (need a > 0, c > 0, ac - b^2 > 0)")]
    NotPositiveDefinite { a: i64, b: i64, c: i64 },

    /// A torsion order does not satisfy its congruence requirement.
    #[error("torsion order d = {d} must be a positive multiple of 2*Delta = {required}")]
    InvalidTorsionOrder { d: u64, required: u64 },

    /// A point set contained two lifts mapping to the same torus point.
    #[error("point set contains duplicate torus points (lifts {first} and {second})")]
    DuplicatePoints { first: usize, second: usize },

    /// A point set was too small for a pairwise average.
    #[error("need at least {required} points, got {got}")]
    TooFewPoints { required: usize, got: usize },

    /// A rational grid set element had a denominator not dividing R.
    #[error("grid element {element} does not lie in (1/{r})Z")]
    DenominatorMismatch { element: String, r: u32 },

    /// The alternate coefficient formulas are only defined off the degenerate lines.
    #[error("index ({m}, {n}) is degenerate (F1*F2*F3 = 0); alternate forms are undefined")]
    DegenerateIndex { m: i64, n: i64 },

    /// A limit-consistency sequence does not drive any linear form to zero.
    #[error("no linear form vanishes at the limit triple for index ({m}, {n})")]
    NoVanishingForm { m: i64, n: i64 },

    /// A limit-consistency sequence is not monotone or touches the degenerate locus.
    #[error("sequence element {index}: {reason}")]
    BadSequence { index: usize, reason: String },

    /// A valuation matrix failed symmetry or positive definiteness.
    #[error("valuation matrix is not symmetric positive definite: {0}")]
    BadValuationMatrix(String),

    /// Vector/matrix dimensions disagree.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A ramification profile is inconsistent with the extension degree.
    #[error("profile for place {place} sums to {sum}, expected n = {n}")]
    InconsistentProfile { place: String, sum: u64, n: u64 },

    /// A referenced place id does not exist.
    #[error("unknown place id {0:?}")]
    UnknownPlace(String),

    /// The designated branch is not one of maximal ramification index.
    #[error("branch {index} of place {place} is not of maximal ramification index")]
    NotMaximalBranch { place: String, index: usize },

    /// The conflict oracle exceeded its promised bound.
    #[error("conflict oracle reported {hits} conflicts for anchor {anchor}, bound is nu = {nu}")]
    OracleViolation { anchor: usize, hits: usize, nu: usize },

    /// Generic precondition failure with context.
    #[error("{0}")]
    Precondition(String),

    /// Scenario configuration could not be parsed.
    #[error("scenario config: {0}")]
    ScenarioConfig(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
