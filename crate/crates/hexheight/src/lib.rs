//! Periodic binary quadratic forms, their hexagonal Fourier expansions, and
//! the Bernoulli part of canonical local heights for totally split
//! multiplicative reduction.
//!
//! The objects all hang off one integer triple (a, b, c) with
//! D = ac − b² > 0:
//!
//! * [`quadform`] — Gauss reduction with the recorded GL₂(ℤ) transform, the
//!   linear forms F0..F3, and the arithmetic functions ξ and Δ;
//! * [`periodic_form`] — exact evaluation of
//!   L(x, y) = min over ℤ²-translates of ax² + 2bxy + cy², hexagon/octagon
//!   geometry, and direct torsion-grid averages;
//! * [`fourier`] — the five-case closed form of L̂(m, n) with a midpoint
//!   quadrature oracle, alternate sine rewrites, partial sums, and
//!   degenerate-limit studies;
//! * [`bernoulli`] — the periodic B₂ with its distribution relation and the
//!   Fejér pairwise lower bound;
//! * [`local_height`] — λᴮ = ¼L − ¼L̂(0,0), the exact three-B₂ closed form
//!   of its d-torsion averages, and the two pairwise lower bounds
//!   (Fourier averaging and 6³ pigeonhole);
//! * [`theta`] — the tropical valuation model of the theta function and its
//!   exact translation/invariance identities;
//! * [`global_model`] — multi-place scenarios, the estimate chain with its
//!   Hölder floor, greedy conflict-free selection, and the deterministic
//!   scenario runner.
//!
//! Everything contractual is exact rational arithmetic
//! ([`rational::Rat`]); floating point only enters through sines and cube
//! roots, and every theorem-shaped statement ships with the check that
//! asserts it.
//!
//! ```
//! use hexheight::prelude::*;
//!
//! let t = NormalizedTriple::reduce(&QuadTriple::new(5, 4, 5)?);
//! assert_eq!((t.a(), t.b(), t.c()), (2, 1, 5));
//!
//! // The periodic form at (1/2, 0) drops below the plain form.
//! let p = TorusPoint::new(rat(1, 2), rat(0, 1));
//! assert_eq!(eval_min(&t, &p).value, rat(1, 2));
//!
//! // Its mean value, exactly.
//! assert_eq!(coefficient_zero_exact(&t), rat(29, 54));
//! # Ok::<(), hexheight::Error>(())
//! ```

pub mod bernoulli;
pub mod error;
pub mod fourier;
pub mod global_model;
pub mod local_height;
pub mod periodic_form;
pub mod quadform;
pub mod rational;
pub mod theta;

pub use error::{Error, Result};

/// The most common names in one import.
pub mod prelude {
    pub use crate::bernoulli::{b2, distribution_relation, fejer_lower_bound, RationalGridSet};
    pub use crate::error::{Error, Result};
    pub use crate::fourier::{
        coefficient, coefficient_alternate, coefficient_zero_exact, partial_sum,
        quadrature_oracle, CoefficientCase,
    };
    pub use crate::global_model::{
        compute_d, global_bernoulli_double_average, greedy_torsion_avoid, holder_bound,
        run_scenario, scaled_place, theorem_estimates, ExtensionProfile, GlobalPointSet,
        PlaceModel, ScenarioConfig,
    };
    pub use crate::local_height::{
        avg_d_bernoulli, avg_d_closed_form, bernoulli_local_height, check_torsion_order,
        fourier_avg_lower_bound, lift_to_torus, pigeonhole_subset, IntegerLift, LocalPointSet,
    };
    pub use crate::periodic_form::{
        avg_d_direct, eval_form, eval_min, hexagon_vertices, Region, TorusPoint,
    };
    pub use crate::quadform::{delta, xi, NormalizedTriple, QuadTriple};
    pub use crate::rational::{rat, rat_int, Rat};
    pub use crate::theta::{
        check_lambda_invariance, check_theta_transform, tropical_theta, ValuationMatrix,
        ValuationVector,
    };
}

// Every code block in the guide compiles and runs under `cargo test --doc`.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            mod $name {}
        };
    }

    chapter!(introduction, "../../../book/src/introduction.md");
    chapter!(quadratic_forms, "../../../book/src/quadratic-forms.md");
    chapter!(periodic_form, "../../../book/src/periodic-form.md");
    chapter!(fourier, "../../../book/src/fourier.md");
    chapter!(bernoulli, "../../../book/src/bernoulli.md");
    chapter!(local_heights, "../../../book/src/local-heights.md");
    chapter!(tropical_theta, "../../../book/src/tropical-theta.md");
    chapter!(global_model, "../../../book/src/global-model.md");
    chapter!(cli, "../../../book/src/cli.md");
}
