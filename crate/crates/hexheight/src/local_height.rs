//! Bernoulli local heights at a single place and their two lower bounds.
//!
//! A point with integer coordinates (u, v) in the component group has torus
//! coordinates (x, y) = Q⁻¹(u, v) = (cu − bv, −bu + av)/D, and its Bernoulli
//! local height is
//!
//! ```text
//! λᴮ(x, y) = ¼ L(x, y) − ¼ L̂(0, 0),
//! ```
//!
//! normalized so that torsion averages of λᴮ tend to zero. For an even d
//! divisible by 2Δ = 2D/gcd(a,b,c)², the d-torsion average of L collapses to
//! three periodic Bernoulli terms (all coefficients of L̂(dm, dn) vanish off
//! the degenerate lines):
//!
//! ```text
//! Avg_d L(x,y) = L̂(0,0) + α·g₁²/(Dd²)·B₂(d(bx+cy)/g₁)
//!                        + γ·g₂²/(Dd²)·B₂(d(ax+by)/g₂)
//!                        + b·g₃²/(Dd²)·B₂(d(αx−γy)/g₃),
//! ```
//!
//! with g₁ = gcd(c,b), g₂ = gcd(a,b), g₃ = gcd(α,γ). Feeding the Fejér
//! estimate into each B₂ term bounds pairwise averages from below; a
//! pigeonhole argument on the three residues produces a subset whose pairs
//! all satisfy Avg_d λᴮ(P−Q) ≥ ξ/(144d²).

use crate::bernoulli::b2;
use crate::error::{Error, Result};
use crate::fourier::coefficient_zero_exact;
use crate::periodic_form::{eval_min, TorusPoint};
use crate::quadform::{delta, gcd, xi, NormalizedTriple};
use crate::rational::{frac, rat_big, rat_int, Rat};
use num_traits::Zero;

/// Integer coordinates (u, v) of a point in the component group ℤ²/Qℤ².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct IntegerLift {
    pub u: i64,
    pub v: i64,
}

/// Unreduced torus coordinates (cu − bv, −bu + av)/D of a lift.
///
/// Before reduction they satisfy bx + cy = v, ax + by = u and
/// αx − γy = u − v exactly.
pub fn torus_coords_raw(t: &NormalizedTriple, lift: IntegerLift) -> (Rat, Rat) {
    let d = rat_big(t.det() as i128);
    let x = rat_big(t.c() as i128 * lift.u as i128 - t.b() as i128 * lift.v as i128) / &d;
    let y = rat_big(-(t.b() as i128) * lift.u as i128 + t.a() as i128 * lift.v as i128) / &d;
    (x, y)
}

/// Torus point of a lift, reduced to the centered square.
pub fn lift_to_torus(t: &NormalizedTriple, lift: IntegerLift) -> TorusPoint {
    let (x, y) = torus_coords_raw(t, lift);
    TorusPoint::new(x, y)
}

/// A place together with a list of *distinct* points given by integer lifts.
#[derive(Debug, Clone)]
pub struct LocalPointSet {
    place: NormalizedTriple,
    lifts: Vec<IntegerLift>,
    points: Vec<TorusPoint>,
}

impl LocalPointSet {
    /// Derives torus coordinates and rejects lifts that collide modulo Qℤ².
    pub fn new(place: NormalizedTriple, lifts: Vec<IntegerLift>) -> Result<Self> {
        let points: Vec<TorusPoint> = lifts.iter().map(|&l| lift_to_torus(&place, l)).collect();
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                if points[i] == points[j] {
                    return Err(Error::DuplicatePoints { first: i, second: j });
                }
            }
        }
        Ok(Self {
            place,
            lifts,
            points,
        })
    }

    pub fn place(&self) -> &NormalizedTriple {
        &self.place
    }

    pub fn lifts(&self) -> &[IntegerLift] {
        &self.lifts
    }

    pub fn points(&self) -> &[TorusPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// The two exact halves of the Bernoulli local height at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliHeight {
    /// ¼ L(x, y).
    pub quarter_min: Rat,
    /// ¼ L̂(0, 0), the normalization constant of the place.
    pub quarter_mean: Rat,
    /// λᴮ = quarter_min − quarter_mean.
    pub value: Rat,
}

/// λᴮ(p) = ¼L(p) − ¼L̂(0,0), exact.
pub fn bernoulli_local_height(t: &NormalizedTriple, p: &TorusPoint) -> BernoulliHeight {
    let quarter_min = eval_min(t, p).value / rat_int(4);
    let quarter_mean = coefficient_zero_exact(t) / rat_int(4);
    let value = &quarter_min - &quarter_mean;
    BernoulliHeight {
        quarter_min,
        quarter_mean,
        value,
    }
}

/// Checks d ≥ 1 and d ≡ 0 (mod 2Δ); every valid d is even.
pub fn check_torsion_order(t: &NormalizedTriple, d: u32) -> Result<()> {
    let required = 2 * delta(t) as u64;
    if d == 0 || (d as u64) % required != 0 {
        return Err(Error::InvalidTorsionOrder { d: d as u64, required });
    }
    Ok(())
}

/// The three B₂ arguments of a point: d(bx+cy)/g₁, d(ax+by)/g₂, d(αx−γy)/g₃.
fn b2_arguments(t: &NormalizedTriple, p: &TorusPoint, d: u32) -> [Rat; 3] {
    let (a, b, c) = (rat_int(t.a()), rat_int(t.b()), rat_int(t.c()));
    let (al, ga) = (rat_int(t.alpha()), rat_int(t.gamma()));
    let df = rat_int(d as i64);
    let g1 = rat_int(gcd(t.c(), t.b()));
    let g2 = rat_int(gcd(t.a(), t.b()));
    let g3 = rat_int(gcd(t.alpha(), t.gamma()));
    [
        &df * (&b * p.x() + &c * p.y()) / g1,
        &df * (&a * p.x() + &b * p.y()) / g2,
        &df * (&al * p.x() - &ga * p.y()) / g3,
    ]
}

/// Closed-form d-torsion average of L via the three-B₂ identity, exact.
pub fn avg_d_closed_form(t: &NormalizedTriple, p: &TorusPoint, d: u32) -> Result<Rat> {
    check_torsion_order(t, d)?;
    let dd = rat_big(t.det() as i128 * (d as i128) * (d as i128));
    let args = b2_arguments(t, p, d);
    let g1 = gcd(t.c(), t.b()) as i128;
    let g2 = gcd(t.a(), t.b()) as i128;
    let mut sum = coefficient_zero_exact(t);
    sum += rat_big(t.alpha() as i128 * g1 * g1) / &dd * b2(&args[0]);
    sum += rat_big(t.gamma() as i128 * g2 * g2) / &dd * b2(&args[1]);
    if t.b() != 0 {
        let g3 = gcd(t.alpha(), t.gamma()) as i128;
        sum += rat_big(t.b() as i128 * g3 * g3) / &dd * b2(&args[2]);
    }
    Ok(sum)
}

/// d-torsion average of λᴮ at p: ¼(Avg_d L(p) − L̂(0,0)), exact.
pub fn avg_d_bernoulli(t: &NormalizedTriple, p: &TorusPoint, d: u32) -> Result<Rat> {
    Ok((avg_d_closed_form(t, p, d)? - coefficient_zero_exact(t)) / rat_int(4))
}

/// Average of Avg_d λᴮ(P − Q) over ordered distinct pairs of `points`.
///
/// Repeated points are allowed (distinct abstract points may share local
/// coordinates); the lower bounds below survive multisets.
pub fn pair_average_bernoulli(t: &NormalizedTriple, points: &[TorusPoint], d: u32) -> Result<Rat> {
    let n = points.len();
    if n < 2 {
        return Err(Error::TooFewPoints { required: 2, got: n });
    }
    check_torsion_order(t, d)?;
    let mut sum = Rat::zero();
    for i in 0..n {
        for j in (i + 1)..n {
            // λᴮ is even, so ordered and unordered pair averages agree.
            sum += avg_d_bernoulli(t, &points[i].sub(&points[j]), d)?;
        }
    }
    Ok(sum * rat_int(2) / rat_int((n * n - n) as i64))
}

/// Outcome of the pairwise Fourier-averaging lower bound.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierAvgBound {
    /// Avg over ordered distinct pairs (P, Q) of Avg_d λᴮ(P − Q + T).
    pub lhs: Rat,
    /// (1/24d²)·((α+γ+b)/D − ξ/(N−1)).
    pub rhs: Rat,
    /// lhs ≥ rhs; theorem-backed, so false flags an implementation bug.
    pub holds: bool,
}

/// The closed pairwise lower bound constant for a place with N points.
pub fn fourier_avg_rhs(t: &NormalizedTriple, n_points: usize, d: u32) -> Rat {
    let dd = rat_big((d as i128) * (d as i128) * 24);
    let linear = rat_big((t.alpha() + t.gamma() + t.b()) as i128) / rat_big(t.det() as i128);
    (linear - xi(t) / rat_int(n_points as i64 - 1)) / dd
}

/// Pairwise torsion-averaged λᴮ against its Fejér-derived lower bound.
pub fn fourier_avg_lower_bound(s: &LocalPointSet, d: u32) -> Result<FourierAvgBound> {
    let lhs = pair_average_bernoulli(&s.place, &s.points, d)?;
    let rhs = fourier_avg_rhs(&s.place, s.len(), d);
    let holds = lhs >= rhs;
    Ok(FourierAvgBound { lhs, rhs, holds })
}

/// Result of the 6³-cube pigeonhole selection.
#[derive(Debug, Clone, PartialEq)]
pub struct PigeonholeOutcome {
    /// Indices of the largest cell, in input order. Size ≥ ⌈N/216⌉.
    pub subset: Vec<usize>,
    /// The cube the subset lives in, axis residues in {0..5}.
    pub cube: [u8; 3],
    /// ξ/(144d²): every distinct pair of the subset satisfies
    /// Avg_d λᴮ(P−Q) ≥ bound.
    pub bound: Rat,
    /// Smallest pairwise average over the subset (None if < 2 points).
    pub min_pair_average: Option<Rat>,
    /// min_pair_average ≥ bound (vacuously true for singletons).
    pub holds: bool,
}

/// Pigeonhole selection on raw points (repeats allowed).
pub fn pigeonhole_subset_points(
    t: &NormalizedTriple,
    points: &[TorusPoint],
    d: u32,
) -> Result<PigeonholeOutcome> {
    if points.is_empty() {
        return Err(Error::TooFewPoints { required: 1, got: 0 });
    }
    check_torsion_order(t, d)?;
    // Half-open cubes [k/6, (k+1)/6) on each axis of (ℝ/ℤ)³.
    let cube_of = |p: &TorusPoint| -> [u8; 3] {
        let args = b2_arguments(t, p, d);
        let mut cube = [0u8; 3];
        for (i, arg) in args.iter().enumerate() {
            let cell = (frac(arg) * rat_int(6)).floor();
            cube[i] = cell.to_integer().try_into().expect("cell in 0..6");
        }
        cube
    };
    let mut cells: std::collections::BTreeMap<[u8; 3], Vec<usize>> = Default::default();
    for (i, p) in points.iter().enumerate() {
        cells.entry(cube_of(p)).or_default().push(i);
    }
    let (cube, subset) = cells
        .into_iter()
        .max_by_key(|(key, v)| (v.len(), std::cmp::Reverse(*key)))
        .expect("nonempty");
    let bound = xi(t) / rat_big(144 * (d as i128) * (d as i128));
    let mut min_pair: Option<Rat> = None;
    for (ii, &i) in subset.iter().enumerate() {
        for &j in &subset[ii + 1..] {
            let avg = avg_d_bernoulli(t, &points[i].sub(&points[j]), d)?;
            if min_pair.as_ref().map_or(true, |m| avg < *m) {
                min_pair = Some(avg);
            }
        }
    }
    let holds = min_pair.as_ref().map_or(true, |m| *m >= bound);
    Ok(PigeonholeOutcome {
        subset,
        cube,
        bound,
        min_pair_average: min_pair,
        holds,
    })
}

/// Pigeonhole selection on a distinct point set.
pub fn pigeonhole_subset(s: &LocalPointSet, d: u32) -> Result<PigeonholeOutcome> {
    pigeonhole_subset_points(&s.place, &s.points, d)
}
