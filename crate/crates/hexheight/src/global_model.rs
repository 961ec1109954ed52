//! Synthetic multi-place model: ramification profiles, the global Bernoulli
//! double average, its estimate chain, and the supporting selection lemmas.
//!
//! A scenario fixes a finite list of bad places (normalized triples), an
//! extension degree n, and for every place a ramification profile — positive
//! integers e_w summing to n. Moving to a branch of index e multiplies the
//! period valuations by e, so the branch sees the scaled triple (ea, eb, ec)
//! with the *same* torus coordinates; D scales by e², ξ by e and Δ not at
//! all. The global quantity studied is
//!
//! ```text
//! G = (1/n) Σ_places Σ_{branches e} [pair avg over P≠Q of Avg_d λᴮ at (e·triple)],
//! ```
//!
//! bounded below by three per-place estimates (pigeonhole at the designated
//! place's heaviest branch, Fejér averaging at its other branches, Fejér
//! tail at the remaining places), and the estimate sum is in turn bounded
//! by a Hölder-type inequality that exposes the n^(−2/3) decay.

use crate::error::{Error, Result};
use crate::local_height::{
    check_torsion_order, lift_to_torus, pair_average_bernoulli, pigeonhole_subset_points,
    IntegerLift,
};
use crate::periodic_form::TorusPoint;
use crate::quadform::{delta, xi, NormalizedTriple, QuadTriple};
use crate::rational::{rat_big, rat_int, to_f64, Rat};
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// One bad place: a label and its normalized period valuation triple.
#[derive(Debug, Clone)]
pub struct PlaceModel {
    pub id: String,
    pub triple: NormalizedTriple,
}

/// Ramification profile of an extension: for every place, the branch
/// indices e_w, each list summing to the degree n.
#[derive(Debug, Clone)]
pub struct ExtensionProfile {
    n: u32,
    per_place: BTreeMap<String, Vec<u32>>,
}

impl ExtensionProfile {
    pub fn new(n: u32, per_place: BTreeMap<String, Vec<u32>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("extension degree n must be >= 1".into()));
        }
        for (place, branches) in &per_place {
            if branches.is_empty() || branches.iter().any(|&e| e == 0) {
                return Err(Error::InconsistentProfile {
                    place: place.clone(),
                    sum: 0,
                    n: n as u64,
                });
            }
            let sum: u64 = branches.iter().map(|&e| e as u64).sum();
            if sum != n as u64 {
                return Err(Error::InconsistentProfile {
                    place: place.clone(),
                    sum,
                    n: n as u64,
                });
            }
        }
        Ok(Self { n, per_place })
    }

    /// Same single branch e = n at every listed place.
    pub fn single_branch(n: u32, places: &[PlaceModel]) -> Self {
        let per_place = places
            .iter()
            .map(|p| (p.id.clone(), vec![n]))
            .collect();
        Self { n, per_place }
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn branches(&self, place: &str) -> Result<&[u32]> {
        self.per_place
            .get(place)
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::UnknownPlace(place.to_string()))
    }
}

/// Per-place integer lifts, aligned by point index across places.
#[derive(Debug, Clone)]
pub struct GlobalPointSet {
    lifts: BTreeMap<String, Vec<IntegerLift>>,
    len: usize,
}

impl GlobalPointSet {
    pub fn new(lifts: BTreeMap<String, Vec<IntegerLift>>) -> Result<Self> {
        let mut len: Option<usize> = None;
        for (place, list) in &lifts {
            match len {
                None => len = Some(list.len()),
                Some(l) if l != list.len() => {
                    return Err(Error::Precondition(format!(
                        "place {place:?} has {} lifts, expected {l}",
                        list.len()
                    )))
                }
                _ => {}
            }
        }
        let len = len.ok_or_else(|| Error::Precondition("no places in point set".into()))?;
        Ok(Self { lifts, len })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn lifts(&self, place: &str) -> Result<&[IntegerLift]> {
        self.lifts
            .get(place)
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::UnknownPlace(place.to_string()))
    }

    /// Torus coordinates of every point at one place.
    pub fn points_at(&self, place: &PlaceModel) -> Result<Vec<TorusPoint>> {
        Ok(self
            .lifts(&place.id)?
            .iter()
            .map(|&l| lift_to_torus(&place.triple, l))
            .collect())
    }

    /// Subset by point indices, preserving alignment.
    pub fn subset(&self, indices: &[usize]) -> Self {
        let lifts = self
            .lifts
            .iter()
            .map(|(k, v)| (k.clone(), indices.iter().map(|&i| v[i]).collect()))
            .collect();
        Self {
            lifts,
            len: indices.len(),
        }
    }
}

/// d = 2·lcm{Δ(place)}: the smallest even torsion order valid at every place
/// and stable under ramified base change.
pub fn compute_d(places: &[PlaceModel]) -> Result<u32> {
    if places.is_empty() {
        return Err(Error::Precondition("at least one place is required".into()));
    }
    let mut l: u64 = 1;
    for p in places {
        l = l.lcm(&(delta(&p.triple) as u64));
    }
    u32::try_from(2 * l).map_err(|_| Error::Precondition(format!("torsion order 2·lcm = {} overflows", 2 * l)))
}

/// The scaled triple (ea, eb, ec) seen by a branch of ramification index e.
pub fn scaled_place(place: &PlaceModel, e: u32) -> NormalizedTriple {
    place.triple.scale(e)
}

/// The global double average
/// (1/n) Σ_v Σ_{e_w} pair-avg of Avg_d λᴮ at the branch's scaled triple,
/// exact.
pub fn global_bernoulli_double_average(
    places: &[PlaceModel],
    profile: &ExtensionProfile,
    points: &GlobalPointSet,
    d: u32,
) -> Result<Rat> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints {
            required: 2,
            got: points.len(),
        });
    }
    let mut total = Rat::zero();
    for place in places {
        let branches = profile.branches(&place.id)?;
        let pts = points.points_at(place)?;
        for &e in branches {
            let scaled = scaled_place(place, e);
            check_torsion_order(&scaled, d)?;
            total += pair_average_bernoulli(&scaled, &pts, d)?;
        }
    }
    Ok(total / rat_int(profile.degree() as i64))
}

/// The estimate chain constants and per-piece bounds for one scenario.
#[derive(Debug, Clone)]
pub struct TheoremEstimates {
    /// ξ(v0)/(144d²).
    pub c1: Rat,
    /// (α0+γ0+b0)/(24d²D0).
    pub c2: Rat,
    /// ξ(v0)(n − e_{w0})/(24d²n).
    pub c3: Rat,
    /// Σ_{v≠v0} ξ(v)/(24d²).
    pub c4: Rat,
    /// C1·e_{w0}/n: pigeonhole bound for the heaviest branch over v0.
    pub est1: Rat,
    /// (C2/n)·Σ_{w|v0, w≠w0} 1/e_w − C3/(N−1): Fejér bound for the rest of v0.
    pub est2: Rat,
    /// −C4/(N−1): Fejér tail over the other places.
    pub est3: Rat,
    /// est1 + est2 + est3.
    pub est_sum: Rat,
    /// (C1²C2n)^{1/3}/n − (C3+C4)/(N−1): the Hölder floor of the sum.
    pub combined: f64,
    /// Exact per-piece values of the double average, same split.
    pub part1: Rat,
    pub part2: Rat,
    pub part3: Rat,
}

/// Computes the three per-place estimates and their Hölder floor for a
/// designated place v0 and its heaviest branch w0.
pub fn theorem_estimates(
    places: &[PlaceModel],
    profile: &ExtensionProfile,
    points: &GlobalPointSet,
    d: u32,
    v0: &str,
    w0: usize,
) -> Result<TheoremEstimates> {
    let n_points = points.len();
    if n_points < 2 {
        return Err(Error::TooFewPoints {
            required: 2,
            got: n_points,
        });
    }
    let place0 = places
        .iter()
        .find(|p| p.id == v0)
        .ok_or_else(|| Error::UnknownPlace(v0.to_string()))?;
    let branches0 = profile.branches(v0)?;
    let e0 = *branches0.get(w0).ok_or_else(|| Error::NotMaximalBranch {
        place: v0.to_string(),
        index: w0,
    })?;
    if branches0.iter().any(|&e| e > e0) {
        return Err(Error::NotMaximalBranch {
            place: v0.to_string(),
            index: w0,
        });
    }
    let n = profile.degree();
    let dd = rat_big((d as i128) * (d as i128));
    let xi0 = xi(&place0.triple);
    let t0 = &place0.triple;
    let c1 = &xi0 / (rat_int(144) * &dd);
    let c2 = rat_big((t0.alpha() + t0.gamma() + t0.b()) as i128)
        / (rat_int(24) * &dd * rat_big(t0.det() as i128));
    let c3 = &xi0 * rat_int((n - e0) as i64) / (rat_int(24) * &dd * rat_int(n as i64));
    let mut c4 = Rat::zero();
    for p in places {
        if p.id != v0 {
            c4 += xi(&p.triple);
        }
    }
    c4 /= rat_int(24) * &dd;

    let nm1 = rat_int(n_points as i64 - 1);
    let est1 = &c1 * rat_int(e0 as i64) / rat_int(n as i64);
    let inv_sum: Rat = branches0
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != w0)
        .map(|(_, &e)| rat_int(1) / rat_int(e as i64))
        .sum();
    let est2 = &c2 * inv_sum / rat_int(n as i64) - &c3 / &nm1;
    let est3 = -&c4 / &nm1;
    let est_sum = &est1 + &est2 + &est3;
    let combined = (to_f64(&(&c1 * &c1 * &c2)) * n as f64).cbrt() / n as f64
        - to_f64(&((&c3 + &c4) / &nm1));

    // Exact per-piece values of the double average, same split.
    let nq = rat_int(n as i64);
    let pts0 = points.points_at(place0)?;
    let a_v0 = pair_average_bernoulli(t0, &pts0, d)?;
    let part1 = rat_int(e0 as i64) * &a_v0 / &nq;
    let mut part2 = Rat::zero();
    for (i, &e) in branches0.iter().enumerate() {
        if i != w0 {
            // Homogeneity: the branch of index e sees e·λᴮ.
            part2 += rat_int(e as i64) * &a_v0 / &nq;
        }
    }
    let mut part3 = Rat::zero();
    for p in places {
        if p.id == v0 {
            continue;
        }
        let pts = points.points_at(p)?;
        let a_v = pair_average_bernoulli(&p.triple, &pts, d)?;
        let branch_sum: i64 = profile.branches(&p.id)?.iter().map(|&e| e as i64).sum();
        part3 += rat_int(branch_sum) * a_v / &nq;
    }
    Ok(TheoremEstimates {
        c1,
        c2,
        c3,
        c4,
        est1,
        est2,
        est3,
        est_sum,
        combined,
        part1,
        part2,
        part3,
    })
}

/// Outcome of the Hölder-type inequality
/// α·e₀ + β·Σ_{i≥1} 1/eᵢ ≥ (α²βn)^{1/3}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolderReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Checks the inequality for positive reals with e₀ the maximum and
/// n = Σeᵢ, requiring n² ≥ β/α.
pub fn holder_bound(alpha: f64, beta: f64, e: &[f64]) -> Result<HolderReport> {
    if !(alpha > 0.0) || !(beta > 0.0) {
        return Err(Error::Precondition("alpha and beta must be positive".into()));
    }
    if e.is_empty() || e.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::Precondition("e must be a nonempty list of positive reals".into()));
    }
    let n: f64 = e.iter().sum();
    if n * n < beta / alpha {
        return Err(Error::Precondition(format!(
            "need n^2 >= beta/alpha, got n^2 = {} < {}",
            n * n,
            beta / alpha
        )));
    }
    let (imax, _) = e
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).expect("finite"))
        .expect("nonempty");
    let inv_sum: f64 = e
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != imax)
        .map(|(_, &x)| 1.0 / x)
        .sum();
    let lhs = alpha * e[imax] + beta * inv_sum;
    let rhs = (alpha * alpha * beta * n).cbrt();
    let holds = lhs >= rhs - 1e-12 * (1.0 + rhs.abs());
    Ok(HolderReport { lhs, rhs, holds })
}

/// Greedy selection of a conflict-free index subset.
///
/// `hits(anchor, later)` marks conflicts; the oracle promises at most `nu`
/// conflicts per anchor among later surviving indices. Walking the
/// surviving list in order, each anchor discards its conflicting later
/// elements; the final list is pairwise conflict-free and keeps at least
/// ⌈N/(2ν)⌉ indices (each step retires one anchor plus at most ν discards).
pub fn greedy_torsion_avoid(
    n_points: usize,
    hits: &mut dyn FnMut(usize, usize) -> bool,
    nu: usize,
) -> Result<Vec<usize>> {
    if nu < 2 {
        return Err(Error::Precondition(format!("nu must be >= 2, got {nu}")));
    }
    let mut survivors: Vec<usize> = (0..n_points).collect();
    let mut anchor_pos = 0usize;
    while anchor_pos < survivors.len() {
        let anchor = survivors[anchor_pos];
        let mut kept = Vec::with_capacity(survivors.len());
        let mut dropped = 0usize;
        for (pos, &idx) in survivors.iter().enumerate() {
            if pos <= anchor_pos {
                kept.push(idx);
                continue;
            }
            if hits(anchor, idx) {
                dropped += 1;
                if dropped > nu {
                    return Err(Error::OracleViolation {
                        anchor,
                        hits: dropped,
                        nu,
                    });
                }
            } else {
                kept.push(idx);
            }
        }
        survivors = kept;
        anchor_pos += 1;
    }
    Ok(survivors)
}

/// How a scenario builds ramification profiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProfileKind {
    /// Explicit `branches` lists (default: the single branch e = n).
    #[serde(rename = "fixed")]
    Fixed,
    /// Fresh random partition of n at every place and trial.
    #[serde(rename = "random-partition")]
    RandomPartition,
}

/// A scenario file: places, profile generator, point count, optional
/// torsion override, seed and trial count.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub id: String,
    /// Places as integer triples (a, b, c); normalized on load.
    pub places: Vec<[i64; 3]>,
    pub profile: ProfileKind,
    /// For `fixed` profiles: one branch list per place, each summing to n.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branches: Option<Vec<Vec<u32>>>,
    pub n: u32,
    /// Number of points sampled per trial.
    pub points: u32,
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: u32,
    /// Must satisfy the congruence at every place when given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_override: Option<u32>,
    /// Index of the designated place v0 (default 0).
    #[serde(default)]
    pub v0: usize,
}

fn default_trials() -> u32 {
    100
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::ScenarioConfig(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario config serializes")
    }
}

/// One verified trial of a scenario.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioRow {
    pub scenario: String,
    pub trial: u32,
    pub n: u32,
    /// Points sampled before the pigeonhole selection.
    pub points_sampled: u32,
    /// Size of the selected subset (the N of the estimates).
    pub subset_size: u32,
    pub d: u32,
    /// Exact global double average over the subset, as a rational string.
    pub lhs: String,
    pub est1: String,
    pub est2: String,
    pub est3: String,
    pub est_sum: String,
    pub combined: f64,
    /// lhs ≥ est_sum (exact) and est_sum ≥ combined − 1e−9.
    pub holds: bool,
}

/// Random partition of n into positive parts (descending order).
pub fn random_partition(rng: &mut ChaCha12Rng, n: u32) -> Vec<u32> {
    let mut parts = Vec::new();
    let mut rest = n;
    while rest > 0 {
        let e = rng.gen_range(1..=rest);
        parts.push(e);
        rest -= e;
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

/// Samples aligned lifts at every place, coordinates uniform modulo the
/// lcm of the place determinants.
pub fn sample_global_points(
    rng: &mut ChaCha12Rng,
    places: &[PlaceModel],
    count: u32,
) -> Result<GlobalPointSet> {
    let mut modulus: i64 = 1;
    for p in places {
        modulus = modulus.lcm(&p.triple.det());
    }
    let mut lifts: BTreeMap<String, Vec<IntegerLift>> = BTreeMap::new();
    for p in places {
        let list = (0..count)
            .map(|_| IntegerLift {
                u: rng.gen_range(0..modulus),
                v: rng.gen_range(0..modulus),
            })
            .collect();
        lifts.insert(p.id.clone(), list);
    }
    GlobalPointSet::new(lifts)
}

/// Builds the placed models of a config (ids p0, p1, …).
pub fn scenario_places(cfg: &ScenarioConfig) -> Result<Vec<PlaceModel>> {
    if cfg.places.is_empty() {
        return Err(Error::ScenarioConfig("at least one place is required".into()));
    }
    cfg.places
        .iter()
        .enumerate()
        .map(|(i, &[a, b, c])| {
            let t = QuadTriple::new(a, b, c)?;
            Ok(PlaceModel {
                id: format!("p{i}"),
                triple: NormalizedTriple::reduce(&t),
            })
        })
        .collect()
}

/// Runs a scenario to completion. Deterministic given (config, seed).
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Vec<ScenarioRow>> {
    if cfg.n < 1 {
        return Err(Error::ScenarioConfig("n must be >= 1".into()));
    }
    if cfg.points < 2 {
        return Err(Error::ScenarioConfig("points must be >= 2".into()));
    }
    let places = scenario_places(cfg)?;
    if cfg.v0 >= places.len() {
        return Err(Error::ScenarioConfig(format!(
            "v0 index {} out of range ({} places)",
            cfg.v0,
            places.len()
        )));
    }
    let d = match cfg.d_override {
        Some(d) => {
            for p in &places {
                check_torsion_order(&p.triple, d)?;
            }
            d
        }
        None => compute_d(&places)?,
    };
    let fixed_branches: Option<BTreeMap<String, Vec<u32>>> = match (&cfg.profile, &cfg.branches) {
        (ProfileKind::Fixed, Some(lists)) => {
            if lists.len() != places.len() {
                return Err(Error::ScenarioConfig(format!(
                    "{} branch lists for {} places",
                    lists.len(),
                    places.len()
                )));
            }
            Some(
                places
                    .iter()
                    .zip(lists)
                    .map(|(p, l)| (p.id.clone(), l.clone()))
                    .collect(),
            )
        }
        (ProfileKind::Fixed, None) => Some(
            places
                .iter()
                .map(|p| (p.id.clone(), vec![cfg.n]))
                .collect(),
        ),
        (ProfileKind::RandomPartition, _) => None,
    };
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    let v0 = places[cfg.v0].id.clone();
    let mut rows = Vec::with_capacity(cfg.trials as usize);
    for trial in 0..cfg.trials {
        let profile = match &fixed_branches {
            Some(map) => ExtensionProfile::new(cfg.n, map.clone())?,
            None => {
                let map = places
                    .iter()
                    .map(|p| (p.id.clone(), random_partition(&mut rng, cfg.n)))
                    .collect();
                ExtensionProfile::new(cfg.n, map)?
            }
        };
        // Resample until the pigeonhole cell at v0 keeps at least two points.
        let mut selected = None;
        for _ in 0..100 {
            let sample = sample_global_points(&mut rng, &places, cfg.points)?;
            let pts0 = sample.points_at(&places[cfg.v0])?;
            let hole = pigeonhole_subset_points(&places[cfg.v0].triple, &pts0, d)?;
            if hole.subset.len() >= 2 {
                selected = Some((sample.subset(&hole.subset), hole));
                break;
            }
        }
        let (subset, hole) = selected.ok_or_else(|| {
            Error::Precondition("could not sample a pigeonhole cell with two points".into())
        })?;
        if !hole.holds {
            return Err(Error::Precondition(
                "pigeonhole pair bound failed; implementation bug".into(),
            ));
        }
        let branches0 = profile.branches(&v0)?;
        let w0 = branches0
            .iter()
            .enumerate()
            .max_by_key(|&(i, e)| (*e, std::cmp::Reverse(i)))
            .map(|(i, _)| i)
            .expect("nonempty branches");
        let lhs = global_bernoulli_double_average(&places, &profile, &subset, d)?;
        let est = theorem_estimates(&places, &profile, &subset, d, &v0, w0)?;
        let exact_chain = lhs >= est.est_sum;
        let holder_chain = to_f64(&est.est_sum) >= est.combined - 1e-9;
        rows.push(ScenarioRow {
            scenario: cfg.id.clone(),
            trial,
            n: cfg.n,
            points_sampled: cfg.points,
            subset_size: subset.len() as u32,
            d,
            lhs: lhs.to_string(),
            est1: est.est1.to_string(),
            est2: est.est2.to_string(),
            est3: est.est3.to_string(),
            est_sum: est.est_sum.to_string(),
            combined: est.combined,
            holds: exact_chain && holder_chain,
        });
    }
    Ok(rows)
}
