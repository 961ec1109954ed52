//! Tropical model of the non-archimedean theta function.
//!
//! Over a complete non-archimedean field the theta series attached to a
//! period matrix q is Σ_m (ᵗm⋆q⋆m)(ᵗm⋆u); valuations of its terms are the
//! exact quadratic expressions ᵗmQm + ᵗm·v(u) with Q = v(q) positive
//! definite. The tropicalization replaces v(θ) by the minimum term
//!
//! ```text
//! tropθ(Q, w) = min over m ∈ ℤᵍ of ᵗmQm + ᵗm·w,      w = v(u),
//! ```
//!
//! which satisfies the same translation law as the true valuation,
//! exactly and with exact rational arithmetic:
//!
//! ```text
//! tropθ(Q, w + 2Qn) = tropθ(Q, w) − ᵗnQn − ᵗn·w,
//! ```
//!
//! so the height candidate tropθ(Q, w) + ¼ᵗwQ⁻¹w is invariant under the
//! period translations w ↦ w + 2Qn. The true valuation equals the tropical
//! minimum whenever the minimizer is unique (ultrametric equality); tie
//! multiplicity is reported for diagnostics.

use crate::error::{Error, Result};
use crate::rational::{rat_int, round_i64, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// A symmetric positive definite g×g matrix of rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct ValuationMatrix {
    entries: Vec<Vec<Rat>>,
    g: usize,
}

/// A vector of g rational valuations.
#[derive(Debug, Clone, PartialEq)]
pub struct ValuationVector(pub Vec<Rat>);

impl ValuationVector {
    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

fn dot(u: &[Rat], v: &[Rat]) -> Rat {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

impl ValuationMatrix {
    /// Validates symmetry and positive definiteness (all leading principal
    /// minors positive, computed exactly).
    pub fn new(entries: Vec<Vec<Rat>>) -> Result<Self> {
        let g = entries.len();
        if g == 0 || entries.iter().any(|row| row.len() != g) {
            return Err(Error::BadValuationMatrix("matrix must be square and nonempty".into()));
        }
        for i in 0..g {
            for j in (i + 1)..g {
                if entries[i][j] != entries[j][i] {
                    return Err(Error::BadValuationMatrix(format!(
                        "entries ({i},{j}) and ({j},{i}) differ"
                    )));
                }
            }
        }
        let m = Self { entries, g };
        for k in 1..=g {
            if !m.leading_minor(k).is_positive() {
                return Err(Error::BadValuationMatrix(format!(
                    "leading {k}x{k} minor is not positive"
                )));
            }
        }
        Ok(m)
    }

    /// Convenience 2×2 constructor from a normalized integer triple's data.
    pub fn from_triple(a: i64, b: i64, c: i64) -> Result<Self> {
        Self::new(vec![
            vec![rat_int(a), rat_int(b)],
            vec![rat_int(b), rat_int(c)],
        ])
    }

    pub fn dim(&self) -> usize {
        self.g
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i][j]
    }

    fn leading_minor(&self, k: usize) -> Rat {
        let sub: Vec<Vec<Rat>> = self.entries[..k]
            .iter()
            .map(|row| row[..k].to_vec())
            .collect();
        det(sub)
    }

    pub fn det(&self) -> Rat {
        self.leading_minor(self.g)
    }

    /// Q v for a vector v.
    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.g);
        self.entries.iter().map(|row| dot(row, v)).collect()
    }

    /// ᵗv Q v.
    pub fn quad(&self, v: &[Rat]) -> Rat {
        dot(v, &self.mul_vec(v))
    }

    /// Exact inverse by Gauss–Jordan elimination.
    pub fn inverse(&self) -> Vec<Vec<Rat>> {
        let g = self.g;
        let mut aug: Vec<Vec<Rat>> = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.extend((0..g).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
                r
            })
            .collect();
        for col in 0..g {
            let pivot_row = (col..g)
                .find(|&r| !aug[r][col].is_zero())
                .expect("positive definite matrix is invertible");
            aug.swap(col, pivot_row);
            let pivot = aug[col][col].clone();
            for x in &mut aug[col] {
                *x /= &pivot;
            }
            for r in 0..g {
                if r != col && !aug[r][col].is_zero() {
                    let factor = aug[r][col].clone();
                    let (head, tail) = if r < col {
                        let (a, b) = aug.split_at_mut(col);
                        (&mut a[r], &b[0])
                    } else {
                        let (a, b) = aug.split_at_mut(r);
                        (&mut b[0], &a[col])
                    };
                    for (x, y) in head.iter_mut().zip(tail.iter()) {
                        *x -= &factor * y;
                    }
                }
            }
        }
        aug.into_iter().map(|row| row[g..].to_vec()).collect()
    }
}

/// Determinant by cofactor expansion (g stays tiny here).
fn det(m: Vec<Vec<Rat>>) -> Rat {
    let g = m.len();
    if g == 1 {
        return m[0][0].clone();
    }
    let mut total = Rat::zero();
    for j in 0..g {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Rat>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * det(minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// The tropical minimum with its attaining lattice points.
#[derive(Debug, Clone, PartialEq)]
pub struct TropicalTheta {
    pub value: Rat,
    /// All m attaining the minimum inside the provably sufficient window.
    pub minimizers: Vec<Vec<i64>>,
    /// Number of tied minimizers (1 = ultrametric equality holds).
    pub ties: usize,
}

fn f_value(q: &ValuationMatrix, w: &[Rat], m: &[i64]) -> Rat {
    let mv: Vec<Rat> = m.iter().map(|&x| rat_int(x)).collect();
    q.quad(&mv) + dot(&mv, w)
}

/// min over m ∈ ℤᵍ of ᵗmQm + ᵗm·w, exact.
///
/// The search box is centered at the real minimizer m* = −Q⁻¹w/2. Any m
/// with |m_i − m*_i| > r_i for some axis, where
/// r_i² ≥ (incumbent − f(m*))·(Q⁻¹)_{ii}, satisfies
/// ᵗ(m−m*)Q(m−m*) ≥ (m_i−m*_i)²/(Q⁻¹)_{ii} > incumbent − f(m*) and is
/// strictly worse than the incumbent, so the box is provably sufficient.
pub fn tropical_theta(q: &ValuationMatrix, w: &ValuationVector) -> Result<TropicalTheta> {
    let g = q.dim();
    if w.dim() != g {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {g}x{g} but vector has length {}",
            w.dim()
        )));
    }
    let inv = q.inverse();
    // m* = −Q⁻¹ w / 2 and f(m*) = −¼ ᵗw Q⁻¹ w.
    let mstar: Vec<Rat> = inv
        .iter()
        .map(|row| -dot(row, &w.0) / rat_int(2))
        .collect();
    let fmin = q.quad(&mstar) + dot(&mstar, &w.0);
    let center: Vec<i64> = mstar.iter().map(round_i64).collect();
    let incumbent = f_value(q, &w.0, &center);
    let gap = &incumbent - &fmin;
    debug_assert!(!gap.is_negative());
    let mut lo = Vec::with_capacity(g);
    let mut hi = Vec::with_capacity(g);
    for i in 0..g {
        let ri = isqrt_ceil(&(&gap * &inv[i][i]));
        lo.push(round_i64(&mstar[i]) - ri - 1);
        hi.push(round_i64(&mstar[i]) + ri + 1);
    }
    let mut best = incumbent;
    let mut mins: Vec<Vec<i64>> = vec![center];
    let mut cursor = lo.clone();
    'outer: loop {
        let v = f_value(q, &w.0, &cursor);
        if v < best {
            best = v;
            mins = vec![cursor.clone()];
        } else if v == best && !mins.contains(&cursor) {
            mins.push(cursor.clone());
        }
        // Odometer increment over the box.
        for i in 0..g {
            cursor[i] += 1;
            if cursor[i] <= hi[i] {
                continue 'outer;
            }
            cursor[i] = lo[i];
        }
        break;
    }
    mins.sort();
    mins.dedup();
    // Drop stale center if it lost.
    let mins: Vec<Vec<i64>> = mins
        .into_iter()
        .filter(|m| f_value(q, &w.0, m) == best)
        .collect();
    let ties = mins.len();
    Ok(TropicalTheta {
        value: best,
        minimizers: mins,
        ties,
    })
}

/// Smallest nonnegative integer r with r² ≥ x (x ≥ 0), as i64.
fn isqrt_ceil(x: &Rat) -> i64 {
    if x.is_negative() || x.is_zero() {
        return 0;
    }
    let ceiled: BigInt = x.ceil().to_integer();
    let mut r = ceiled.sqrt();
    if &r * &r < ceiled {
        r += 1;
    }
    i64::try_from(r).expect("window radius fits i64")
}

/// Both sides of the translation law v(θ(u·(q⋆2n))) = v(θ(u)) − ᵗnQn − ᵗn·v(u).
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaTransformCheck {
    pub lhs: Rat,
    pub rhs: Rat,
    pub equal: bool,
}

/// Checks the translation law exactly (it holds by reindexing m ↦ m + n).
pub fn check_theta_transform(
    q: &ValuationMatrix,
    w: &ValuationVector,
    n: &[i64],
) -> Result<ThetaTransformCheck> {
    if n.len() != q.dim() {
        return Err(Error::DimensionMismatch(format!(
            "translation vector has length {}, expected {}",
            n.len(),
            q.dim()
        )));
    }
    let nv: Vec<Rat> = n.iter().map(|&x| rat_int(x)).collect();
    let qn = q.mul_vec(&nv);
    let shifted: Vec<Rat> = w
        .0
        .iter()
        .zip(&qn)
        .map(|(wi, qi)| wi + qi * rat_int(2))
        .collect();
    let lhs = tropical_theta(q, &ValuationVector(shifted))?.value;
    let rhs = tropical_theta(q, w)?.value - q.quad(&nv) - dot(&nv, &w.0);
    let equal = lhs == rhs;
    Ok(ThetaTransformCheck { lhs, rhs, equal })
}

/// Translation defect of the normalized height candidate
/// Λ(w) = tropθ(Q, w) + ¼ ᵗw Q⁻¹ w.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaInvarianceCheck {
    pub delta: Rat,
    pub zero: bool,
}

/// Checks Λ(w + 2Qn) = Λ(w) exactly.
pub fn check_lambda_invariance(
    q: &ValuationMatrix,
    w: &ValuationVector,
    n: &[i64],
) -> Result<LambdaInvarianceCheck> {
    if n.len() != q.dim() {
        return Err(Error::DimensionMismatch(format!(
            "translation vector has length {}, expected {}",
            n.len(),
            q.dim()
        )));
    }
    let inv = q.inverse();
    let lambda = |vec: &ValuationVector| -> Result<Rat> {
        let qiw: Vec<Rat> = inv.iter().map(|row| dot(row, &vec.0)).collect();
        Ok(tropical_theta(q, vec)?.value + dot(&vec.0, &qiw) / rat_int(4))
    };
    let nv: Vec<Rat> = n.iter().map(|&x| rat_int(x)).collect();
    let qn = q.mul_vec(&nv);
    let shifted: Vec<Rat> = w
        .0
        .iter()
        .zip(&qn)
        .map(|(wi, qi)| wi + qi * rat_int(2))
        .collect();
    let delta = lambda(&ValuationVector(shifted))? - lambda(w)?;
    let zero = delta.is_zero();
    Ok(LambdaInvarianceCheck { delta, zero })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn identity2() -> ValuationMatrix {
        ValuationMatrix::from_triple(1, 0, 1).unwrap()
    }

    fn vv(entries: &[(i64, i64)]) -> ValuationVector {
        ValuationVector(entries.iter().map(|&(p, q)| rat(p, q)).collect())
    }

    #[test]
    fn matrix_validation() {
        assert!(ValuationMatrix::from_triple(1, 0, 1).is_ok());
        assert!(ValuationMatrix::from_triple(1, 1, 1).is_err()); // det = 0
        assert!(ValuationMatrix::from_triple(-1, 0, 1).is_err());
        let asym = ValuationMatrix::new(vec![
            vec![rat_int(1), rat_int(2)],
            vec![rat_int(3), rat_int(1)],
        ]);
        assert!(asym.is_err());
    }

    #[test]
    fn tropical_theta_examples() {
        let q = identity2();
        let r = tropical_theta(&q, &vv(&[(0, 1), (0, 1)])).unwrap();
        assert_eq!(r.value, rat_int(0));
        assert_eq!(r.minimizers, vec![vec![0, 0]]);

        let r = tropical_theta(&q, &vv(&[(2, 1), (0, 1)])).unwrap();
        assert_eq!(r.value, rat_int(-1));
        assert!(r.minimizers.contains(&vec![-1, 0]));

        let q = ValuationMatrix::from_triple(2, 1, 5).unwrap();
        let r = tropical_theta(&q, &vv(&[(1, 1), (1, 1)])).unwrap();
        assert_eq!(r.value, rat_int(0));
        assert_eq!(r.minimizers, vec![vec![0, 0]]);
    }

    #[test]
    fn theta_transform_examples() {
        let q = identity2();
        let chk = check_theta_transform(&q, &vv(&[(0, 1), (0, 1)]), &[1, 0]).unwrap();
        assert_eq!(chk.lhs, rat_int(-1));
        assert_eq!(chk.rhs, rat_int(-1));
        assert!(chk.equal);

        let q = ValuationMatrix::from_triple(2, 1, 5).unwrap();
        let chk = check_theta_transform(&q, &vv(&[(1, 2), (0, 1)]), &[1, 1]).unwrap();
        assert!(chk.equal);
        let chk = check_theta_transform(&q, &vv(&[(1, 2), (0, 1)]), &[0, 0]).unwrap();
        assert!(chk.equal);
    }

    #[test]
    fn lambda_invariance_examples() {
        let q = identity2();
        let chk = check_lambda_invariance(&q, &vv(&[(0, 1), (0, 1)]), &[1, 0]).unwrap();
        assert!(chk.zero);
        let chk = check_lambda_invariance(&q, &vv(&[(0, 1), (0, 1)]), &[0, 0]).unwrap();
        assert!(chk.zero);
        let q = ValuationMatrix::from_triple(2, 1, 5).unwrap();
        let chk = check_lambda_invariance(&q, &vv(&[(3, 7), (-2, 5)]), &[2, -1]).unwrap();
        assert!(chk.zero, "delta = {}", chk.delta);
    }

    fn random_pd_matrix(rng: &mut ChaCha12Rng, g: usize) -> ValuationMatrix {
        // Strict diagonal dominance with positive diagonal gives positive
        // definiteness; entries stay within ±20.
        loop {
            let mut entries = vec![vec![Rat::zero(); g]; g];
            for i in 0..g {
                for j in (i + 1)..g {
                    let e = rat(rng.gen_range(-8..=8), rng.gen_range(1..=4));
                    entries[i][j] = e.clone();
                    entries[j][i] = e;
                }
            }
            for i in 0..g {
                let row_sum: Rat = (0..g)
                    .filter(|&j| j != i)
                    .map(|j| entries[i][j].abs())
                    .sum();
                entries[i][i] = row_sum + rat(rng.gen_range(1..=12), rng.gen_range(1..=3));
            }
            if let Ok(q) = ValuationMatrix::new(entries) {
                return q;
            }
        }
    }

    #[test]
    fn randomized_identities_exact() {
        let mut rng = ChaCha12Rng::seed_from_u64(501);
        for trial in 0..500 {
            let g = if trial % 5 == 0 { 3 } else { 2 };
            let q = random_pd_matrix(&mut rng, g);
            let w = ValuationVector(
                (0..g)
                    .map(|_| rat(rng.gen_range(-20..=20), rng.gen_range(1..=5)))
                    .collect(),
            );
            let n: Vec<i64> = (0..g).map(|_| rng.gen_range(-3..=3)).collect();
            let chk = check_theta_transform(&q, &w, &n).unwrap();
            assert!(chk.equal, "transform failed: lhs {} rhs {}", chk.lhs, chk.rhs);
            let chk = check_lambda_invariance(&q, &w, &n).unwrap();
            assert!(chk.zero, "invariance failed: delta {}", chk.delta);
        }
    }

    #[test]
    fn window_doubling_never_changes_minimum() {
        let mut rng = ChaCha12Rng::seed_from_u64(502);
        for _ in 0..100 {
            let g = 2;
            let q = random_pd_matrix(&mut rng, g);
            let w = ValuationVector(
                (0..g)
                    .map(|_| rat(rng.gen_range(-20..=20), rng.gen_range(1..=5)))
                    .collect(),
            );
            let base = tropical_theta(&q, &w).unwrap();
            // Exhaustive double-width window around the minimizers.
            let radius: i64 = base
                .minimizers
                .iter()
                .flat_map(|m| m.iter().map(|x| x.abs()))
                .max()
                .unwrap_or(0)
                * 2
                + 8;
            let mut wide_best: Option<Rat> = None;
            for m0 in -radius..=radius {
                for m1 in -radius..=radius {
                    let v = f_value(&q, &w.0, &[m0, m1]);
                    if wide_best.as_ref().map_or(true, |b| v < *b) {
                        wide_best = Some(v);
                    }
                }
            }
            assert_eq!(base.value, wide_best.unwrap());
        }
    }

    #[test]
    fn zero_vector_gives_zero_min() {
        let mut rng = ChaCha12Rng::seed_from_u64(503);
        for _ in 0..50 {
            let q = random_pd_matrix(&mut rng, 2);
            let zero = ValuationVector(vec![Rat::zero(), Rat::zero()]);
            let r = tropical_theta(&q, &zero).unwrap();
            assert_eq!(r.value, Rat::zero());
            // And the minimum is never positive: m = 0 always gives 0.
            let w = ValuationVector(vec![rat(rng.gen_range(-9..=9), 2), rat(rng.gen_range(-9..=9), 3)]);
            assert!(tropical_theta(&q, &w).unwrap().value <= Rat::zero());
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let q = identity2();
        let w3 = ValuationVector(vec![Rat::zero(); 3]);
        assert!(tropical_theta(&q, &w3).is_err());
        assert!(check_theta_transform(&q, &vv(&[(0, 1), (0, 1)]), &[1]).is_err());
    }
}
