//! Integer binary quadratic forms.
//!
//! A triple (a, b, c) stands for the form F(x, y) = ax² + 2bxy + cy², i.e.
//! the Gram matrix [[a, b], [b, c]] with determinant D = ac − b². Positive
//! definite means a > 0, c > 0 and D > 0. A triple is *normalized* when
//!
//! ```text
//! 0 ≤ 2b ≤ a ≤ c,
//! ```
//!
//! and every positive definite triple reaches a unique normalized one by a
//! GL₂(ℤ) basis change (classical Gauss reduction plus a sign flip of b).
//!
//! The module also houses the four linear forms attached to a triple,
//!
//! ```text
//! F0 = cαm + aγn,  F1 = cm − bn,  F2 = an − bm,  F3 = γm + αn,
//! ```
//!
//! with α = a − b, γ = c − b, and the two arithmetic functions ξ and Δ used
//! by the local height bounds.

use crate::error::{Error, Result};
use crate::rational::{rat_big, Rat};
use num_integer::Integer;

/// An integer triple (a, b, c) with a > 0, c > 0 and D = ac − b² > 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadTriple {
    a: i64,
    b: i64,
    c: i64,
}

/// The derived invariants of a triple: D = ac − b², α = a − b, γ = c − b.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormInvariants {
    pub det: i64,
    pub alpha: i64,
    pub gamma: i64,
}

/// Values of the linear forms F0..F3 at an index pair (m, n).
///
/// Evaluated in i128 so the identity checks are exact for any inputs this
/// crate meets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinearForms {
    pub f0: i128,
    pub f1: i128,
    pub f2: i128,
    pub f3: i128,
}

impl QuadTriple {
    /// Builds a triple, rejecting anything not positive definite.
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        let det = (a as i128) * (c as i128) - (b as i128) * (b as i128);
        if a <= 0 || c <= 0 || det <= 0 {
            return Err(Error::NotPositiveDefinite { a, b, c });
        }
        Ok(Self { a, b, c })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    /// D = ac − b².
    pub fn det(&self) -> i64 {
        self.a * self.c - self.b * self.b
    }

    /// α = a − b.
    pub fn alpha(&self) -> i64 {
        self.a - self.b
    }

    /// γ = c − b.
    pub fn gamma(&self) -> i64 {
        self.c - self.b
    }

    /// max{|a|, |b|, |c|}.
    pub fn sup(&self) -> i64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs())
    }

    /// D, α and γ in one struct.
    pub fn invariants(&self) -> FormInvariants {
        FormInvariants {
            det: self.det(),
            alpha: self.alpha(),
            gamma: self.gamma(),
        }
    }

    /// The linear forms F0..F3 at (m, n). Always satisfies f3 = f1 + f2.
    pub fn linear_forms(&self, m: i64, n: i64) -> LinearForms {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let (al, ga) = (a - b, c - b);
        let (m, n) = (m as i128, n as i128);
        LinearForms {
            f0: c * al * m + a * ga * n,
            f1: c * m - b * n,
            f2: a * n - b * m,
            f3: ga * m + al * n,
        }
    }

    /// True when 0 ≤ 2b ≤ a ≤ c.
    pub fn is_normalized(&self) -> bool {
        0 <= self.b && 2 * self.b <= self.a && self.a <= self.c
    }

    /// Triple scaled by a positive integer e. D scales by e², ξ by e, Δ not at all.
    pub fn scale(&self, e: u32) -> Self {
        let e = e as i64;
        Self {
            a: self.a * e,
            b: self.b * e,
            c: self.c * e,
        }
    }
}

/// A 2×2 integer matrix with determinant ±1, acting on Gram matrices by
/// G ↦ U G Uᵀ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Unimodular(pub [[i64; 2]; 2]);

impl Unimodular {
    pub fn identity() -> Self {
        Self([[1, 0], [0, 1]])
    }

    pub fn det(&self) -> i64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// Matrix product `self * other`.
    pub fn compose(&self, other: &Self) -> Self {
        let u = &self.0;
        let v = &other.0;
        Self([
            [
                u[0][0] * v[0][0] + u[0][1] * v[1][0],
                u[0][0] * v[0][1] + u[0][1] * v[1][1],
            ],
            [
                u[1][0] * v[0][0] + u[1][1] * v[1][0],
                u[1][0] * v[0][1] + u[1][1] * v[1][1],
            ],
        ])
    }

    /// Image of the Gram matrix of `t` under G ↦ U G Uᵀ, as a raw
    /// (a, b, c) tuple.
    pub fn apply(&self, t: &QuadTriple) -> (i64, i64, i64) {
        let g = [[t.a, t.b], [t.b, t.c]];
        let u = &self.0;
        // U G
        let mut ug = [[0i64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                ug[i][j] = u[i][0] * g[0][j] + u[i][1] * g[1][j];
            }
        }
        // (U G) Uᵀ
        let a = ug[0][0] * u[0][0] + ug[0][1] * u[0][1];
        let b = ug[0][0] * u[1][0] + ug[0][1] * u[1][1];
        let c = ug[1][0] * u[1][0] + ug[1][1] * u[1][1];
        (a, b, c)
    }
}

/// A normalized triple together with the basis change that produced it.
///
/// The recorded `transform` U satisfies U G₀ Uᵀ = G where G₀ is the Gram
/// matrix of the input and G the Gram matrix of `triple`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormalizedTriple {
    triple: QuadTriple,
    transform: Unimodular,
}

impl NormalizedTriple {
    /// Gauss-reduces a positive definite triple: translate b into
    /// [−a/2, a/2], swap when a > c, repeat, and flip the sign of b last.
    pub fn reduce(t: &QuadTriple) -> Self {
        let (mut a, mut b, mut c) = (t.a, t.b, t.c);
        let mut u = Unimodular::identity();
        loop {
            // Translate: b ← b − ka with |b − ka| ≤ a/2.
            let k = div_round_nearest(b, a);
            if k != 0 {
                let step = Unimodular([[1, 0], [-k, 1]]);
                let (na, nb, nc) = step.apply(&QuadTriple { a, b, c });
                (a, b, c) = (na, nb, nc);
                u = step.compose(&u);
            }
            if a > c {
                let step = Unimodular([[0, 1], [1, 0]]);
                std::mem::swap(&mut a, &mut c);
                u = step.compose(&u);
                continue;
            }
            break;
        }
        if b < 0 {
            let step = Unimodular([[-1, 0], [0, 1]]);
            b = -b;
            u = step.compose(&u);
        }
        let triple = QuadTriple { a, b, c };
        debug_assert!(triple.is_normalized());
        debug_assert_eq!(u.apply(t), (a, b, c));
        Self {
            triple,
            transform: u,
        }
    }

    /// Wraps an already-normalized triple with the identity transform.
    pub fn from_normalized(t: QuadTriple) -> Result<Self> {
        if !t.is_normalized() {
            return Err(Error::Precondition(format!(
                "triple ({}, {}, {}) is not normalized (need 0 <= 2b <= a <= c)",
                t.a, t.b, t.c
            )));
        }
        Ok(Self {
            triple: t,
            transform: Unimodular::identity(),
        })
    }

    pub fn triple(&self) -> &QuadTriple {
        &self.triple
    }

    pub fn transform(&self) -> &Unimodular {
        &self.transform
    }

    pub fn a(&self) -> i64 {
        self.triple.a
    }

    pub fn b(&self) -> i64 {
        self.triple.b
    }

    pub fn c(&self) -> i64 {
        self.triple.c
    }

    pub fn det(&self) -> i64 {
        self.triple.det()
    }

    pub fn alpha(&self) -> i64 {
        self.triple.alpha()
    }

    pub fn gamma(&self) -> i64 {
        self.triple.gamma()
    }

    pub fn linear_forms(&self, m: i64, n: i64) -> LinearForms {
        self.triple.linear_forms(m, n)
    }

    /// Scaled triple (ea, eb, ec); normalization is preserved.
    pub fn scale(&self, e: u32) -> NormalizedTriple {
        NormalizedTriple {
            triple: self.triple.scale(e),
            transform: Unimodular::identity(),
        }
    }
}

/// Nearest-integer quotient of b/a (a > 0), ties toward −infinity so the
/// remainder b − ka lands in (−a/2, a/2]; already-normalized triples are
/// then fixed points of the reduction.
fn div_round_nearest(b: i64, a: i64) -> i64 {
    debug_assert!(a > 0);
    (2 * b + a - 1).div_euclid(2 * a)
}

/// gcd with the convention gcd(x, 0) = |x|.
pub fn gcd(x: i64, y: i64) -> i64 {
    x.gcd(&y)
}

/// ξ(a, b, c) = (α·gcd(c,b)² + γ·gcd(a,b)² + b·gcd(α,γ)²) / D.
///
/// Terms with a zero coefficient are dropped before their gcd is formed, so
/// gcd(0, 0) is never queried. Homogeneous of degree 1: ξ(et) = e·ξ(t).
pub fn xi(t: &NormalizedTriple) -> Rat {
    let (a, b, c) = (t.a(), t.b(), t.c());
    let (al, ga) = (t.alpha(), t.gamma());
    let mut numer: i128 = 0;
    if al != 0 {
        let g = gcd(c, b) as i128;
        numer += al as i128 * g * g;
    }
    if ga != 0 {
        let g = gcd(a, b) as i128;
        numer += ga as i128 * g * g;
    }
    if b != 0 {
        let g = gcd(al, ga) as i128;
        numer += b as i128 * g * g;
    }
    rat_big(numer) / rat_big(t.det() as i128)
}

/// Δ(a, b, c) = D / gcd(a, b, c)². Scale invariant: Δ(et) = Δ(t).
pub fn delta(t: &NormalizedTriple) -> i64 {
    let g = gcd(gcd(t.a(), t.b()), t.c());
    t.det() / (g * g)
}
