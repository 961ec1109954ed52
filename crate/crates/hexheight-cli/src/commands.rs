//! Row builders for each subcommand.

use crate::output::{csv_field, Row};
use crate::{parse_integers, parse_rational, parse_rationals};
use anyhow::{bail, Result};
use hexheight::fourier::{self, CoefficientCase};
use hexheight::global_model::{holder_bound, ScenarioRow};
use hexheight::local_height::{
    self, check_torsion_order, fourier_avg_lower_bound, pigeonhole_subset, IntegerLift,
    LocalPointSet,
};
use hexheight::periodic_form::{self, TorusPoint};
use hexheight::quadform::{delta, NormalizedTriple, QuadTriple};
use hexheight::rational::Rat;
use hexheight::theta::{
    check_lambda_invariance, check_theta_transform, tropical_theta, ValuationMatrix,
    ValuationVector,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

fn normalized(a: i64, b: i64, c: i64) -> Result<NormalizedTriple> {
    Ok(NormalizedTriple::reduce(&QuadTriple::new(a, b, c)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReduceRow {
    pub a_in: i64,
    pub b_in: i64,
    pub c_in: i64,
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub det: i64,
    pub transform: [[i64; 2]; 2],
    pub transform_det: i64,
}

impl Row for ReduceRow {
    fn csv_header() -> String {
        "a_in,b_in,c_in,a,b,c,det,t00,t01,t10,t11,transform_det".into()
    }
    fn csv_record(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.a_in,
            self.b_in,
            self.c_in,
            self.a,
            self.b,
            self.c,
            self.det,
            self.transform[0][0],
            self.transform[0][1],
            self.transform[1][0],
            self.transform[1][1],
            self.transform_det
        )
    }
}

pub fn reduce(a: i64, b: i64, c: i64) -> Result<ReduceRow> {
    let n = normalized(a, b, c)?;
    Ok(ReduceRow {
        a_in: a,
        b_in: b,
        c_in: c,
        a: n.a(),
        b: n.b(),
        c: n.c(),
        det: n.det(),
        transform: n.transform().0,
        transform_det: n.transform().det(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRow {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub x: String,
    pub y: String,
    pub value: String,
    pub region: String,
    pub minimizers: Vec<(i32, i32)>,
}

impl Row for EvalRow {
    fn csv_header() -> String {
        "a,b,c,x,y,value,region,minimizers".into()
    }
    fn csv_record(&self) -> String {
        let mins = self
            .minimizers
            .iter()
            .map(|(m, n)| format!("({m} {n})"))
            .collect::<Vec<_>>()
            .join(";");
        format!(
            "{},{},{},{},{},{},{},{}",
            self.a,
            self.b,
            self.c,
            csv_field(&self.x),
            csv_field(&self.y),
            csv_field(&self.value),
            self.region,
            csv_field(&mins)
        )
    }
}

pub fn eval_l(a: i64, b: i64, c: i64, x: &str, y: &str) -> Result<EvalRow> {
    let t = normalized(a, b, c)?;
    if (t.a(), t.b(), t.c()) != (a, b, c) {
        bail!("triple ({a}, {b}, {c}) is not normalized; run `reduce` first");
    }
    let p = TorusPoint::new(parse_rational(x)?, parse_rational(y)?);
    let r = periodic_form::eval_min(&t, &p);
    Ok(EvalRow {
        a,
        b,
        c,
        x: p.x().to_string(),
        y: p.y().to_string(),
        value: r.value.to_string(),
        region: r.region.to_string(),
        minimizers: r.minimizers,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierRow {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub m: i64,
    pub n: i64,
    pub case: String,
    pub value: f64,
    /// Exact rational payload of the case (prefactor, or the value itself
    /// at (0,0)).
    pub prefactor: String,
    /// Reduced sine angle for the generic case, empty otherwise.
    pub angle: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abs_err: Option<f64>,
}

impl Row for FourierRow {
    fn csv_header() -> String {
        "a,b,c,m,n,case,value,prefactor,angle,oracle,abs_err".into()
    }
    fn csv_record(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.a,
            self.b,
            self.c,
            self.m,
            self.n,
            self.case,
            self.value,
            csv_field(&self.prefactor),
            csv_field(&self.angle),
            self.oracle.map(|v| v.to_string()).unwrap_or_default(),
            self.abs_err.map(|v| v.to_string()).unwrap_or_default()
        )
    }
}

pub fn fourier(
    a: i64,
    b: i64,
    c: i64,
    max_index: u32,
    with_oracle: bool,
    grid_exponent: u32,
) -> Result<Vec<FourierRow>> {
    let t = normalized(a, b, c)?;
    if (t.a(), t.b(), t.c()) != (a, b, c) {
        bail!("triple ({a}, {b}, {c}) is not normalized; run `reduce` first");
    }
    let table = if with_oracle {
        Some(fourier::quadrature_table(t.triple(), max_index, grid_exponent))
    } else {
        None
    };
    let mm = max_index as i64;
    let mut rows = Vec::new();
    for m in -mm..=mm {
        for n in -mm..=mm {
            let coeff = fourier::coefficient(&t, m, n);
            let (prefactor, angle) = match &coeff.case {
                CoefficientCase::ZeroIndex { exact } => (exact.to_string(), String::new()),
                CoefficientCase::F1Zero { prefactor }
                | CoefficientCase::F2Zero { prefactor }
                | CoefficientCase::F3Zero { prefactor } => {
                    (prefactor.to_string(), String::new())
                }
                CoefficientCase::Generic { prefactor, angle } => {
                    (prefactor.to_string(), angle.to_string())
                }
            };
            let oracle = table.as_ref().map(|tab| tab.get(m, n));
            let abs_err = oracle.map(|o| (o - coeff.value).abs());
            rows.push(FourierRow {
                a,
                b,
                c,
                m,
                n,
                case: coeff.case.label().to_string(),
                value: coeff.value,
                prefactor,
                angle,
                oracle,
                abs_err,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HexagonRow {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    /// vertex | octagon | triangle-I .. triangle-IV
    pub kind: String,
    pub index: usize,
    pub x: String,
    pub y: String,
    pub degenerate: bool,
}

impl Row for HexagonRow {
    fn csv_header() -> String {
        "a,b,c,kind,index,x,y,degenerate".into()
    }
    fn csv_record(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.a,
            self.b,
            self.c,
            self.kind,
            self.index,
            csv_field(&self.x),
            csv_field(&self.y),
            self.degenerate
        )
    }
}

pub fn hexagon(a: i64, b: i64, c: i64) -> Result<Vec<HexagonRow>> {
    let t = normalized(a, b, c)?;
    if (t.a(), t.b(), t.c()) != (a, b, c) {
        bail!("triple ({a}, {b}, {c}) is not normalized; run `reduce` first");
    }
    let g = periodic_form::hexagon_vertices(&t);
    let mut rows = Vec::new();
    let mut push = |kind: &str, index: usize, x: &Rat, y: &Rat, degenerate: bool| {
        rows.push(HexagonRow {
            a,
            b,
            c,
            kind: kind.to_string(),
            index,
            x: x.to_string(),
            y: y.to_string(),
            degenerate,
        });
    };
    for (i, (x, y)) in g.vertices.iter().enumerate() {
        push("vertex", i, x, y, g.degenerate);
    }
    for (i, (x, y)) in g.octagon.iter().enumerate() {
        push("octagon", i, x, y, g.degenerate);
    }
    for (region, tri) in &g.triangles {
        for (i, (x, y)) in tri.iter().enumerate() {
            push(&format!("triangle-{region}"), i, x, y, g.degenerate);
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AvgDRow {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub x: String,
    pub y: String,
    pub d: u32,
    pub closed_form: String,
    pub direct: String,
    pub equal: bool,
}

impl Row for AvgDRow {
    fn csv_header() -> String {
        "a,b,c,x,y,d,closed_form,direct,equal".into()
    }
    fn csv_record(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.a,
            self.b,
            self.c,
            csv_field(&self.x),
            csv_field(&self.y),
            self.d,
            csv_field(&self.closed_form),
            csv_field(&self.direct),
            self.equal
        )
    }
    fn verdict(&self) -> Option<bool> {
        Some(self.equal)
    }
}

pub fn avg_d(a: i64, b: i64, c: i64, x: &str, y: &str, d: u32) -> Result<AvgDRow> {
    let t = normalized(a, b, c)?;
    if (t.a(), t.b(), t.c()) != (a, b, c) {
        bail!("triple ({a}, {b}, {c}) is not normalized; run `reduce` first");
    }
    let p = TorusPoint::new(parse_rational(x)?, parse_rational(y)?);
    let closed = local_height::avg_d_closed_form(&t, &p, d)?;
    let direct = periodic_form::avg_d_direct(&t, &p, d)?;
    Ok(AvgDRow {
        a,
        b,
        c,
        x: p.x().to_string(),
        y: p.y().to_string(),
        d,
        equal: closed == direct,
        closed_form: closed.to_string(),
        direct: direct.to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalBoundsRow {
    pub seed: u64,
    pub trial: u32,
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub points: u32,
    pub d: u32,
    pub avg_lhs: String,
    pub avg_rhs: String,
    pub avg_holds: bool,
    pub subset_size: usize,
    pub subset_required: usize,
    pub pair_bound: String,
    pub pair_min: String,
    pub pigeonhole_holds: bool,
}

impl Row for LocalBoundsRow {
    fn csv_header() -> String {
        "seed,trial,a,b,c,points,d,avg_lhs,avg_rhs,avg_holds,subset_size,subset_required,pair_bound,pair_min,pigeonhole_holds"
            .into()
    }
    fn csv_record(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.seed,
            self.trial,
            self.a,
            self.b,
            self.c,
            self.points,
            self.d,
            csv_field(&self.avg_lhs),
            csv_field(&self.avg_rhs),
            self.avg_holds,
            self.subset_size,
            self.subset_required,
            csv_field(&self.pair_bound),
            csv_field(&self.pair_min),
            self.pigeonhole_holds
        )
    }
    fn verdict(&self) -> Option<bool> {
        Some(self.avg_holds && self.pigeonhole_holds)
    }
}

pub fn local_bounds(
    a: i64,
    b: i64,
    c: i64,
    points: u32,
    d: Option<u32>,
    trials: u32,
    seed: u64,
) -> Result<Vec<LocalBoundsRow>> {
    let t = normalized(a, b, c)?;
    if (t.a(), t.b(), t.c()) != (a, b, c) {
        bail!("triple ({a}, {b}, {c}) is not normalized; run `reduce` first");
    }
    let d = d.unwrap_or(2 * delta(&t) as u32);
    check_torsion_order(&t, d)?;
    if points < 2 {
        bail!("need at least 2 points");
    }
    if (points as i64) > t.det() {
        bail!(
            "a place with D = {} supports at most {} distinct points",
            t.det(),
            t.det()
        );
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for trial in 0..trials {
        let mut lifts: Vec<IntegerLift> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let mut attempts = 0;
        while lifts.len() < points as usize {
            attempts += 1;
            if attempts > 10_000 {
                bail!("could not sample {points} distinct residues");
            }
            let l = IntegerLift {
                u: rng.gen_range(0..t.det()),
                v: rng.gen_range(0..t.det()),
            };
            if seen.insert(local_height::lift_to_torus(&t, l)) {
                lifts.push(l);
            }
        }
        let set = LocalPointSet::new(t, lifts)?;
        let avg = fourier_avg_lower_bound(&set, d)?;
        let hole = pigeonhole_subset(&set, d)?;
        rows.push(LocalBoundsRow {
            seed,
            trial,
            a,
            b,
            c,
            points,
            d,
            avg_lhs: avg.lhs.to_string(),
            avg_rhs: avg.rhs.to_string(),
            avg_holds: avg.holds,
            subset_size: hole.subset.len(),
            subset_required: (points as usize).div_ceil(216),
            pair_bound: hole.bound.to_string(),
            pair_min: hole
                .min_pair_average
                .as_ref()
                .map(|m| m.to_string())
                .unwrap_or_default(),
            pigeonhole_holds: hole.holds && hole.subset.len() >= (points as usize).div_ceil(216),
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaRow {
    pub g: usize,
    pub theta: String,
    pub ties: usize,
    pub transform_lhs: String,
    pub transform_rhs: String,
    pub transform_equal: bool,
    pub lambda_delta: String,
    pub lambda_zero: bool,
}

impl Row for ThetaRow {
    fn csv_header() -> String {
        "g,theta,ties,transform_lhs,transform_rhs,transform_equal,lambda_delta,lambda_zero".into()
    }
    fn csv_record(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.g,
            csv_field(&self.theta),
            self.ties,
            csv_field(&self.transform_lhs),
            csv_field(&self.transform_rhs),
            self.transform_equal,
            csv_field(&self.lambda_delta),
            self.lambda_zero
        )
    }
    fn verdict(&self) -> Option<bool> {
        Some(self.transform_equal && self.lambda_zero)
    }
}

pub fn theta(matrix: &str, vector: &str, translate: &str) -> Result<ThetaRow> {
    let rows: Result<Vec<Vec<Rat>>> = matrix.split(';').map(parse_rationals).collect();
    let q = ValuationMatrix::new(rows?)?;
    let w = ValuationVector(parse_rationals(vector)?);
    let n = parse_integers(translate)?;
    let trop = tropical_theta(&q, &w)?;
    let transform = check_theta_transform(&q, &w, &n)?;
    let lambda = check_lambda_invariance(&q, &w, &n)?;
    Ok(ThetaRow {
        g: q.dim(),
        theta: trop.value.to_string(),
        ties: trop.ties,
        transform_lhs: transform.lhs.to_string(),
        transform_rhs: transform.rhs.to_string(),
        transform_equal: transform.equal,
        lambda_delta: lambda.delta.to_string(),
        lambda_zero: lambda.zero,
    })
}

impl Row for ScenarioRow {
    fn csv_header() -> String {
        "scenario,trial,n,points_sampled,subset_size,d,lhs,est1,est2,est3,est_sum,combined,holds"
            .into()
    }
    fn csv_record(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            csv_field(&self.scenario),
            self.trial,
            self.n,
            self.points_sampled,
            self.subset_size,
            self.d,
            csv_field(&self.lhs),
            csv_field(&self.est1),
            csv_field(&self.est2),
            csv_field(&self.est3),
            csv_field(&self.est_sum),
            self.combined,
            self.holds
        )
    }
    fn verdict(&self) -> Option<bool> {
        Some(self.holds)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolderRow {
    pub alpha: f64,
    pub beta: f64,
    pub n: f64,
    pub branches: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl Row for HolderRow {
    fn csv_header() -> String {
        "alpha,beta,n,branches,lhs,rhs,holds".into()
    }
    fn csv_record(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.alpha, self.beta, self.n, self.branches, self.lhs, self.rhs, self.holds
        )
    }
    fn verdict(&self) -> Option<bool> {
        Some(self.holds)
    }
}

pub fn holder(alpha: f64, beta: f64, e: &[f64]) -> Result<HolderRow> {
    let rep = holder_bound(alpha, beta, e)?;
    Ok(HolderRow {
        alpha,
        beta,
        n: e.iter().sum(),
        branches: e.len(),
        lhs: rep.lhs,
        rhs: rep.rhs,
        holds: rep.holds,
    })
}
