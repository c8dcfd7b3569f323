//! Builders for decompositions with prescribed structure: heavy line, heavy
//! smooth conic, two lines, and a pair of decompositions of size `3d/2` on a
//! plane cubic.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::binary::{decomposition_family, sylvester_analyze, BinaryForm};
use crate::cert::verify_decomposition;
use crate::classify::{
    case_c_family, classify_decomposition, conic_threshold, line_threshold, Conic, Curve,
    Decomposition, Line, StructureCase,
};
use crate::error::{Error, Result};
use crate::fieldpoly::{
    axpy, vectors_rank, ExponentVector, FieldSpec, HomogeneousForm, PointSet, ProjPoint, Scalar,
    Vector,
};
use crate::oracle::{enumerate_among, OracleBudget};
use crate::veronese::{in_span, random_point, veronese_map, AmbientVector, VeroneseSpace};

const BUILD_RETRIES: usize = 32;

fn infeasible(msg: impl Into<String>) -> Error {
    Error::InfeasibleParameters(msg.into())
}

/// A degree-`deg` binary form of rank exactly `k` whose minimal
/// decompositions move in a family of positive dimension. Needs
/// `deg + 2 ≤ 2k ≤ 2deg`.
fn moving_binary_form<R: Rng>(field: FieldSpec, deg: u32, k: usize, rng: &mut R) -> Result<BinaryForm> {
    let d = deg as usize;
    if 2 * k < d + 2 || k > d {
        return Err(infeasible(format!(
            "no degree-{d} binary form has a moving family of rank {k}"
        )));
    }
    let space = VeroneseSpace::new(1, deg)?;
    for _ in 0..BUILD_RETRIES {
        let mut v = vec![field.zero(); d + 1];
        if 2 * k == d + 2 {
            // Generic rank: a random sum of k powers.
            for _ in 0..k {
                let p = random_point(field, 1, rng);
                v = axpy(&v, &field.random_nonzero(rng), &veronese_map(&p, space)?);
            }
        } else {
            // A double point plus t' - 2 simple points: border rank
            // t' = d + 2 - k with a repeated root, so rank k.
            let tp = d + 2 - k;
            let s0 = field.random(rng);
            let e1 = ProjPoint::normalize(&[field.one(), s0.clone()])?;
            v = axpy(&v, &field.random_nonzero(rng), &veronese_map(&e1, space)?);
            let tangent: Vector = (0..=d)
                .map(|j| {
                    if j == 0 {
                        field.zero()
                    } else {
                        field.from_u64(j as u64) * s0.pow(j as u32 - 1)
                    }
                })
                .collect();
            v = axpy(&v, &field.random_nonzero(rng), &tangent);
            for _ in 0..tp - 2 {
                let p = random_point(field, 1, rng);
                v = axpy(&v, &field.random_nonzero(rng), &veronese_map(&p, space)?);
            }
        }
        let Ok(b) = BinaryForm::from_tensor(field, v) else {
            continue;
        };
        match sylvester_analyze(&b) {
            Ok(a) if a.rank == k && a.family_dim >= 1 => return Ok(b),
            _ => continue,
        }
    }
    Err(infeasible(format!("could not sample a degree-{d} form of rank {k}")))
}

fn random_independent<R: Rng>(field: FieldSpec, r: usize, n: usize, rng: &mut R) -> Result<Vec<ProjPoint>> {
    for _ in 0..BUILD_RETRIES {
        let pts: Vec<ProjPoint> = (0..n).map(|_| random_point(field, r, rng)).collect();
        let vecs: Vec<Vector> = pts.iter().map(|p| p.to_vector()).collect();
        if vectors_rank(field, r + 1, &vecs) == n {
            return Ok(pts);
        }
    }
    Err(infeasible(format!("no {n} independent points in P^{r}")))
}

/// Puts the binary form `b` on `curve`, adds `off_count` random points off
/// the curve, and returns the decomposition if it certifies.
fn assemble<R: Rng>(
    curve: &Curve,
    b: &BinaryForm,
    off_count: usize,
    space: VeroneseSpace,
    off_plane: Option<&Vec<Vector>>,
    rng: &mut R,
) -> Result<Option<Decomposition>> {
    let field = b.field();
    let Some(dec_b) = decomposition_family(b, 1, rng.gen())?.into_iter().next() else {
        return Ok(None);
    };
    let on: PointSet = dec_b
        .nodes
        .iter()
        .map(|u| curve.image(u))
        .collect::<Result<_>>()?;
    let mut target = curve.push_forward(space, b)?;
    let mut off = Vec::new();
    while off.len() < off_count {
        let p = random_point(field, space.r, rng);
        let in_plane = off_plane.is_some_and(|basis| {
            let mut all = basis.clone();
            all.push(p.to_vector());
            vectors_rank(field, space.r + 1, &all) == basis.len()
        });
        if curve.contains(&p) || in_plane || off.contains(&p) {
            continue;
        }
        target = axpy(&target, &field.random_nonzero(rng), &veronese_map(&p, space)?);
        off.push(p);
    }
    let points = on.union(&PointSet::new(off));
    let Ok(dec) = Decomposition::from_points(target, points, space) else {
        return Ok(None);
    };
    Ok(verify_decomposition(&dec).valid.then_some(dec))
}

/// A decomposition with `line_count` points on a line and `off_count`
/// points off it, classified as the heavy-line case.
pub fn build_case_a(
    d: u32,
    r: usize,
    line_count: usize,
    off_count: usize,
    field: FieldSpec,
    seed: u64,
) -> Result<(AmbientVector, Decomposition)> {
    let dd = d as usize;
    if line_count < line_threshold(d) {
        return Err(infeasible(format!(
            "{line_count} points on the line, need at least {}",
            line_threshold(d)
        )));
    }
    if 2 * (line_count + off_count) >= 3 * dd {
        return Err(infeasible("total size must stay below 3d/2"));
    }
    if line_count > dd {
        return Err(infeasible(format!(
            "binary forms of degree {d} have rank at most {d}"
        )));
    }
    if r == 1 && off_count > 0 {
        return Err(infeasible("P^1 has no points off the line"));
    }
    let space = VeroneseSpace::new(r, d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..BUILD_RETRIES {
        let base = random_independent(field, r, 2, &mut rng)?;
        let line = Line::through(&base[0], &base[1])?;
        let curve = Curve::Line(line);
        let b = moving_binary_form(field, d, line_count, &mut rng)?;
        let Some(dec) = assemble(&curve, &b, off_count, space, None, &mut rng)? else {
            continue;
        };
        if matches!(classify_decomposition(&dec)?.case, StructureCase::CaseA { .. }) {
            return Ok((dec.target.clone(), dec));
        }
    }
    Err(infeasible("no heavy-line instance certified"))
}

/// A decomposition with `conic_count` points on a smooth conic and
/// `off_count` points off its plane, classified as the heavy-conic case.
pub fn build_case_b(
    d: u32,
    r: usize,
    conic_count: usize,
    off_count: usize,
    field: FieldSpec,
    seed: u64,
) -> Result<(AmbientVector, Decomposition)> {
    let dd = d as usize;
    if r < 2 {
        return Err(infeasible("conics need r >= 2"));
    }
    if conic_count < conic_threshold(d) {
        return Err(infeasible(format!(
            "{conic_count} points on the conic, need at least {}",
            conic_threshold(d)
        )));
    }
    if 2 * (conic_count + off_count) >= 3 * dd {
        return Err(infeasible("total size must stay below 3d/2"));
    }
    if matches!(field, FieldSpec::Prime(p) if p < 5) {
        return Err(infeasible("conic parametrization needs p >= 5"));
    }
    let space = VeroneseSpace::new(r, d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..BUILD_RETRIES {
        let plane = random_independent(field, r, 3, &mut rng)?;
        let basis: Vec<Vector> = plane.iter().map(|p| p.to_vector()).collect();
        let on_conic = |s: i64, t: i64| -> Result<ProjPoint> {
            let (s, t) = (field.from_i64(s), field.from_i64(t));
            let v: Vector = (0..=r)
                .map(|j| {
                    &(&s * &s) * &basis[0][j] + &(&s * &t) * &basis[1][j] + &(&t * &t) * &basis[2][j]
                })
                .collect();
            ProjPoint::normalize(&v)
        };
        let five = [(1, 0), (0, 1), (1, 1), (1, -1), (1, 2)]
            .iter()
            .map(|&(s, t)| on_conic(s, t))
            .collect::<Result<Vec<_>>>()?;
        let Some(conic) = Conic::fit(&five).filter(|c| c.is_smooth()) else {
            continue;
        };
        let curve = Curve::Conic(conic);
        let b = moving_binary_form(field, 2 * d, conic_count, &mut rng)?;
        let off_plane = (r >= 3).then_some(&basis);
        let Some(dec) = assemble(&curve, &b, off_count, space, off_plane, &mut rng)? else {
            continue;
        };
        if matches!(classify_decomposition(&dec)?.case, StructureCase::CaseB { .. }) {
            return Ok((dec.target.clone(), dec));
        }
    }
    Err(infeasible("no heavy-conic instance certified"))
}

/// `(d+1)/2` generic points on each of two lines through a common point
/// that is not used, classified as the two-line case.
pub fn build_case_c(d: u32, r: usize, field: FieldSpec, seed: u64) -> Result<(AmbientVector, Decomposition)> {
    if d.is_multiple_of(2) || d < 3 {
        return Err(infeasible("the two-line case needs odd d >= 3"));
    }
    if r < 2 {
        return Err(infeasible("two lines need r >= 2"));
    }
    let h = (d as usize).div_ceil(2);
    let space = VeroneseSpace::new(r, d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..BUILD_RETRIES {
        let base = random_independent(field, r, 3, &mut rng)?;
        let node = &base[0];
        let mut points = Vec::new();
        for x in &base[1..] {
            let line = Line::through(node, x)?;
            let o = line.preimage(node).expect("node on line");
            let mut on = Vec::with_capacity(h);
            while on.len() < h {
                let u = random_point(field, 1, &mut rng);
                let p = line.image(&u);
                if u != o && !on.contains(&p) {
                    on.push(p);
                }
            }
            points.extend(on);
        }
        let weights: Vec<Scalar> = (0..points.len()).map(|_| field.random_nonzero(&mut rng)).collect();
        let Ok(dec) = Decomposition::from_weighted(PointSet::new(points), weights, space) else {
            continue;
        };
        if !verify_decomposition(&dec).valid {
            continue;
        }
        let Ok(report) = classify_decomposition(&dec) else {
            continue;
        };
        if !matches!(report.case, StructureCase::CaseC { .. }) {
            continue;
        }
        if case_c_family(&dec, &report, 2, rng.gen()).is_ok() {
            return Ok((dec.target.clone(), dec));
        }
    }
    Err(infeasible("no two-line instance certified"))
}

/// Affine points of `y^2 = x^3 + a x + b`, `None` at infinity.
type CurvePoint = Option<(Scalar, Scalar)>;

#[derive(Debug, Clone)]
struct Weierstrass {
    field: FieldSpec,
    a: Scalar,
    b: Scalar,
}

impl Weierstrass {
    fn points(&self) -> Vec<CurvePoint> {
        let mut out = vec![None];
        for x in self.field.elements().expect("prime field") {
            let rhs = &(&x * &x) * &x + &(&self.a * &x) + &self.b;
            for y in self.field.elements().expect("prime field") {
                if &y * &y == rhs {
                    out.push(Some((x.clone(), y)));
                }
            }
        }
        out
    }

    fn neg(&self, p: &CurvePoint) -> CurvePoint {
        p.as_ref().map(|(x, y)| (x.clone(), -y))
    }

    fn add(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        let (Some((x1, y1)), Some((x2, y2))) = (p, q) else {
            return p.clone().or_else(|| q.clone());
        };
        let lambda = if x1 == x2 {
            if (y1 + y2).is_zero() {
                return None;
            }
            let three = self.field.from_i64(3);
            let two = self.field.from_i64(2);
            (&(&three * &(x1 * x1)) + &self.a) * (&two * y1).inv()
        } else {
            (y2 - y1) * (x2 - x1).inv()
        };
        let x3 = &(&lambda * &lambda) - &(x1 + x2);
        let y3 = &(&lambda * &(x1 - &x3)) - y1;
        Some((x3, y3))
    }

    fn to_proj(&self, p: &CurvePoint) -> ProjPoint {
        let f = self.field;
        match p {
            None => ProjPoint::normalize(&[f.zero(), f.one(), f.zero()]).expect("nonzero"),
            Some((x, y)) => ProjPoint::normalize(&[x.clone(), y.clone(), f.one()]).expect("nonzero"),
        }
    }

    /// `y^2 z - x^3 - a x z^2 - b z^3`.
    fn equation(&self) -> HomogeneousForm {
        let f = self.field;
        let term = |e: [u32; 3], c: Scalar| (ExponentVector(e.to_vec()), c);
        HomogeneousForm::new(
            f,
            2,
            [
                term([0, 2, 1], f.one()),
                term([3, 0, 0], -f.one()),
                term([1, 0, 2], -self.a.clone()),
                term([0, 0, 3], -self.b.clone()),
            ],
        )
        .expect("nonzero cubic")
    }
}

/// Two decompositions of size `3d/2` of one point, both on a plane cubic,
/// with the in-curve search results.
#[derive(Debug, Clone)]
pub struct ExampleI1 {
    pub target: AmbientVector,
    pub first: Decomposition,
    pub second: Decomposition,
    pub cubic: HomogeneousForm,
    pub curve_points: usize,
    /// All `3d/2`-subsets of the curve's rational points that decompose the
    /// target.
    pub in_curve: Vec<PointSet>,
    pub attempts: usize,
    pub off_curve_trials: usize,
    pub off_curve_hits: usize,
}

impl ExampleI1 {
    pub fn in_curve_count(&self) -> usize {
        self.in_curve.len()
    }
}

const I1_RETRIES: usize = 32;
const OFF_CURVE_TRIALS: usize = 2000;

/// Picks the smooth Weierstrass cubic with the most rational points, builds
/// `A` and `B` of size `3d/2` on it with `A + B` a degree-`d` section in the
/// group law, so that `⟨ν_d(A)⟩ ∩ ⟨ν_d(B)⟩` is a point `P`, and searches the
/// curve exhaustively for every decomposition of `P` of that size.
pub fn build_example_i1(d: u32, field: FieldSpec, seed: u64) -> Result<ExampleI1> {
    let p = field.require_prime("the cubic example")?;
    if d % 2 == 1 || d < 6 {
        return Err(infeasible("the cubic example needs even d >= 6"));
    }
    if p <= 3 {
        return Err(infeasible("Weierstrass cubics need p > 3"));
    }
    let n = 3 * d as usize / 2;
    let needed = 2 * n;

    let mut best: Option<(Weierstrass, Vec<CurvePoint>)> = None;
    for a in field.elements()? {
        for b in field.elements()? {
            let disc = field.from_i64(4) * a.pow(3) + field.from_i64(27) * b.pow(2);
            if disc.is_zero() {
                continue;
            }
            let c = Weierstrass {
                field,
                a: a.clone(),
                b,
            };
            let pts = c.points();
            if best.as_ref().is_none_or(|(_, q)| pts.len() > q.len()) {
                best = Some((c, pts));
            }
        }
    }
    let (curve, pts) = best.ok_or_else(|| infeasible("no smooth cubic"))?;
    if pts.len() < needed {
        return Err(Error::CurveTooSmall {
            found: pts.len(),
            needed,
        });
    }

    let space = VeroneseSpace::new(2, d)?;
    let candidates: Vec<ProjPoint> = pts.iter().map(|q| curve.to_proj(q)).collect();
    let budget = OracleBudget {
        max_points: candidates.len(),
        max_rank: n,
        max_subsets: 200_000_000,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last: Option<ExampleI1> = None;
    for attempt in 1..=I1_RETRIES {
        // Σ A + Σ B = 0 with the flex at infinity as origin, so A ∪ B is cut
        // out by a curve of degree d.
        let mut shuffled = pts.clone();
        shuffled.shuffle(&mut rng);
        let a_pts = &shuffled[..n];
        let b_head = &shuffled[n..2 * n - 1];
        let mut sum: CurvePoint = None;
        for q in a_pts.iter().chain(b_head) {
            sum = curve.add(&sum, q);
        }
        let last_b = curve.neg(&sum);
        if a_pts.contains(&last_b) || b_head.contains(&last_b) {
            continue;
        }
        let a_set: PointSet = a_pts.iter().map(|q| curve.to_proj(q)).collect();
        let b_set: PointSet = b_head
            .iter()
            .chain(std::iter::once(&last_b))
            .map(|q| curve.to_proj(q))
            .collect();
        let va = crate::veronese::veronese_images(&a_set, space)?;
        let vb = crate::veronese::veronese_images(&b_set, space)?;
        let meet = crate::veronese::span_intersect_sets(field, space.dim(), &va, &vb);
        if meet.len() != 1 {
            continue;
        }
        let target = meet[0].clone();
        let (Ok(first), Ok(second)) = (
            Decomposition::from_points(target.clone(), a_set, space),
            Decomposition::from_points(target.clone(), b_set, space),
        ) else {
            continue;
        };
        if !verify_decomposition(&first).valid || !verify_decomposition(&second).valid {
            continue;
        }
        let in_curve = match enumerate_among(&target, &candidates, n, space, &budget) {
            Err(Error::BudgetExceeded(m)) => return Err(Error::SearchBudgetExceeded(m)),
            other => other?,
        };
        let (off_curve_trials, off_curve_hits) = off_curve_probe(&curve, &candidates, &target, n, space, &mut rng)?;
        let found = ExampleI1 {
            target,
            first,
            second,
            cubic: curve.equation(),
            curve_points: candidates.len(),
            in_curve,
            attempts: attempt,
            off_curve_trials,
            off_curve_hits,
        };
        if found.in_curve_count() == 2 {
            return Ok(found);
        }
        last = Some(found);
    }
    last.ok_or_else(|| infeasible("no pair of decompositions on the cubic"))
}

/// Random `n`-sets mixing curve points with at least one point off the
/// curve; counts how many decompose the target.
fn off_curve_probe<R: Rng>(
    curve: &Weierstrass,
    on_curve: &[ProjPoint],
    target: &[Scalar],
    n: usize,
    space: VeroneseSpace,
    rng: &mut R,
) -> Result<(usize, usize)> {
    let eq = curve.equation();
    let mut hits = 0;
    for _ in 0..OFF_CURVE_TRIALS {
        let off_count = rng.gen_range(1..=n);
        let mut set: Vec<ProjPoint> = on_curve.choose_multiple(rng, n - off_count).cloned().collect();
        while set.len() < n {
            let q = random_point(curve.field, 2, rng);
            if !eq.evaluate(q.coords()).is_zero() && !set.contains(&q) {
                set.push(q);
            }
        }
        let set = PointSet::new(set);
        if let Some(w) = in_span(target, &set, space)? {
            if w.iter().all(|x| !x.is_zero()) {
                hits += 1;
            }
        }
    }
    Ok((OFF_CURVE_TRIALS, hits))
}
