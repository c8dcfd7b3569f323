//! Structure of small-rank decompositions: heavy lines and conics, splice
//! points, explicit families of decompositions, and the uniqueness verdict.

mod curve;

pub use curve::{find_heavy_conic, find_heavy_line, Conic, ConicKind, Curve, Line};

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::binary::{decomposition_family, sylvester_analyze, sylvester_decompose, BinaryForm};
use crate::cert::verify_decomposition;
use crate::error::{Error, Result};
use crate::fieldpoly::{axpy, FieldSpec, PointSet, ProjPoint, Scalar, Vector};
use crate::veronese::{
    in_span, span_intersect_sets, veronese_images, veronese_map, weighted_sum, AmbientVector,
    VeroneseSpace,
};

/// Witnesses requested per family when a verdict is non-unique.
const VERDICT_WITNESSES: usize = 4;
/// Attempts per requested member in the two-line construction.
const CASE_C_RETRIES: usize = 200;

/// A target `P` with points and weights such that `Σ w_i ν_d(a_i) = P`.
/// Weights follow the sorted order of `points`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub space: VeroneseSpace,
    pub target: AmbientVector,
    pub points: PointSet,
    pub weights: Vec<Scalar>,
}

impl Decomposition {
    pub fn new(
        space: VeroneseSpace,
        target: AmbientVector,
        points: PointSet,
        weights: Vec<Scalar>,
    ) -> Result<Self> {
        if target.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                got: target.len(),
            });
        }
        if weights.len() != points.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                got: weights.len(),
            });
        }
        Ok(Decomposition {
            space,
            target,
            points,
            weights,
        })
    }

    /// `P = Σ w_i ν_d(a_i)`.
    pub fn from_weighted(points: PointSet, weights: Vec<Scalar>, space: VeroneseSpace) -> Result<Self> {
        let target = weighted_sum(&points, &weights, space)?;
        Decomposition::new(space, target, points, weights)
    }

    /// Solves for the weights of `target` on `points`.
    pub fn from_points(target: AmbientVector, points: PointSet, space: VeroneseSpace) -> Result<Self> {
        let weights = in_span(&target, &points, space)?.ok_or_else(|| {
            Error::NoRationalDecomposition("target is not in the span of the points".into())
        })?;
        Decomposition::new(space, target, points, weights)
    }

    pub fn field(&self) -> FieldSpec {
        self.target[0].field()
    }

    pub fn d(&self) -> u32 {
        self.space.d
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `#A < 3d/2`, the regime where the structure theory applies.
    pub fn in_regime(&self) -> bool {
        2 * self.len() < 3 * self.d() as usize
    }
}

/// `⌈(d+2)/2⌉`.
pub fn line_threshold(d: u32) -> usize {
    (d as usize + 3) / 2
}

pub fn conic_threshold(d: u32) -> usize {
    d as usize + 1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructureCase {
    CaseA {
        line: Line,
        on_curve: PointSet,
        residual: PointSet,
        splice: BinaryForm,
    },
    CaseB {
        conic: Conic,
        on_curve: PointSet,
        residual: PointSet,
        splice: BinaryForm,
    },
    CaseC {
        l1: Line,
        l2: Line,
        node: ProjPoint,
        residual: PointSet,
    },
    UniqueWitness,
    Unknown,
}

impl StructureCase {
    pub fn label(&self) -> &'static str {
        match self {
            StructureCase::CaseA { .. } => "A",
            StructureCase::CaseB { .. } => "B",
            StructureCase::CaseC { .. } => "C",
            StructureCase::UniqueWitness => "unique",
            StructureCase::Unknown => "unknown",
        }
    }
}

/// Counts behind a classification.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Evidence {
    pub size: usize,
    pub d: u32,
    pub line_threshold: usize,
    pub conic_threshold: usize,
    pub heavy_lines: usize,
    pub smooth_heavy_conics: usize,
    pub curve_points: Option<usize>,
    pub splice_rank: Option<usize>,
    pub splice_family_dim: Option<usize>,
    /// `dim ⟨ν_d(A∩T)⟩ ∩ ⟨{P} ∪ ν_d(F)⟩` as a vector space.
    pub splice_intersection_dim: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub case: StructureCase,
    pub evidence: Evidence,
}

/// The point of `⟨ν_d(A∩T)⟩ ∩ ⟨{P} ∪ ν_d(F)⟩`, `F = A \ T`, pulled back to
/// a binary form through the parametrization of `T`.
pub fn splice_point(dec: &Decomposition, curve_points: &PointSet, curve: &Curve) -> Result<BinaryForm> {
    splice_with_dim(dec, curve_points, curve).map(|(b, _)| b)
}

fn splice_with_dim(
    dec: &Decomposition,
    curve_points: &PointSet,
    curve: &Curve,
) -> Result<(BinaryForm, usize)> {
    if curve_points.is_empty() {
        return Err(Error::EmptyIntersection);
    }
    let field = dec.field();
    let dim = dec.space.dim();
    let residual = dec.points.difference(curve_points);
    let on = veronese_images(curve_points, dec.space)?;
    let mut rest = vec![dec.target.clone()];
    rest.extend(veronese_images(&residual, dec.space)?);
    let meet = span_intersect_sets(field, dim, &on, &rest);
    if meet.len() != 1 {
        return Err(Error::NotUnique(meet.len()));
    }
    // The curve part of the weighted sum spans the intersection; use it
    // for its scale.
    let mut v: Vector = vec![field.zero(); dim];
    for (a, w) in dec.points.iter().zip(&dec.weights) {
        if curve_points.contains(a) {
            v = axpy(&v, w, &veronese_map(a, dec.space)?);
        }
    }
    Ok((curve.pull_back(dec.space, &v)?, meet.len()))
}

struct Spliced {
    form: BinaryForm,
    rank: usize,
    family_dim: usize,
    meet_dim: usize,
}

fn analyze_splice(dec: &Decomposition, on: &PointSet, curve: &Curve) -> Result<Option<Spliced>> {
    let (form, meet_dim) = splice_with_dim(dec, on, curve)?;
    let analysis = match sylvester_analyze(&form) {
        Ok(a) => a,
        // No decomposition of the curve part over the ground field.
        Err(Error::NonSplitApolar(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    if analysis.rank < on.len() {
        return Err(Error::NotMinimalCertificate(format!(
            "the {} points on a curve can be replaced by {}",
            on.len(),
            analysis.rank
        )));
    }
    Ok(Some(Spliced {
        form,
        rank: analysis.rank,
        family_dim: analysis.family_dim,
        meet_dim,
    }))
}

pub fn classify_decomposition(dec: &Decomposition) -> Result<StructureReport> {
    let cert = verify_decomposition(dec);
    if !cert.valid {
        return Err(Error::NotMinimalCertificate(cert.failures().join("; ")));
    }
    let d = dec.d();
    let mut ev = Evidence {
        size: dec.len(),
        d,
        line_threshold: line_threshold(d),
        conic_threshold: conic_threshold(d),
        ..Evidence::default()
    };
    if !dec.in_regime() {
        return Ok(StructureReport {
            case: StructureCase::Unknown,
            evidence: ev,
        });
    }
    let record = |ev: &mut Evidence, on: &PointSet, s: &Spliced| {
        ev.curve_points = Some(on.len());
        ev.splice_rank = Some(s.rank);
        ev.splice_family_dim = Some(s.family_dim);
        ev.splice_intersection_dim = Some(s.meet_dim);
    };

    let heavy = find_heavy_line(&dec.points, ev.line_threshold);
    ev.heavy_lines = heavy.len();
    for (line, on) in &heavy {
        let curve = Curve::Line(line.clone());
        if let Some(s) = analyze_splice(dec, on, &curve)? {
            record(&mut ev, on, &s);
            if s.family_dim >= 1 {
                return Ok(StructureReport {
                    case: StructureCase::CaseA {
                        line: line.clone(),
                        on_curve: on.clone(),
                        residual: dec.points.difference(on),
                        splice: s.form,
                    },
                    evidence: ev,
                });
            }
        }
    }

    let conics: Vec<_> = find_heavy_conic(&dec.points, ev.conic_threshold)
        .into_iter()
        .filter(|(c, _)| c.is_smooth())
        .collect();
    ev.smooth_heavy_conics = conics.len();
    for (conic, on) in &conics {
        let curve = Curve::Conic(conic.clone());
        if let Some(s) = analyze_splice(dec, on, &curve)? {
            record(&mut ev, on, &s);
            if s.family_dim >= 1 {
                return Ok(StructureReport {
                    case: StructureCase::CaseB {
                        conic: conic.clone(),
                        on_curve: on.clone(),
                        residual: dec.points.difference(on),
                        splice: s.form,
                    },
                    evidence: ev,
                });
            }
        }
    }

    if d % 2 == 1 && heavy.is_empty() {
        if let Some((l1, l2, node, on)) = two_line_split(&dec.points, d) {
            ev.curve_points = Some(on.len());
            return Ok(StructureReport {
                case: StructureCase::CaseC {
                    l1,
                    l2,
                    node,
                    residual: dec.points.difference(&on),
                },
                evidence: ev,
            });
        }
    }

    Ok(StructureReport {
        case: StructureCase::UniqueWitness,
        evidence: ev,
    })
}

/// Two coplanar lines with exactly `(d+1)/2` points of `A` each, meeting
/// off `A`.
fn two_line_split(a: &PointSet, d: u32) -> Option<(Line, Line, ProjPoint, PointSet)> {
    let h = (d as usize).div_ceil(2);
    let lines: Vec<_> = find_heavy_line(a, h.max(2))
        .into_iter()
        .filter(|(_, on)| on.len() == h)
        .collect();
    for (i, (l1, on1)) in lines.iter().enumerate() {
        for (l2, on2) in &lines[i + 1..] {
            let Some(node) = l1.meet(l2) else {
                continue;
            };
            if a.contains(&node) {
                continue;
            }
            return Some((l1.clone(), l2.clone(), node, on1.union(on2)));
        }
    }
    None
}

fn certified(target: &AmbientVector, points: PointSet, space: VeroneseSpace) -> Option<Decomposition> {
    let dec = Decomposition::from_points(target.clone(), points, space).ok()?;
    verify_decomposition(&dec).valid.then_some(dec)
}

/// Decompositions `E ∪ F` of `P`, with `E` running over decompositions of
/// the splice form on the heavy curve.
pub fn generate_family(
    dec: &Decomposition,
    report: &StructureReport,
    count: usize,
    seed: u64,
) -> Result<Vec<Decomposition>> {
    let (curve, on, residual, splice) = match &report.case {
        StructureCase::CaseA {
            line,
            on_curve,
            residual,
            splice,
        } => (Curve::Line(line.clone()), on_curve, residual, splice),
        StructureCase::CaseB {
            conic,
            on_curve,
            residual,
            splice,
        } => (Curve::Conic(conic.clone()), on_curve, residual, splice),
        _ => {
            return Err(Error::FamilyEmpty(
                "families on a curve need a heavy line or smooth conic".into(),
            ))
        }
    };
    if count == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for e in decomposition_family(splice, count, seed)? {
        let image: PointSet = e
            .nodes
            .iter()
            .map(|u| curve.image(u))
            .collect::<Result<_>>()?;
        if image.len() != on.len() || !image.is_disjoint(residual) {
            continue;
        }
        if let Some(member) = certified(&dec.target, image.union(residual), dec.space) {
            out.push(member);
        }
    }
    if out.is_empty() {
        return Err(Error::FamilyEmpty("no family member certified".into()));
    }
    Ok(out)
}

/// Decompositions of `P` splitting across the two lines of a reducible
/// conic: the curve part `Q_1 + Q_2` is rewritten as
/// `(Q_1 + γ ν_d(O)) + (Q_2 − γ ν_d(O))` and each summand is decomposed on
/// its line.
pub fn case_c_family(
    dec: &Decomposition,
    report: &StructureReport,
    count: usize,
    seed: u64,
) -> Result<Vec<Decomposition>> {
    let StructureCase::CaseC {
        l1,
        l2,
        node,
        residual,
    } = &report.case
    else {
        return Err(Error::FamilyEmpty("the two-line construction needs case C".into()));
    };
    let d = dec.d();
    if d.is_multiple_of(2) {
        return Err(Error::FamilyEmpty("the two-line construction needs odd degree".into()));
    }
    if count == 0 {
        return Ok(Vec::new());
    }
    let h = (d as usize).div_ceil(2);
    let space = dec.space;
    let field = dec.field();
    let dim = space.dim();
    let part = |line: &Line| -> Result<Vector> {
        let mut v = vec![field.zero(); dim];
        for (a, w) in dec.points.iter().zip(&dec.weights) {
            if line.contains(a) {
                v = axpy(&v, w, &veronese_map(a, space)?);
            }
        }
        Ok(v)
    };
    let (q1, q2) = (part(l1)?, part(l2)?);
    let nu_o = veronese_map(node, space)?;
    let (c1, c2) = (Curve::Line(l1.clone()), Curve::Line(l2.clone()));

    // D_i = ⟨ν_d(L_i)⟩ ∩ ⟨{P_T} ∪ ν_d(L_{3-i})⟩ should be the line through
    // Q_i and ν_d(O).
    let p_t: Vector = q1.iter().zip(&q2).map(|(a, b)| a + b).collect();
    for (ci, cj, qi) in [(&c1, &c2, &q1), (&c2, &c1, &q2)] {
        let own = ci.pullback_matrix(space)?.transpose().to_rows();
        let mut other = cj.pullback_matrix(space)?.transpose().to_rows();
        other.push(p_t.clone());
        let di = span_intersect_sets(field, dim, &own, &other);
        let with = [di.clone(), vec![qi.clone(), nu_o.clone()]].concat();
        if di.len() != 2 || crate::fieldpoly::vectors_rank(field, dim, &with) != 2 {
            return Err(Error::FamilyEmpty(format!(
                "auxiliary line has dimension {} instead of 2",
                di.len()
            )));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let one_side = |curve: &Curve, u: &Vector| -> Option<PointSet> {
        let b = curve.pull_back(space, u).ok()?;
        let analysis = sylvester_analyze(&b).ok()?;
        if analysis.rank != h {
            return None;
        }
        let nodes = sylvester_decompose(&b).ok()?.nodes;
        let image: PointSet = nodes
            .iter()
            .map(|u| curve.image(u))
            .collect::<Result<_>>()
            .ok()?;
        (image.len() == h && !image.contains(node) && image.is_disjoint(residual)).then_some(image)
    };
    for _ in 0..CASE_C_RETRIES * count {
        if out.len() >= count {
            break;
        }
        let gamma = field.random(&mut rng);
        let u1 = axpy(&q1, &gamma, &nu_o);
        let u2 = axpy(&q2, &-gamma, &nu_o);
        let (Some(e1), Some(e2)) = (one_side(&c1, &u1), one_side(&c2, &u2)) else {
            continue;
        };
        let points = e1.union(&e2).union(residual);
        if points.len() != dec.len() || seen.contains(&points) {
            continue;
        }
        if let Some(member) = certified(&dec.target, points.clone(), space) {
            seen.insert(points);
            out.push(member);
        }
    }
    if out.is_empty() {
        return Err(Error::FamilyEmpty("no two-line family member certified".into()));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Unique,
    NonUnique(Vec<Decomposition>),
    OutOfRegime,
}

pub fn uniqueness_verdict(dec: &Decomposition) -> Result<Verdict> {
    let report = classify_decomposition(dec)?;
    match &report.case {
        StructureCase::Unknown => Ok(Verdict::OutOfRegime),
        StructureCase::UniqueWitness => Ok(Verdict::Unique),
        StructureCase::CaseC { .. } => Ok(Verdict::NonUnique(case_c_family(
            dec,
            &report,
            VERDICT_WITNESSES,
            0,
        )?)),
        _ => Ok(Verdict::NonUnique(generate_family(
            dec,
            &report,
            VERDICT_WITNESSES,
            0,
        )?)),
    }
}
