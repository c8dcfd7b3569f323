//! Parametrized lines and conics in `P^r`, and the pullback of `ν_d`
//! along a parametrization.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::binary::{BinaryForm, BinaryPoly};
use crate::error::{Error, Result};
use crate::fieldpoly::{
    dot, monomials, projective_normalize, span_basis, subspace_intersect, vectors_rank,
    ExponentVector, FieldSpec, HomogeneousForm, Matrix, PointSet, ProjPoint, Scalar, Vector,
};
use crate::veronese::{monomial_values, AmbientVector, VeroneseSpace};

/// A line of `P^r` parametrized by `(s : t) ↦ s·p + t·q`, where `p, q` is
/// the reduced echelon basis of the line (so the parametrization is
/// canonical).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Line {
    p: Vector,
    q: Vector,
}

impl Line {
    pub fn through(a: &ProjPoint, b: &ProjPoint) -> Result<Line> {
        let field = a.field();
        let basis = span_basis(field, a.dim() + 1, &[a.to_vector(), b.to_vector()]);
        if basis.len() != 2 {
            return Err(Error::InfeasibleParameters(
                "a line needs two distinct points".into(),
            ));
        }
        Ok(Line {
            p: basis[0].clone(),
            q: basis[1].clone(),
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.p[0].field()
    }

    pub fn r(&self) -> usize {
        self.p.len() - 1
    }

    /// The two echelon base points.
    pub fn base(&self) -> [ProjPoint; 2] {
        [
            ProjPoint::normalize(&self.p).expect("nonzero"),
            ProjPoint::normalize(&self.q).expect("nonzero"),
        ]
    }

    pub fn basis(&self) -> [Vector; 2] {
        [self.p.clone(), self.q.clone()]
    }

    pub fn contains(&self, x: &ProjPoint) -> bool {
        vectors_rank(
            self.field(),
            self.p.len(),
            &[self.p.clone(), self.q.clone(), x.to_vector()],
        ) == 2
    }

    pub fn image(&self, u: &ProjPoint) -> ProjPoint {
        let (s, t) = (&u.coords()[0], &u.coords()[1]);
        let v: Vector = self.p.iter().zip(&self.q).map(|(a, b)| s * a + t * b).collect();
        ProjPoint::normalize(&v).expect("injective parametrization")
    }

    pub fn preimage(&self, x: &ProjPoint) -> Option<ProjPoint> {
        let m = Matrix::from_columns(self.field(), self.p.len(), &[self.p.clone(), self.q.clone()]);
        let st = m.solve(x.coords())?;
        ProjPoint::normalize(&st).ok()
    }

    /// Coordinate functions as linear binary forms.
    pub fn param_polys(&self) -> Vec<BinaryPoly> {
        self.p
            .iter()
            .zip(&self.q)
            .map(|(a, b)| BinaryPoly::new(self.field(), vec![a.clone(), b.clone()]))
            .collect()
    }

    pub fn meet(&self, other: &Line) -> Option<ProjPoint> {
        let i = subspace_intersect(
            self.field(),
            self.p.len(),
            &[self.p.clone(), self.q.clone()],
            &[other.p.clone(), other.q.clone()],
        );
        if i.len() == 1 {
            ProjPoint::normalize(&i[0]).ok()
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConicKind {
    Smooth,
    TwoLines(Line, Line),
}

/// A plane conic in `P^r`: a plane (echelon basis) and an equation in the
/// plane's coordinates. Smooth conics carry a rational parametrization by
/// projection from one of their points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conic {
    plane: [Vector; 3],
    equation: HomogeneousForm,
    kind: ConicKind,
    param: Option<ConicParam>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct ConicParam {
    o: Vector,
    v1: Vector,
    v2: Vector,
    /// Plane coordinates of the parametrization, as binary quadrics.
    comps: Vec<BinaryPoly>,
}

impl Conic {
    /// The unique conic through five coplanar points, if there is one and it
    /// is not a double line.
    pub fn fit(points: &[ProjPoint]) -> Option<Conic> {
        let field = points.first()?.field();
        let n = points[0].dim() + 1;
        let rows: Vec<Vector> = points.iter().map(|p| p.to_vector()).collect();
        let basis = span_basis(field, n, &rows);
        if basis.len() != 3 {
            return None;
        }
        let plane = [basis[0].clone(), basis[1].clone(), basis[2].clone()];
        let coords: Vec<Vector> = points
            .iter()
            .map(|p| plane_coords_in(&plane, p))
            .collect::<Option<_>>()?;
        let m = Matrix::from_rows(
            field,
            6,
            coords.iter().map(|c| monomial_values(c, 2)).collect(),
        );
        let kernel = m.kernel_basis();
        if kernel.len() != 1 {
            return None;
        }
        let coeffs = projective_normalize(&kernel[0]);
        let equation = HomogeneousForm::new(
            field,
            2,
            monomials(3, 2).into_iter().zip(coeffs),
        )
        .ok()?;
        Conic::from_equation(plane, equation, points)
    }

    fn from_equation(plane: [Vector; 3], equation: HomogeneousForm, points: &[ProjPoint]) -> Option<Conic> {
        let field = equation.field();
        let sym = symmetric_matrix(&equation);
        let rank = sym.rank();
        let mut conic = Conic {
            plane,
            equation,
            kind: ConicKind::Smooth,
            param: None,
        };
        match rank {
            3 => {
                let o = conic.plane_coords(&points[0])?;
                conic.param = Some(ConicParam::new(field, &sym, o));
                Some(conic)
            }
            2 => {
                // Split the points by the lines through the singular point.
                let node_c = sym.kernel_basis().pop()?;
                let node = conic.point_in_plane(&node_c)?;
                let mut groups: BTreeMap<Vec<Vector>, Line> = BTreeMap::new();
                for p in points {
                    if *p == node {
                        continue;
                    }
                    let l = Line::through(&node, p).ok()?;
                    groups.entry(l.basis().to_vec()).or_insert(l);
                }
                if groups.len() != 2 {
                    return None;
                }
                let mut it = groups.into_values();
                let (l1, l2) = (it.next()?, it.next()?);
                conic.kind = ConicKind::TwoLines(l1, l2);
                Some(conic)
            }
            _ => None,
        }
    }

    /// The reducible conic `l1 ∪ l2` of two distinct coplanar lines.
    pub fn from_lines(l1: &Line, l2: &Line) -> Option<Conic> {
        let field = l1.field();
        let mut all = l1.basis().to_vec();
        all.extend(l2.basis());
        let basis = span_basis(field, all[0].len(), &all);
        if basis.len() != 3 {
            return None;
        }
        let plane = [basis[0].clone(), basis[1].clone(), basis[2].clone()];
        let linear = |l: &Line| -> Option<Vector> {
            let [p, q] = l.base();
            let (a, b) = (plane_coords_in(&plane, &p)?, plane_coords_in(&plane, &q)?);
            Some(vec![
                &a[1] * &b[2] - &a[2] * &b[1],
                &a[2] * &b[0] - &a[0] * &b[2],
                &a[0] * &b[1] - &a[1] * &b[0],
            ])
        };
        let (f1, f2) = (linear(l1)?, linear(l2)?);
        let mut terms = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                let mut e = vec![0u32; 3];
                e[i] += 1;
                e[j] += 1;
                terms.push((ExponentVector(e), &f1[i] * &f2[j]));
            }
        }
        let eq = HomogeneousForm::new(field, 2, terms).ok()?;
        let coeffs = projective_normalize(
            &monomials(3, 2).iter().map(|e| eq.coeff(e)).collect::<Vec<_>>(),
        );
        let equation = HomogeneousForm::new(field, 2, monomials(3, 2).into_iter().zip(coeffs)).ok()?;
        let (a, b) = if l1.basis() <= l2.basis() { (l1, l2) } else { (l2, l1) };
        Some(Conic {
            plane,
            equation,
            kind: ConicKind::TwoLines(a.clone(), b.clone()),
            param: None,
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.equation.field()
    }

    pub fn kind(&self) -> &ConicKind {
        &self.kind
    }

    pub fn is_smooth(&self) -> bool {
        matches!(self.kind, ConicKind::Smooth)
    }

    pub fn equation(&self) -> &HomogeneousForm {
        &self.equation
    }

    pub fn plane(&self) -> [ProjPoint; 3] {
        self.plane
            .clone()
            .map(|v| ProjPoint::normalize(&v).expect("nonzero"))
    }

    pub fn plane_coords(&self, x: &ProjPoint) -> Option<Vector> {
        plane_coords_in(&self.plane, x)
    }

    fn point_in_plane(&self, c: &[Scalar]) -> Option<ProjPoint> {
        let n = self.plane[0].len();
        let field = self.field();
        let v: Vector = (0..n)
            .map(|j| (0..3).fold(field.zero(), |acc, i| acc + &c[i] * &self.plane[i][j]))
            .collect();
        ProjPoint::normalize(&v).ok()
    }

    pub fn contains(&self, x: &ProjPoint) -> bool {
        self.plane_coords(x)
            .is_some_and(|c| self.equation.evaluate(&c).is_zero())
    }

    /// Canonical identity: plane basis plus normalized equation.
    pub fn key(&self) -> (Vec<Vector>, Vec<Scalar>) {
        let eq: Vec<Scalar> = monomials(3, 2)
            .iter()
            .map(|e| self.equation.coeff(e))
            .collect();
        (self.plane.to_vec(), projective_normalize(&eq))
    }

    fn param(&self) -> Result<&ConicParam> {
        self.param
            .as_ref()
            .ok_or_else(|| Error::PreconditionFailed("conic is not smooth".into()))
    }

    pub fn image(&self, u: &ProjPoint) -> Result<ProjPoint> {
        let par = self.param()?;
        let c: Vector = par
            .comps
            .iter()
            .map(|g| g.eval(&u.coords()[0], &u.coords()[1]))
            .collect();
        self.point_in_plane(&c)
            .ok_or_else(|| Error::PreconditionFailed("degenerate parametrization".into()))
    }

    pub fn preimage(&self, x: &ProjPoint) -> Option<ProjPoint> {
        let par = self.param.as_ref()?;
        if !self.contains(x) {
            return None;
        }
        let field = self.field();
        let c = self.plane_coords(x)?;
        let sym = symmetric_matrix(&self.equation);
        let mo = sym.mul_vec(&par.o);
        if vectors_rank(field, 3, &[c.clone(), par.o.clone()]) == 1 {
            // The point of projection corresponds to the tangent direction.
            let a = dot(field, &mo, &par.v1);
            let b = dot(field, &mo, &par.v2);
            return ProjPoint::normalize(&[b, -a]).ok();
        }
        let m = Matrix::from_columns(field, 3, &[par.o.clone(), par.v1.clone(), par.v2.clone()]);
        let sol = m.solve(&c)?;
        ProjPoint::normalize(&sol[1..]).ok()
    }

    /// Ambient coordinate functions as binary quadrics.
    pub fn param_polys(&self) -> Result<Vec<BinaryPoly>> {
        let par = self.param()?;
        let field = self.field();
        let n = self.plane[0].len();
        Ok((0..n)
            .map(|j| {
                let coeffs = (0..3)
                    .map(|k| {
                        (0..3).fold(field.zero(), |acc, i| {
                            acc + &par.comps[i].coeffs()[k] * &self.plane[i][j]
                        })
                    })
                    .collect();
                BinaryPoly::new(field, coeffs)
            })
            .collect())
    }
}

impl ConicParam {
    fn new(field: FieldSpec, sym: &Matrix, o: Vector) -> Self {
        let lead = o.iter().position(|x| !x.is_zero()).expect("nonzero");
        let mut others = (0..3).filter(|&i| i != lead);
        let unit = |i: usize| -> Vector {
            let mut v = vec![field.zero(); 3];
            v[i] = field.one();
            v
        };
        let v1 = unit(others.next().unwrap());
        let v2 = unit(others.next().unwrap());
        let q = |a: &Vector, b: &Vector| dot(field, a, &sym.mul_vec(b));
        let (q11, q12, q22) = (q(&v1, &v1), q(&v1, &v2), q(&v2, &v2));
        let (a, b) = (q(&o, &v1), q(&o, &v2));
        let two = field.from_i64(2);
        // φ(s, t) = Q(v)·o − 2 (oᵀ M v)·v with v = s v1 + t v2.
        let comps = (0..3)
            .map(|i| {
                let c0 = &q11 * &o[i] - &two * &a * &v1[i];
                let c1 = &two * &q12 * &o[i] - &two * &(&a * &v2[i] + &b * &v1[i]);
                let c2 = &q22 * &o[i] - &two * &b * &v2[i];
                BinaryPoly::new(field, vec![c0, c1, c2])
            })
            .collect();
        ConicParam { o, v1, v2, comps }
    }
}

fn plane_coords_in(plane: &[Vector; 3], x: &ProjPoint) -> Option<Vector> {
    let field = x.field();
    let m = Matrix::from_columns(field, plane[0].len(), plane);
    m.solve(x.coords())
}

/// `M` with `Q(v) = vᵀ M v`; needs characteristic other than 2.
fn symmetric_matrix(q: &HomogeneousForm) -> Matrix {
    let field = q.field();
    let half = field.from_i64(2).inv();
    let mut m = Matrix::zeros(field, 3, 3);
    for i in 0..3 {
        for j in i..3 {
            let mut e = vec![0u32; 3];
            e[i] += 1;
            e[j] += 1;
            let c = q.coeff(&ExponentVector(e));
            if i == j {
                m.set(i, i, c);
            } else {
                let h = &c * &half;
                m.set(i, j, h.clone());
                m.set(j, i, h);
            }
        }
    }
    m
}

/// A line or smooth conic with its parametrization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Curve {
    Line(Line),
    Conic(Conic),
}

impl Curve {
    /// Degree of the parametrization.
    pub fn param_degree(&self) -> u32 {
        match self {
            Curve::Line(_) => 1,
            Curve::Conic(_) => 2,
        }
    }

    pub fn contains(&self, x: &ProjPoint) -> bool {
        match self {
            Curve::Line(l) => l.contains(x),
            Curve::Conic(c) => c.contains(x),
        }
    }

    pub fn image(&self, u: &ProjPoint) -> Result<ProjPoint> {
        match self {
            Curve::Line(l) => Ok(l.image(u)),
            Curve::Conic(c) => c.image(u),
        }
    }

    pub fn preimage(&self, x: &ProjPoint) -> Option<ProjPoint> {
        match self {
            Curve::Line(l) => l.preimage(x),
            Curve::Conic(c) => c.preimage(x),
        }
    }

    pub fn param_polys(&self) -> Result<Vec<BinaryPoly>> {
        match self {
            Curve::Line(l) => Ok(l.param_polys()),
            Curve::Conic(c) => c.param_polys(),
        }
    }

    /// `M` with `ν_d(φ(u)) = M · ν_{d·e}(u)` for the degree-`e`
    /// parametrization `φ`.
    pub fn pullback_matrix(&self, space: VeroneseSpace) -> Result<Matrix> {
        let polys = self.param_polys()?;
        let field = polys[0].field();
        let de = (space.d * self.param_degree()) as usize;
        let rows = space
            .monomials()
            .iter()
            .map(|alpha| {
                let mut acc = BinaryPoly::new(field, vec![field.one()]);
                for (g, &k) in polys.iter().zip(&alpha.0) {
                    for _ in 0..k {
                        acc = acc.mul(g);
                    }
                }
                debug_assert_eq!(acc.degree(), de);
                acc.coeffs().to_vec()
            })
            .collect();
        Ok(Matrix::from_rows(field, de + 1, rows))
    }

    /// The binary form `B` of degree `d·e` with `M·B = v`, if `v` lies in
    /// the span of `ν_d` of the curve.
    pub fn pull_back(&self, space: VeroneseSpace, v: &AmbientVector) -> Result<BinaryForm> {
        let m = self.pullback_matrix(space)?;
        let b = m.solve(v).ok_or_else(|| {
            Error::PreconditionFailed("vector is not in the span of the curve".into())
        })?;
        BinaryForm::from_tensor(v[0].field(), b)
    }

    pub fn push_forward(&self, space: VeroneseSpace, b: &BinaryForm) -> Result<AmbientVector> {
        Ok(self.pullback_matrix(space)?.mul_vec(b.tensor()))
    }
}

/// Lines spanned by pairs of points of `A` carrying at least `threshold`
/// points of `A`, with their incidence sets, in canonical order.
pub fn find_heavy_line(a: &PointSet, threshold: usize) -> Vec<(Line, PointSet)> {
    let mut seen: BTreeMap<[Vector; 2], (Line, PointSet)> = BTreeMap::new();
    for (x, y) in a.points().iter().tuple_combinations() {
        let Ok(line) = Line::through(x, y) else {
            continue;
        };
        let key = line.basis();
        if seen.contains_key(&key) {
            continue;
        }
        let on = a.filter(|p| line.contains(p));
        seen.insert(key, (line, on));
    }
    seen.into_values()
        .filter(|(_, on)| on.len() >= threshold.max(2))
        .collect()
}

/// Conics carrying at least `threshold` points of `A`, in canonical order:
/// those through coplanar 5-subsets with a unique conic through them (not a
/// double line), and unions of two coplanar lines spanned by points of `A`.
pub fn find_heavy_conic(a: &PointSet, threshold: usize) -> Vec<(Conic, PointSet)> {
    let mut seen: BTreeMap<(Vec<Vector>, Vec<Scalar>), (Conic, PointSet)> = BTreeMap::new();
    let lines = find_heavy_line(a, 2);
    for ((l1, on1), (l2, on2)) in lines.iter().tuple_combinations() {
        if on1.len() + on2.len() < threshold {
            continue;
        }
        if let Some(conic) = Conic::from_lines(l1, l2) {
            let key = conic.key();
            seen.entry(key)
                .or_insert_with(|| (conic, on1.union(on2)));
        }
    }
    for five in a.points().iter().cloned().combinations(5) {
        let Some(conic) = Conic::fit(&five) else {
            continue;
        };
        let key = conic.key();
        if seen.contains_key(&key) {
            continue;
        }
        let on = a.filter(|p| conic.contains(p));
        seen.insert(key, (conic, on));
    }
    seen.into_values()
        .filter(|(_, on)| on.len() >= threshold.max(5))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::veronese::veronese_map;

    fn pt(f: FieldSpec, c: &[i64]) -> ProjPoint {
        ProjPoint::from_i64(f, c).unwrap()
    }

    #[test]
    fn line_param_round_trip() {
        let f = FieldSpec::Prime(101);
        let l = Line::through(&pt(f, &[1, 2, 3]), &pt(f, &[0, 1, 5])).unwrap();
        for s in 0..5 {
            let u = pt(f, &[1, s]);
            let x = l.image(&u);
            assert!(l.contains(&x));
            assert_eq!(l.preimage(&x).unwrap(), u);
        }
        assert!(!l.contains(&pt(f, &[0, 0, 1])));
    }

    #[test]
    fn conic_fit_and_param() {
        let f = FieldSpec::Prime(10007);
        // x0 x2 = x1^2 inside the plane x3 = x0 + x1 of P^3.
        let on = |s: i64, t: i64| pt(f, &[s * s, s * t, t * t, s * s + s * t]);
        let pts: Vec<_> = [(1, 0), (0, 1), (1, 1), (1, 2), (1, 3)]
            .iter()
            .map(|&(s, t)| on(s, t))
            .collect();
        let c = Conic::fit(&pts).unwrap();
        assert!(c.is_smooth());
        assert!(c.contains(&on(2, 7)));
        assert!(!c.contains(&pt(f, &[1, 0, 0, 0])));
        assert!(!c.contains(&pt(f, &[1, 1, 0, 2])));
        for u in [pt(f, &[1, 5]), pt(f, &[0, 1]), pt(f, &[1, 0])] {
            let x = c.image(&u).unwrap();
            assert!(c.contains(&x));
            assert_eq!(c.preimage(&x).unwrap(), u);
        }
        for p in &pts {
            let u = c.preimage(p).unwrap();
            assert_eq!(&c.image(&u).unwrap(), p);
        }
    }

    #[test]
    fn pullback_matches_veronese() {
        let f = FieldSpec::Prime(10007);
        let space = VeroneseSpace::new(2, 3).unwrap();
        let l = Curve::Line(Line::through(&pt(f, &[1, 2, 3]), &pt(f, &[1, 0, 7])).unwrap());
        let u = pt(f, &[1, 9]);
        let x = l.image(&u).unwrap();
        let m = l.pullback_matrix(space).unwrap();
        let nu1 = veronese_map(&u, VeroneseSpace::new(1, 3).unwrap()).unwrap();
        let lhs = crate::fieldpoly::projective_normalize(&m.mul_vec(&nu1));
        assert_eq!(lhs, veronese_map(&x, space).unwrap());
    }

    #[test]
    fn heavy_lines() {
        let f = FieldSpec::Prime(10007);
        let five: PointSet = (0..5).map(|i| pt(f, &[1, i, 0])).collect();
        let found = find_heavy_line(&five, 4);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].1.len(), 5);
        let mut two = Vec::new();
        for i in 1..4 {
            two.push(pt(f, &[1, i, 0]));
            two.push(pt(f, &[1, 0, i]));
        }
        let lines = find_heavy_line(&PointSet::new(two), 3);
        assert_eq!(lines.len(), 2);
    }

    #[test]
    fn two_lines_conic() {
        let f = FieldSpec::Prime(10007);
        let pts = vec![
            pt(f, &[1, 1, 0]),
            pt(f, &[1, 2, 0]),
            pt(f, &[1, 3, 0]),
            pt(f, &[1, 0, 1]),
            pt(f, &[1, 0, 2]),
        ];
        let c = Conic::fit(&pts).unwrap();
        assert!(matches!(c.kind(), ConicKind::TwoLines(_, _)));
    }
}
