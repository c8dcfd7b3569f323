//! The Veronese embedding and linear algebra of finite point sets.

use rand::Rng;

use crate::error::{Error, Result};
use crate::fieldpoly::{
    axpy, binomial, monomials, subspace_intersect, vectors_rank, ExponentVector, FieldSpec,
    HomogeneousForm, Matrix, PointSet, ProjPoint, Scalar, Vector,
};

/// A point of `P^N`, or a vector in its cone, in symmetric tensor
/// coordinates indexed by degree-`d` monomials in graded lex order.
pub type AmbientVector = Vector;

/// `ν_d : P^r → P^N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VeroneseSpace {
    pub r: usize,
    pub d: u32,
}

impl VeroneseSpace {
    pub fn new(r: usize, d: u32) -> Result<Self> {
        if r < 1 || d < 1 {
            return Err(Error::InfeasibleParameters(format!(
                "need r >= 1 and d >= 1, got r={r}, d={d}"
            )));
        }
        Ok(VeroneseSpace { r, d })
    }

    /// `N = C(r+d, r) - 1`.
    pub fn n(&self) -> usize {
        binomial(self.r as u64 + self.d as u64, self.r as u64) as usize - 1
    }

    /// Number of ambient coordinates, `N + 1`.
    pub fn dim(&self) -> usize {
        self.n() + 1
    }

    pub fn monomials(&self) -> Vec<ExponentVector> {
        monomials(self.r + 1, self.d)
    }

    /// Tensor coordinates of a form living in this space.
    pub fn form_to_vector(&self, f: &HomogeneousForm) -> Result<AmbientVector> {
        if f.r() != self.r || f.degree() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: binomial(f.r() as u64 + f.degree() as u64, f.r() as u64) as usize,
            });
        }
        f.tensor_coordinates()
    }

    pub fn vector_to_form(&self, field: FieldSpec, v: &[Scalar]) -> Result<HomogeneousForm> {
        HomogeneousForm::from_tensor(field, self.r, self.d, v)
    }
}

/// Values of all degree-`t` monomials at `x` in graded lex order.
pub fn monomial_values(x: &[Scalar], t: u32) -> Vector {
    let field = x[0].field();
    let powers: Vec<Vec<Scalar>> = x
        .iter()
        .map(|xi| {
            let mut p = Vec::with_capacity(t as usize + 1);
            p.push(field.one());
            for k in 1..=t as usize {
                let next = &p[k - 1] * xi;
                p.push(next);
            }
            p
        })
        .collect();
    monomials(x.len(), t)
        .into_iter()
        .map(|e| {
            e.0.iter()
                .enumerate()
                .fold(field.one(), |acc, (i, &k)| acc * &powers[i][k as usize])
        })
        .collect()
}

/// `ν_d(a)`. For a canonical point the result is canonical as well: its
/// first nonzero coordinate is `a_i^d = 1`.
pub fn veronese_map(a: &ProjPoint, space: VeroneseSpace) -> Result<AmbientVector> {
    if a.coords().len() != space.r + 1 {
        return Err(Error::DimensionMismatch {
            expected: space.r + 1,
            got: a.coords().len(),
        });
    }
    Ok(monomial_values(a.coords(), space.d))
}

/// Images `ν_d(a)` of every point of `A`, in the set's order.
pub fn veronese_images(a: &PointSet, space: VeroneseSpace) -> Result<Vec<AmbientVector>> {
    a.iter().map(|p| veronese_map(p, space)).collect()
}

/// Projective dimension of `⟨ν_d(A)⟩`; `-1` for the empty set.
pub fn span_dim(a: &PointSet, space: VeroneseSpace) -> Result<isize> {
    if a.is_empty() {
        return Ok(-1);
    }
    let field = a.points()[0].field();
    let imgs = veronese_images(a, space)?;
    Ok(vectors_rank(field, space.dim(), &imgs) as isize - 1)
}

/// Rows are the degree-`t` monomial values at the points of `z`.
pub fn evaluation_matrix(z: &PointSet, t: u32) -> Matrix {
    let field = z.points()[0].field();
    let cols = binomial(z.points()[0].dim() as u64 + t as u64, t as u64) as usize;
    let rows = z.iter().map(|p| monomial_values(p.coords(), t)).collect();
    Matrix::from_rows(field, cols, rows)
}

/// `h¹(I_Z(t))` for a reduced finite set: `#Z` minus the number of
/// conditions `Z` imposes on forms of degree `t`.
pub fn hilbert_defect(z: &PointSet, t: u32) -> usize {
    if z.is_empty() {
        return 0;
    }
    z.len() - evaluation_matrix(z, t).rank()
}

/// Defect of `n` distinct collinear points in degree `t`.
pub fn collinear_defect(n: usize, t: u32) -> usize {
    n.saturating_sub(t as usize + 1)
}

/// A hypersurface of `P^r`, stored by its equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypersurface {
    pub equation: HomogeneousForm,
}

impl Hypersurface {
    pub fn new(equation: HomogeneousForm) -> Self {
        Hypersurface { equation }
    }

    pub fn degree(&self) -> u32 {
        self.equation.degree()
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.equation.evaluate(p.coords()).is_zero()
    }

    /// Some hyperplane through all the given points, if one exists.
    pub fn hyperplane_through(points: &[ProjPoint], r: usize) -> Option<Hypersurface> {
        let field = points.first()?.field();
        let rows: Vec<Vector> = points.iter().map(|p| p.to_vector()).collect();
        let kernel = Matrix::from_rows(field, r + 1, rows).kernel_basis();
        let normal = kernel.into_iter().next()?;
        let terms = normal.into_iter().enumerate().map(|(i, c)| {
            let mut e = vec![0u32; r + 1];
            e[i] = 1;
            (ExponentVector(e), c)
        });
        HomogeneousForm::new(field, r, terms).ok().map(Hypersurface::new)
    }
}

/// `Res_D(Z) = Z \ (Z ∩ D)` for reduced `Z`.
pub fn residual(z: &PointSet, d: &Hypersurface) -> PointSet {
    z.filter(|p| !d.contains(p))
}

/// `Z ∩ D`.
pub fn on_hypersurface(z: &PointSet, d: &Hypersurface) -> PointSet {
    z.filter(|p| d.contains(p))
}

/// Weights `c` with `Σ c_i ν_d(a_i) = P`, or `None` if `P ∉ ⟨ν_d(A)⟩`.
pub fn in_span(p: &[Scalar], a: &PointSet, space: VeroneseSpace) -> Result<Option<Vec<Scalar>>> {
    if p.len() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            got: p.len(),
        });
    }
    if a.is_empty() {
        return Ok(None);
    }
    let field = a.points()[0].field();
    let cols = veronese_images(a, space)?;
    let m = Matrix::from_columns(field, space.dim(), &cols);
    Ok(m.solve(p))
}

/// `Σ w_i ν_d(a_i)`.
pub fn weighted_sum(a: &PointSet, weights: &[Scalar], space: VeroneseSpace) -> Result<AmbientVector> {
    if a.len() != weights.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: weights.len(),
        });
    }
    let field = a
        .points()
        .first()
        .map(|p| p.field())
        .ok_or(Error::AllZero)?;
    let mut acc = vec![field.zero(); space.dim()];
    for (p, w) in a.iter().zip(weights) {
        acc = axpy(&acc, w, &veronese_map(p, space)?);
    }
    Ok(acc)
}

/// Basis of `⟨U⟩ ∩ ⟨W⟩`.
pub fn span_intersect_sets(
    field: FieldSpec,
    dim: usize,
    u: &[AmbientVector],
    w: &[AmbientVector],
) -> Vec<AmbientVector> {
    subspace_intersect(field, dim, u, w)
}

/// A random point of `P^r`: uniform over `F_p`, small integer coordinates over `Q`.
pub fn random_point<R: Rng + ?Sized>(field: FieldSpec, r: usize, rng: &mut R) -> ProjPoint {
    loop {
        let v: Vec<Scalar> = (0..=r).map(|_| field.random(rng)).collect();
        if let Ok(p) = ProjPoint::normalize(&v) {
            return p;
        }
    }
}

/// `n` distinct random points of `P^r`, none of which fails `keep`.
pub fn random_points<R: Rng + ?Sized>(
    field: FieldSpec,
    r: usize,
    n: usize,
    rng: &mut R,
    mut keep: impl FnMut(&ProjPoint) -> bool,
) -> Result<PointSet> {
    let mut out: Vec<ProjPoint> = Vec::with_capacity(n);
    let mut tries = 0usize;
    while out.len() < n {
        tries += 1;
        if tries > 1000 * (n + 1) {
            return Err(Error::InfeasibleParameters(format!(
                "could not sample {n} distinct points"
            )));
        }
        let p = random_point(field, r, rng);
        if keep(&p) && !out.contains(&p) {
            out.push(p);
        }
    }
    Ok(PointSet::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(field: FieldSpec, c: &[i64]) -> ProjPoint {
        ProjPoint::from_i64(field, c).unwrap()
    }

    #[test]
    fn veronese_map_examples() {
        let q = FieldSpec::Rational;
        let s = VeroneseSpace::new(1, 2).unwrap();
        assert_eq!(veronese_map(&pt(q, &[1, 1]), s).unwrap(), vec![q.one(); 3]);
        let s = VeroneseSpace::new(1, 3).unwrap();
        let v = veronese_map(&pt(q, &[1, 2]), s).unwrap();
        assert_eq!(v, [1, 2, 4, 8].map(|x| q.from_i64(x)).to_vec());
        let s = VeroneseSpace::new(2, 2).unwrap();
        assert_eq!(s.n(), 5);
        let v = veronese_map(&pt(q, &[1, 0, 0]), s).unwrap();
        assert_eq!(v, [1, 0, 0, 0, 0, 0].map(|x| q.from_i64(x)).to_vec());
        assert!(matches!(
            veronese_map(&pt(q, &[1, 0]), s),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn span_dim_on_a_line() {
        let q = FieldSpec::Rational;
        let s = VeroneseSpace::new(2, 4).unwrap();
        let line = |n: i64| -> PointSet { (0..n).map(|i| pt(q, &[1, i, 0])).collect() };
        assert_eq!(span_dim(&line(1), s).unwrap(), 0);
        assert_eq!(span_dim(&line(5), s).unwrap(), 4);
        assert_eq!(span_dim(&line(6), s).unwrap(), 4);
    }

    #[test]
    fn hilbert_defect_examples() {
        let q = FieldSpec::Rational;
        let line: PointSet = (0..6).map(|i| pt(q, &[1, i, 2 * i])).collect();
        assert_eq!(hilbert_defect(&line, 4), 1);
        let few: PointSet = (0..4).map(|i| pt(q, &[1, i, 0])).collect();
        assert_eq!(hilbert_defect(&few, 3), 0);
        let two: PointSet = [pt(q, &[1, 0, 0]), pt(q, &[0, 1, 0])].into_iter().collect();
        assert_eq!(hilbert_defect(&two, 1), 0);
    }

    #[test]
    fn residual_examples() {
        let q = FieldSpec::Rational;
        let x2 = Hypersurface::new(crate::fieldpoly::parse_form_in("x2", q, Some(2)).unwrap());
        let z: PointSet = [pt(q, &[1, 0, 0]), pt(q, &[0, 1, 0]), pt(q, &[1, 1, 1])]
            .into_iter()
            .collect();
        let res = residual(&z, &x2);
        assert_eq!(res.points(), &[pt(q, &[1, 1, 1])]);
        assert_eq!(on_hypersurface(&z, &x2).len() + res.len(), z.len());
        let on: PointSet = [pt(q, &[1, 0, 0])].into_iter().collect();
        assert!(residual(&on, &x2).is_empty());
        let off: PointSet = [pt(q, &[1, 1, 1])].into_iter().collect();
        assert_eq!(residual(&off, &x2), off);
    }

    #[test]
    fn in_span_examples() {
        let q = FieldSpec::Rational;
        let s = VeroneseSpace::new(1, 2).unwrap();
        let a: PointSet = [pt(q, &[1, 1]), pt(q, &[1, -1])].into_iter().collect();
        let p = vec![q.one(), q.zero(), q.one()];
        let w = in_span(&p, &a, s).unwrap().unwrap();
        let half = q.parse_scalar("1/2").unwrap();
        assert_eq!(w, vec![half.clone(), half]);
        let single: PointSet = [pt(q, &[1, 3])].into_iter().collect();
        let v = veronese_map(&pt(q, &[1, 3]), s).unwrap();
        assert_eq!(in_span(&v, &single, s).unwrap().unwrap(), vec![q.one()]);
    }

    #[test]
    fn hyperplane_through_points() {
        let q = FieldSpec::Rational;
        let pts = [pt(q, &[1, 0, 1]), pt(q, &[0, 1, 1])];
        let h = Hypersurface::hyperplane_through(&pts, 2).unwrap();
        assert!(pts.iter().all(|p| h.contains(p)));
        assert!(!h.contains(&pt(q, &[1, 0, 0])));
    }
}
