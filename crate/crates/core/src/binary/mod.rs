//! Rank theory for binary forms: catalecticants, border rank, Sylvester's
//! algorithm, decomposition families and projection from nodes.
//!
//! A [`BinaryForm`] of degree `d` is stored by its symmetric tensor
//! coordinates `P_0..P_d`, so that `ν_d(a, b) = (a^d, a^(d-1) b, ..., b^d)`
//! and the catalecticant is the Hankel matrix `H_k[i][j] = P_(i+j)`. A kernel
//! vector `g` of `H_k` is the apolar form `G = Σ g_j x^(k-j) y^j`, and the
//! nodes of a decomposition are the roots of a square-free apolar form.

mod poly;
mod search;

pub use poly::BinaryPoly;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fieldpoly::{
    binomial, is_zero_vector, parse_form_in, FieldSpec, HomogeneousForm, Matrix, PointSet,
    ProjPoint, Scalar,
};
use crate::veronese::{in_span, weighted_sum, VeroneseSpace};

const ANALYZE_SEED: u64 = 0x5eed_b1a7;

/// A nonzero binary form in symmetric tensor coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    field: FieldSpec,
    coeffs: Vec<Scalar>,
}

impl BinaryForm {
    pub fn from_tensor(field: FieldSpec, coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InfeasibleParameters("binary forms need degree >= 1".into()));
        }
        if is_zero_vector(&coeffs) {
            return Err(Error::ZeroForm);
        }
        Ok(BinaryForm { field, coeffs })
    }

    /// From polynomial coefficients `c_i` of `x^(d-i) y^i`.
    pub fn from_poly_coeffs(field: FieldSpec, coeffs: &[Scalar]) -> Result<Self> {
        let d = coeffs.len() as u64 - 1;
        let t = coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let b = field.from_bigint(&binomial(d, i as u64).into());
                if b.is_zero() {
                    if c.is_zero() {
                        return Ok(field.zero());
                    }
                    return Err(Error::CharacteristicTooSmall {
                        p: field.characteristic(),
                        what: format!("binomial({d}, {i}) vanishes"),
                    });
                }
                Ok(c / &b)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_tensor(field, t)
    }

    pub fn from_form(f: &HomogeneousForm) -> Result<Self> {
        if f.r() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: f.r() + 1,
            });
        }
        Self::from_tensor(f.field(), f.tensor_coordinates()?)
    }

    pub fn parse(text: &str, field: FieldSpec) -> Result<Self> {
        Self::from_form(&parse_form_in(text, field, Some(1))?)
    }

    /// `Σ w_i ν_d(n_i)`.
    pub fn from_nodes(nodes: &PointSet, weights: &[Scalar], d: u32) -> Result<Self> {
        let space = VeroneseSpace::new(1, d)?;
        let field = nodes.points().first().ok_or(Error::ZeroForm)?.field();
        Self::from_tensor(field, weighted_sum(nodes, weights, space)?)
    }

    pub fn to_form(&self) -> Result<HomogeneousForm> {
        HomogeneousForm::from_tensor(self.field, 1, self.degree(), &self.coeffs)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn degree(&self) -> u32 {
        self.coeffs.len() as u32 - 1
    }

    pub fn tensor(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn space(&self) -> VeroneseSpace {
        VeroneseSpace {
            r: 1,
            d: self.degree(),
        }
    }
}

/// `(d-k+1) × (k+1)` Hankel matrix `H_k[i][j] = P_(i+j)`.
pub fn catalecticant(f: &BinaryForm, k: usize) -> Matrix {
    let d = f.degree() as usize;
    assert!(k <= d, "catalecticant degree {k} exceeds {d}");
    let rows = (0..=d - k)
        .map(|i| (0..=k).map(|j| f.coeffs[i + j].clone()).collect())
        .collect();
    Matrix::from_rows(f.field, k + 1, rows)
}

/// Basis of the degree-`k` apolar forms; every form is apolar once `k > d`.
pub fn apolar_basis(f: &BinaryForm, k: usize) -> Vec<BinaryPoly> {
    let field = f.field;
    if k > f.degree() as usize {
        return (0..=k)
            .map(|j| {
                let mut c = vec![field.zero(); k + 1];
                c[j] = field.one();
                BinaryPoly::new(field, c)
            })
            .collect();
    }
    catalecticant(f, k)
        .kernel_basis()
        .into_iter()
        .map(|v| BinaryPoly::new(field, v))
        .collect()
}

/// Smallest `k` with a nonzero degree-`k` apolar form.
pub fn border_rank(f: &BinaryForm) -> usize {
    (1..)
        .find(|&k| !apolar_basis(f, k).is_empty())
        .expect("kernel is nonzero for k > d/2")
}

/// Outcome of Sylvester's algorithm on a binary form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryAnalysis {
    pub form: BinaryForm,
    pub border_rank: usize,
    /// Rank over the ground field: the least `s` with a square-free apolar
    /// form of degree `s` splitting into distinct linear factors.
    pub rank: usize,
    /// Rank over the algebraic closure: `t`, or `d + 2 - t` when the
    /// minimal apolar form has a repeated factor.
    pub geometric_rank: usize,
    pub apolar_low: BinaryPoly,
    pub apolar_low_squarefree: bool,
    /// Dimension of the degree-`rank` apolar system minus one.
    pub family_dim: usize,
    /// A split square-free apolar form of degree `rank`.
    pub witness: BinaryPoly,
}

impl BinaryAnalysis {
    pub fn has_infinite_family(&self) -> bool {
        self.family_dim >= 1
    }
}

fn low_representative(field: FieldSpec, kt: &[BinaryPoly]) -> (BinaryPoly, bool) {
    if kt.len() == 1 {
        return (kt[0].clone(), kt[0].is_squarefree());
    }
    // A pencil or larger system has square-free members; pick one.
    for c in 0..64i64 {
        let g = BinaryPoly::new(
            field,
            kt[0]
                .coeffs()
                .iter()
                .zip(kt[1].coeffs())
                .map(|(a, b)| a + &(b * &field.from_i64(c)))
                .collect(),
        );
        if g.is_squarefree() {
            return (g, true);
        }
    }
    (kt[0].clone(), true)
}

/// Border rank, rank, apolar data and a rank witness for `f`.
pub fn sylvester_analyze(f: &BinaryForm) -> Result<BinaryAnalysis> {
    let d = f.degree() as usize;
    let field = f.field;
    let t = border_rank(f);
    let kt = apolar_basis(f, t);
    let (apolar_low, low_sqfree) = low_representative(field, &kt);
    let geometric_rank = if low_sqfree { t } else { d + 2 - t };
    let mut rng = ChaCha8Rng::seed_from_u64(ANALYZE_SEED);

    let (rank, witness) = match field {
        FieldSpec::Prime(p) => {
            // Below d+2-t a one-dimensional K_t generates every apolar
            // system, so a non-split generator rules those degrees out.
            let start = if kt.len() == 1 && !kt[0].is_split_squarefree() {
                d + 2 - t
            } else {
                t
            };
            let mut found = None;
            for s in start..=d + 1 {
                let basis = apolar_basis(f, s);
                if let Some(w) = search::find_split_member_fp(&basis, s, p, &mut rng)? {
                    found = Some((s, w));
                    break;
                }
            }
            found.ok_or_else(|| {
                Error::NoRationalDecomposition(format!(
                    "F_{p} has too few points for a degree-{d} decomposition"
                ))
            })?
        }
        FieldSpec::Rational => {
            let s = geometric_rank;
            let basis = apolar_basis(f, s);
            match search::find_split_member_q(&basis, s, &mut rng) {
                Some(w) => (s, w),
                None => return Err(Error::NonSplitApolar(s)),
            }
        }
    };
    let family_dim = apolar_basis(f, rank).len() - 1;
    Ok(BinaryAnalysis {
        form: f.clone(),
        border_rank: t,
        rank,
        geometric_rank,
        apolar_low,
        apolar_low_squarefree: low_sqfree,
        family_dim,
        witness,
    })
}

/// Nodes and weights with `Σ w_i ν_d(node_i) = f` exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryDecomposition {
    pub nodes: PointSet,
    pub weights: Vec<Scalar>,
}

impl BinaryDecomposition {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Decomposition of `f` on the roots of the split square-free apolar form `g`.
pub fn decompose_with(f: &BinaryForm, g: &BinaryPoly) -> Result<BinaryDecomposition> {
    let roots = g.roots()?;
    if roots.len() != g.degree() {
        return Err(Error::NoSplitWitness(g.degree()));
    }
    nodes_decomposition(f, PointSet::new(roots))
}

/// Weights expressing `f` on the given nodes, if it lies in their span.
pub fn nodes_decomposition(f: &BinaryForm, nodes: PointSet) -> Result<BinaryDecomposition> {
    let weights = in_span(&f.coeffs, &nodes, f.space())?.ok_or_else(|| {
        Error::NoRationalDecomposition("form is not in the span of the nodes".into())
    })?;
    Ok(BinaryDecomposition { nodes, weights })
}

/// A minimal decomposition of `f` over the ground field.
pub fn sylvester_decompose(f: &BinaryForm) -> Result<BinaryDecomposition> {
    let analysis = match sylvester_analyze(f) {
        Err(Error::NonSplitApolar(s)) => return Err(Error::NoSplitWitness(s)),
        other => other?,
    };
    decompose_with(f, &analysis.witness)
}

/// Up to `count` distinct minimal decompositions of `f`, deterministic in
/// `seed`. A form whose minimal decomposition is unique yields just that one.
pub fn decomposition_family(
    f: &BinaryForm,
    count: usize,
    seed: u64,
) -> Result<Vec<BinaryDecomposition>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let analysis = sylvester_analyze(f)?;
    if analysis.family_dim == 0 {
        return Ok(vec![decompose_with(f, &analysis.witness)?]);
    }
    let s = analysis.rank;
    let basis = apolar_basis(f, s);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let members = match f.field {
        FieldSpec::Prime(p) => search::sample_split_members_fp(&basis, s, p, count, &mut rng),
        FieldSpec::Rational => search::sample_split_members_q(&basis, s, count, &mut rng),
    };
    let out = members
        .iter()
        .map(|g| decompose_with(f, g))
        .collect::<Result<Vec<_>>>()?;
    if out.is_empty() {
        return Err(Error::FamilyEmpty(format!(
            "no split square-free member of the degree-{s} apolar system found"
        )));
    }
    Ok(out)
}

/// Contraction of `f` by `Π_{e ∈ E} (b x - a y)`: the image of `f` under
/// projection from `⟨ν_d(E)⟩`, a form of degree `d - #E`.
pub fn project_from_nodes(f: &BinaryForm, e: &PointSet) -> Result<BinaryForm> {
    let d = f.degree() as usize;
    if e.is_empty() {
        return Ok(f.clone());
    }
    if e.len() >= d {
        return Err(Error::InfeasibleParameters(format!(
            "cannot project a degree-{d} form from {} nodes",
            e.len()
        )));
    }
    let g = BinaryPoly::from_roots(f.field, e.points());
    let q = catalecticant(f, e.len()).mul_vec(g.coeffs());
    if is_zero_vector(&q) {
        return Err(Error::DegenerateProjection);
    }
    BinaryForm::from_tensor(f.field, q)
}

/// `U ∪ E` with weights for `f`, if `f ∈ ⟨ν_d(U ∪ E)⟩`.
pub fn lift_decomposition(
    f: &BinaryForm,
    u: &PointSet,
    e: &PointSet,
) -> Result<Option<BinaryDecomposition>> {
    if !u.is_disjoint(e) {
        return Ok(None);
    }
    let nodes = u.union(e);
    Ok(in_span(&f.coeffs, &nodes, f.space())?.map(|weights| BinaryDecomposition { nodes, weights }))
}

/// All points of `P^1` over `F_p` as canonical points, in index order.
pub fn p1_points(field: FieldSpec) -> Result<Vec<ProjPoint>> {
    let p = field.require_prime("P^1 enumeration")?;
    Ok((0..=p).map(|i| poly::p1_point(field, p, i)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bf(text: &str, field: FieldSpec) -> BinaryForm {
        BinaryForm::parse(text, field).unwrap()
    }

    #[test]
    fn catalecticant_kernels() {
        let q = FieldSpec::Rational;
        let k = apolar_basis(&bf("x0^5", q), 1);
        assert_eq!(k.len(), 1);
        assert!(k[0].coeffs()[0].is_zero());
        assert!(apolar_basis(&bf("x0^3 + x1^3", q), 1).is_empty());
        assert_eq!(catalecticant(&bf("x0^3 + x1^3", q), 1).rank(), 2);
        // x y^(d-1) is killed by x^2.
        let k = apolar_basis(&bf("x0*x1^4", q), 2);
        assert_eq!(k.len(), 1);
        let g = &k[0];
        assert!(!g.coeffs()[0].is_zero());
        assert!(g.coeffs()[1].is_zero() && g.coeffs()[2].is_zero());
    }

    #[test]
    fn border_rank_examples() {
        let q = FieldSpec::Rational;
        assert_eq!(border_rank(&bf("x0^6", q)), 1);
        for d in 3..=8 {
            let f = bf(&format!("x0*x1^{}", d - 1), q);
            assert_eq!(border_rank(&f), 2);
        }
    }

    #[test]
    fn rank_of_x_y_power() {
        let f101 = FieldSpec::Prime(101);
        for d in 3..=8 {
            let a = sylvester_analyze(&bf(&format!("x0*x1^{}", d - 1), f101)).unwrap();
            assert_eq!(a.border_rank, 2);
            assert_eq!(a.rank, d);
            assert_eq!(a.geometric_rank, d);
            assert!(!a.apolar_low_squarefree);
        }
        let a = sylvester_analyze(&bf("x0^4", f101)).unwrap();
        assert_eq!((a.border_rank, a.rank, a.family_dim), (1, 1, 0));
    }

    #[test]
    fn decompose_sum_of_squares_over_f5() {
        let f5 = FieldSpec::Prime(5);
        let f = bf("x0^2 + x1^2", f5);
        let dec = sylvester_decompose(&f).unwrap();
        assert_eq!(dec.len(), 2);
        assert_eq!(BinaryForm::from_nodes(&dec.nodes, &dec.weights, 2).unwrap(), f);
        // The roots of x^2 + y^2 itself are not nodes: that form is not apolar.
        let roots: PointSet = [[1, 2], [1, 3]]
            .iter()
            .map(|c| ProjPoint::from_i64(f5, c).unwrap())
            .collect();
        assert!(in_span(f.tensor(), &roots, f.space()).unwrap().is_none());
    }

    #[test]
    fn decompose_power_and_xy2() {
        let f7 = FieldSpec::Prime(7);
        let dec = sylvester_decompose(&bf("x0^4", f7)).unwrap();
        assert_eq!(dec.nodes.points(), &[ProjPoint::from_i64(f7, &[1, 0]).unwrap()]);
        assert_eq!(dec.weights, vec![f7.one()]);
        let f = bf("x0*x1^2", f7);
        let dec = sylvester_decompose(&f).unwrap();
        assert_eq!(dec.len(), 3);
        assert_eq!(BinaryForm::from_nodes(&dec.nodes, &dec.weights, 3).unwrap(), f);
    }

    #[test]
    fn rational_decompositions() {
        let q = FieldSpec::Rational;
        let f = bf("x0^2 + x1^2", q);
        let dec = sylvester_decompose(&f).unwrap();
        assert_eq!(dec.len(), 2);
        assert_eq!(BinaryForm::from_nodes(&dec.nodes, &dec.weights, 2).unwrap(), f);
        // x^3 - 3 x y^2 = Re (x + iy)^3 needs complex nodes at rank 2.
        let g = bf("x0^3 - 3*x0*x1^2", q);
        assert_eq!(sylvester_analyze(&g), Err(Error::NonSplitApolar(2)));
        assert_eq!(sylvester_decompose(&g), Err(Error::NoSplitWitness(2)));
    }

    #[test]
    fn families() {
        let f101 = FieldSpec::Prime(101);
        let fam = decomposition_family(&bf("x0*x1^2", f101), 10, 3).unwrap();
        assert_eq!(fam.len(), 10);
        let sets: std::collections::HashSet<_> = fam.iter().map(|d| d.nodes.clone()).collect();
        assert_eq!(sets.len(), 10);
        let one = decomposition_family(&bf("x0^5", f101), 5, 0).unwrap();
        assert_eq!(one.len(), 1);
        assert!(decomposition_family(&bf("x0^5", f101), 0, 0).unwrap().is_empty());
    }

    #[test]
    fn projection_examples() {
        let f101 = FieldSpec::Prime(101);
        let f = bf("x0^5 + x1^5 + x0^3*x1^2", f101);
        assert_eq!(project_from_nodes(&f, &PointSet::empty()).unwrap(), f);
        let e: PointSet = [ProjPoint::from_i64(f101, &[1, 0]).unwrap()].into_iter().collect();
        assert_eq!(
            project_from_nodes(&bf("x0^5", f101), &e),
            Err(Error::DegenerateProjection)
        );
        let nodes: PointSet = [[1, 2], [1, 5], [1, 9], [0, 1]]
            .iter()
            .map(|c| ProjPoint::from_i64(f101, c).unwrap())
            .collect();
        let w: Vec<_> = [3, 4, 7, 11].iter().map(|&x| f101.from_i64(x)).collect();
        let f = BinaryForm::from_nodes(&nodes, &w, 6).unwrap();
        let e: PointSet = [nodes.points()[0].clone()].into_iter().collect();
        let rest = nodes.difference(&e);
        let q = project_from_nodes(&f, &e).unwrap();
        assert_eq!(q.degree(), 5);
        assert!(in_span(q.tensor(), &rest, q.space()).unwrap().is_some());
        let lifted = lift_decomposition(&f, &rest, &e).unwrap().unwrap();
        assert_eq!(lifted.nodes, nodes);
    }
}
