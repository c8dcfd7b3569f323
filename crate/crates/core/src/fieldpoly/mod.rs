//! Exact scalars, homogeneous forms, projective points and dense linear algebra.

pub mod form;
pub mod matrix;
pub mod point;
pub mod scalar;

pub use form::{monomials, parse_form, parse_form_in, ExponentVector, HomogeneousForm};
pub use matrix::{
    axpy, dot, is_zero_vector, projective_normalize, span_basis, subspace_intersect,
    subspace_sum_dim, vectors_rank, Matrix, Vector,
};
pub use point::{projective_point_count, projective_points, PointSet, ProjPoint};
pub use scalar::{binomial, is_prime, multinomial, FieldSpec, Scalar};

/// Exact rank of a matrix.
pub fn mat_rank(m: &Matrix) -> usize {
    m.rank()
}

/// Basis of the right null space of `m`.
pub fn kernel_basis(m: &Matrix) -> Vec<Vector> {
    m.kernel_basis()
}

/// Canonical projective representative of `raw`.
pub fn normalize(raw: &[Scalar]) -> crate::Result<ProjPoint> {
    ProjPoint::normalize(raw)
}
