//! Dense exact linear algebra.
//!
//! Rank over the rationals uses fraction-free (Bareiss) elimination on an
//! integer-scaled copy; everything else runs Gauss-Jordan elimination in the
//! field itself. No tolerance is involved anywhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::scalar::{FieldSpec, Scalar};

pub type Vector = Vec<Scalar>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from rows of equal length `cols`.
    pub fn from_rows(field: FieldSpec, cols: usize, rows: Vec<Vector>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix");
            data.extend(row);
        }
        Matrix {
            field,
            rows: n,
            cols,
            data,
        }
    }

    /// Builds a matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(field: FieldSpec, rows: usize, columns: &[Vector]) -> Self {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| dot(self.field, self.row(i), v))
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = self.field.zero();
                for k in 0..self.cols {
                    acc = acc + self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Exact rank.
    pub fn rank(&self) -> usize {
        match self.field {
            FieldSpec::Rational => self.bareiss_rank(),
            FieldSpec::Prime(_) => self.rref().1.len(),
        }
    }

    /// Fraction-free elimination over the integers after clearing
    /// denominators row by row.
    pub fn bareiss_rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let mut a: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| integer_row(self.row(i)))
            .collect();
        let mut prev = BigInt::one();
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            for i in rank + 1..self.rows {
                for j in c + 1..self.cols {
                    let v = &a[rank][c] * &a[i][j] - &a[i][c] * &a[rank][j];
                    debug_assert!((&v % &prev).is_zero());
                    a[i][j] = v / &prev;
                }
                a[i][c] = BigInt::zero();
            }
            prev = a[rank][c].clone();
            rank += 1;
        }
        rank
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j) - &(&f * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Basis of the right null space; its size is `cols - rank`.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![None; self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(i);
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free].is_some() {
                continue;
            }
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -r.get(i, free);
            }
            basis.push(v);
        }
        basis
    }

    /// Some solution of `self · x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vector> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = r.get(i, self.cols).clone();
        }
        Some(x)
    }
}

fn integer_row(row: &[Scalar]) -> Vec<BigInt> {
    let rats: Vec<_> = row
        .iter()
        .map(|s| s.as_rational().expect("rational entries").clone())
        .collect();
    let lcm = rats
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    rats.iter()
        .map(|q| q.numer() * (&lcm / q.denom()))
        .collect()
}

pub fn dot(field: FieldSpec, a: &[Scalar], b: &[Scalar]) -> Scalar {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(field.zero(), |acc, (x, y)| acc + x * y)
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn scale(v: &[Scalar], c: &Scalar) -> Vector {
    v.iter().map(|x| x * c).collect()
}

/// `a + c·b`.
pub fn axpy(a: &[Scalar], c: &Scalar, b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + &(c * y)).collect()
}

/// Scales `v` so that its first nonzero entry is 1; zero vectors are returned unchanged.
pub fn projective_normalize(v: &[Scalar]) -> Vector {
    match v.iter().find(|x| !x.is_zero()) {
        Some(lead) => {
            let inv = lead.inv();
            v.iter().map(|x| x * &inv).collect()
        }
        None => v.to_vec(),
    }
}

/// Rank of a family of vectors of common length `dim`.
pub fn vectors_rank(field: FieldSpec, dim: usize, vectors: &[Vector]) -> usize {
    Matrix::from_rows(field, dim, vectors.to_vec()).rank()
}

/// An independent basis (rows of the echelon form) of the span of `vectors`.
pub fn span_basis(field: FieldSpec, dim: usize, vectors: &[Vector]) -> Vec<Vector> {
    let (r, pivots) = Matrix::from_rows(field, dim, vectors.to_vec()).rref();
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

/// Basis of `span(b1) ∩ span(b2)` inside `field^dim`.
pub fn subspace_intersect(
    field: FieldSpec,
    dim: usize,
    b1: &[Vector],
    b2: &[Vector],
) -> Vec<Vector> {
    if b1.is_empty() || b2.is_empty() {
        return Vec::new();
    }
    let u = span_basis(field, dim, b1);
    let w = span_basis(field, dim, b2);
    let mut cols: Vec<Vector> = u.clone();
    cols.extend(w.iter().map(|v| v.iter().map(|x| -x).collect()));
    let m = Matrix::from_columns(field, dim, &cols);
    let kernel = m.kernel_basis();
    let vecs: Vec<Vector> = kernel
        .iter()
        .map(|k| {
            let mut acc = vec![field.zero(); dim];
            for (c, ui) in k.iter().zip(&u) {
                acc = axpy(&acc, c, ui);
            }
            acc
        })
        .collect();
    span_basis(field, dim, &vecs)
}

/// Dimension of `span(b1) + span(b2)`.
pub fn subspace_sum_dim(field: FieldSpec, dim: usize, b1: &[Vector], b2: &[Vector]) -> usize {
    let mut all = b1.to_vec();
    all.extend(b2.iter().cloned());
    vectors_rank(field, dim, &all)
}
