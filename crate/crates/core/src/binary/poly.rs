//! Binary forms as polynomials: `G = Σ g_j x^(k-j) y^j`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fieldpoly::{FieldSpec, ProjPoint, Scalar};

/// Arithmetic in `F_p` on raw residues.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Fp {
    pub p: u64,
}

impl Fp {
    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }
    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }
    pub fn inv(self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }
}

/// Index of a point of `P^1(F_p)`: `i < p` is `(1 : i)`, `p` is `(0 : 1)`.
pub(crate) fn p1_point(field: FieldSpec, p: u64, idx: u64) -> ProjPoint {
    let coords = if idx == p {
        [field.zero(), field.one()]
    } else {
        [field.one(), field.from_u64(idx)]
    };
    ProjPoint::normalize(&coords).expect("nonzero")
}

/// A homogeneous binary polynomial of degree `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryPoly {
    field: FieldSpec,
    coeffs: Vec<Scalar>,
}

impl BinaryPoly {
    pub fn new(field: FieldSpec, coeffs: Vec<Scalar>) -> Self {
        assert!(!coeffs.is_empty());
        BinaryPoly { field, coeffs }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `g_j`, the coefficient of `x^(k-j) y^j`.
    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// `Π (b x - a y)` over the points `(a : b)`; the empty product is `1`.
    pub fn from_roots(field: FieldSpec, roots: &[ProjPoint]) -> Self {
        let mut acc = BinaryPoly::new(field, vec![field.one()]);
        for e in roots {
            let c = e.coords();
            acc = acc.mul(&BinaryPoly::new(field, vec![c[1].clone(), -&c[0]]));
        }
        acc
    }

    pub fn mul(&self, other: &BinaryPoly) -> BinaryPoly {
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        BinaryPoly::new(self.field, out)
    }

    pub fn eval(&self, a: &Scalar, b: &Scalar) -> Scalar {
        let k = self.degree() as u32;
        let mut acc = self.field.zero();
        for (j, g) in self.coeffs.iter().enumerate() {
            if !g.is_zero() {
                acc = acc + g * &(a.pow(k - j as u32) * b.pow(j as u32));
            }
        }
        acc
    }

    pub fn vanishes_at(&self, pt: &ProjPoint) -> bool {
        let c = pt.coords();
        self.eval(&c[0], &c[1]).is_zero()
    }

    fn residues(&self) -> Vec<u64> {
        self.coeffs
            .iter()
            .map(|c| c.residue().expect("prime field"))
            .collect()
    }

    /// Distinct roots in `P^1` over the ground field. Over `F_p` this scans
    /// all `p + 1` points; over the rationals it uses the rational root test.
    pub fn roots(&self) -> Result<Vec<ProjPoint>> {
        if self.is_zero() {
            return Err(Error::ZeroForm);
        }
        match self.field {
            FieldSpec::Prime(p) => Ok(self
                .root_indices_fp(p)
                .into_iter()
                .map(|i| p1_point(self.field, p, i))
                .collect()),
            FieldSpec::Rational => self.rational_roots(),
        }
    }

    pub(crate) fn root_indices_fp(&self, p: u64) -> Vec<u64> {
        let g = self.residues();
        let fp = Fp { p };
        let mut out = Vec::new();
        for t in 0..p {
            let mut acc = 0u64;
            for c in g.iter().rev() {
                acc = fp.add(fp.mul(acc, t), *c);
            }
            if acc == 0 {
                out.push(t);
            }
        }
        if *g.last().unwrap() == 0 {
            out.push(p);
        }
        out
    }

    /// Number of distinct roots over the ground field.
    pub fn distinct_root_count(&self) -> Result<usize> {
        match self.field {
            FieldSpec::Prime(p) => Ok(self.root_indices_fp(p).len()),
            FieldSpec::Rational => self.roots().map(|r| r.len()),
        }
    }

    /// True when the form is a product of `k` distinct linear forms over the
    /// ground field.
    pub fn is_split_squarefree(&self) -> bool {
        !self.is_zero() && self.distinct_root_count().ok() == Some(self.degree())
    }

    fn rational_roots(&self) -> Result<Vec<ProjPoint>> {
        let q = self.field;
        let mut out = Vec::new();
        let k = self.degree();
        if self.coeffs[k].is_zero() {
            out.push(ProjPoint::normalize(&[q.zero(), q.one()])?);
        }
        // Dehomogenize at x = 1: g(t) = Σ g_j t^j, cleared to integers.
        let rats: Vec<BigRational> = self
            .coeffs
            .iter()
            .map(|c| c.as_rational().expect("rational").clone())
            .collect();
        let lcm = rats.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut ints: Vec<BigInt> = rats.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
        while ints.last().is_some_and(|c| c.is_zero()) {
            ints.pop();
        }
        let mut low = 0;
        while low < ints.len() && ints[low].is_zero() {
            low += 1;
        }
        if low > 0 {
            out.push(ProjPoint::normalize(&[q.one(), q.zero()])?);
            ints.drain(..low);
        }
        if ints.len() >= 2 {
            let nums = divisors(&ints[0])?;
            let dens = divisors(ints.last().unwrap())?;
            let mut found: Vec<BigRational> = Vec::new();
            for u in &nums {
                for v in &dens {
                    for sign in [1i32, -1] {
                        let cand = BigRational::new(u * BigInt::from(sign), v.clone());
                        if found.contains(&cand) {
                            continue;
                        }
                        let mut acc = BigRational::zero();
                        for c in ints.iter().rev() {
                            acc = acc * &cand + BigRational::from_integer(c.clone());
                        }
                        if acc.is_zero() {
                            found.push(cand);
                        }
                    }
                }
            }
            for t in found {
                out.push(ProjPoint::normalize(&[q.one(), Scalar::Rational(t)])?);
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Square-free over the algebraic closure: no repeated linear factor.
    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        let k = self.degree();
        // Dehomogenized coefficients, low degree first.
        let mut g: Vec<Scalar> = self.coeffs.clone();
        while g.last().is_some_and(Scalar::is_zero) {
            g.pop();
        }
        let at_infinity = k + 1 - g.len();
        if at_infinity > 1 {
            return false;
        }
        if g.len() <= 2 {
            return true;
        }
        let dg: Vec<Scalar> = g
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &self.field.from_u64(i as u64))
            .collect();
        let dg = trim(dg);
        if dg.is_empty() {
            return false;
        }
        poly_gcd(g, dg).len() == 1
    }
}

fn trim(mut v: Vec<Scalar>) -> Vec<Scalar> {
    while v.last().is_some_and(Scalar::is_zero) {
        v.pop();
    }
    v
}

/// Remainder of `a` modulo `b` (low-degree-first coefficient lists).
fn poly_rem(mut a: Vec<Scalar>, b: &[Scalar]) -> Vec<Scalar> {
    let lead_inv = b.last().unwrap().inv();
    while a.len() >= b.len() {
        let c = a.last().unwrap() * &lead_inv;
        let shift = a.len() - b.len();
        for (i, bi) in b.iter().enumerate() {
            a[shift + i] = &a[shift + i] - &(&c * bi);
        }
        a.pop();
        a = trim(a);
    }
    a
}

fn poly_gcd(mut a: Vec<Scalar>, mut b: Vec<Scalar>) -> Vec<Scalar> {
    while !b.is_empty() {
        let r = poly_rem(a, &b);
        a = b;
        b = r;
    }
    a
}

fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let n = n.abs();
    let small = n
        .to_u64()
        .filter(|&v| v <= 1_000_000_000_000)
        .ok_or_else(|| Error::TooLarge("coefficient too large for rational root search".into()))?;
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= small {
        if small % i == 0 {
            out.push(BigInt::from(i));
            if i * i != small {
                out.push(BigInt::from(small / i));
            }
        }
        i += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(field: FieldSpec, c: &[i64]) -> BinaryPoly {
        BinaryPoly::new(field, c.iter().map(|&x| field.from_i64(x)).collect())
    }

    #[test]
    fn roots_over_f5() {
        let f5 = FieldSpec::Prime(5);
        // x^2 + y^2 has roots (1:2), (1:3) since 2^2 = -1.
        let g = poly(f5, &[1, 0, 1]);
        let r = g.roots().unwrap();
        assert_eq!(r.len(), 2);
        assert!(g.is_split_squarefree());
        // x^2 is a square with a single root (0:1).
        let sq = poly(f5, &[1, 0, 0]);
        assert_eq!(sq.roots().unwrap(), vec![ProjPoint::from_i64(f5, &[0, 1]).unwrap()]);
        assert!(!sq.is_squarefree());
    }

    #[test]
    fn rational_roots_and_squarefree() {
        let q = FieldSpec::Rational;
        // (x - 2y)(3x + y) = 3x^2 - 5xy - 2y^2
        let g = poly(q, &[3, -5, -2]);
        let r = g.roots().unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.contains(&ProjPoint::from_i64(q, &[2, 1]).unwrap()));
        assert!(r.contains(&ProjPoint::from_i64(q, &[-1, 3]).unwrap()));
        assert!(g.is_squarefree());
        // x^2 + y^2 is square-free but has no rational roots.
        let h = poly(q, &[1, 0, 1]);
        assert!(h.is_squarefree());
        assert!(!h.is_split_squarefree());
        // x y^2
        assert!(!poly(q, &[0, 1, 0, 0]).is_squarefree());
        assert!(poly(q, &[0, 1, 0]).is_squarefree());
    }

    #[test]
    fn from_roots_vanishes_there() {
        let f = FieldSpec::Prime(101);
        let pts: Vec<_> = [[1, 3], [0, 1], [1, 50]]
            .iter()
            .map(|c| ProjPoint::from_i64(f, c).unwrap())
            .collect();
        let g = BinaryPoly::from_roots(f, &pts);
        assert_eq!(g.degree(), 3);
        assert!(pts.iter().all(|p| g.vanishes_at(p)));
        let mut r = g.roots().unwrap();
        r.sort();
        let mut want = pts.clone();
        want.sort();
        assert_eq!(r, want);
    }
}
