use std::fmt;

use super::matrix::Vector;
use super::scalar::{FieldSpec, Scalar};
use crate::error::{Error, Result};

/// A point of projective space in canonical form: the first nonzero
/// coordinate is 1, so equality of points is equality of coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: Vec<Scalar>,
}

impl ProjPoint {
    /// Canonical representative of the line through `raw`.
    pub fn normalize(raw: &[Scalar]) -> Result<Self> {
        let lead = raw.iter().find(|x| !x.is_zero()).ok_or(Error::AllZero)?;
        let inv = lead.inv();
        Ok(ProjPoint {
            coords: raw.iter().map(|x| x * &inv).collect(),
        })
    }

    pub fn from_i64(field: FieldSpec, raw: &[i64]) -> Result<Self> {
        let v: Vec<_> = raw.iter().map(|&x| field.from_i64(x)).collect();
        Self::normalize(&v)
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn to_vector(&self) -> Vector {
        self.coords.clone()
    }

    /// Projective dimension `r` of the ambient space.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn field(&self) -> FieldSpec {
        self.coords[0].field()
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ":")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A finite reduced set of projective points, kept sorted and deduplicated
/// so that set equality is list equality.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet {
    points: Vec<ProjPoint>,
}

impl PointSet {
    pub fn new(mut points: Vec<ProjPoint>) -> Self {
        points.sort();
        points.dedup();
        PointSet { points }
    }

    pub fn empty() -> Self {
        PointSet { points: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ProjPoint> {
        self.points.iter()
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.points.binary_search(p).is_ok()
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        PointSet::new(self.points.iter().chain(&other.points).cloned().collect())
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        PointSet {
            points: self
                .points
                .iter()
                .filter(|p| !other.contains(p))
                .cloned()
                .collect(),
        }
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        PointSet {
            points: self
                .points
                .iter()
                .filter(|p| other.contains(p))
                .cloned()
                .collect(),
        }
    }

    pub fn is_disjoint(&self, other: &PointSet) -> bool {
        self.intersection(other).is_empty()
    }

    pub fn filter(&self, mut keep: impl FnMut(&ProjPoint) -> bool) -> PointSet {
        PointSet {
            points: self.points.iter().filter(|p| keep(p)).cloned().collect(),
        }
    }
}

impl FromIterator<ProjPoint> for PointSet {
    fn from_iter<I: IntoIterator<Item = ProjPoint>>(iter: I) -> Self {
        PointSet::new(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a ProjPoint;
    type IntoIter = std::slice::Iter<'a, ProjPoint>;
    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// All points of `P^r(F_p)` in canonical order.
pub fn projective_points(field: FieldSpec, r: usize) -> Result<Vec<ProjPoint>> {
    let p = field.require_prime("projective point enumeration")?;
    let mut out = Vec::new();
    // Points whose first nonzero coordinate sits at index `lead`.
    for lead in (0..=r).rev() {
        let free = r - lead;
        let total = p.checked_pow(free as u32).ok_or_else(|| {
            Error::TooLarge(format!("P^{r}(F_{p}) has too many points"))
        })?;
        for mut code in 0..total {
            let mut coords = vec![field.zero(); r + 1];
            coords[lead] = field.one();
            for k in (lead + 1..=r).rev() {
                coords[k] = field.from_u64(code % p);
                code /= p;
            }
            out.push(ProjPoint { coords });
        }
    }
    out.sort();
    Ok(out)
}

/// `#P^r(F_p) = (p^{r+1} - 1) / (p - 1)`, saturating.
pub fn projective_point_count(p: u64, r: usize) -> u64 {
    let mut acc: u64 = 0;
    let mut pw: u64 = 1;
    for _ in 0..=r {
        acc = acc.saturating_add(pw);
        pw = pw.saturating_mul(p);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_examples() {
        let q = FieldSpec::Rational;
        let p = ProjPoint::from_i64(q, &[0, 3, 6]).unwrap();
        assert_eq!(p, ProjPoint::from_i64(q, &[0, 1, 2]).unwrap());
        assert_eq!(p.coords()[2], q.from_i64(2));
        let f7 = FieldSpec::Prime(7);
        let p = ProjPoint::from_i64(f7, &[5, 0]).unwrap();
        assert_eq!(p.coords(), &[f7.one(), f7.zero()]);
        assert_eq!(ProjPoint::from_i64(q, &[0, 0, 0]), Err(Error::AllZero));
    }

    #[test]
    fn point_set_is_canonical() {
        let f = FieldSpec::Prime(5);
        let a = ProjPoint::from_i64(f, &[1, 2]).unwrap();
        let b = ProjPoint::from_i64(f, &[0, 1]).unwrap();
        let s1 = PointSet::new(vec![a.clone(), b.clone(), a.clone()]);
        let s2 = PointSet::new(vec![b, a]);
        assert_eq!(s1, s2);
        assert_eq!(s1.len(), 2);
    }

    #[test]
    fn enumerates_projective_plane_over_f3() {
        let f = FieldSpec::Prime(3);
        let pts = projective_points(f, 2).unwrap();
        assert_eq!(pts.len(), 13);
        assert_eq!(projective_point_count(3, 2), 13);
        let set = PointSet::new(pts.clone());
        assert_eq!(set.len(), 13);
        assert_eq!(projective_points(FieldSpec::Prime(5), 1).unwrap().len(), 6);
    }
}
