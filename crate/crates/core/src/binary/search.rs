//! Searching a linear system of binary forms for members that split into
//! distinct linear factors over the ground field.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;

use super::poly::{BinaryPoly, Fp};
use crate::error::{Error, Result};
use crate::fieldpoly::{projective_normalize, FieldSpec, Matrix, Scalar};

/// Work cap for the exhaustive search, in field operations.
const EXHAUSTIVE_BUDGET: u64 = 2_000_000_000;
const RANDOM_TRIALS: usize = 48;

struct System {
    fp: Fp,
    field: FieldSpec,
    s: usize,
    /// Basis members as residue vectors of length `s + 1`.
    basis: Vec<Vec<u64>>,
}

impl System {
    fn new(basis: &[BinaryPoly], s: usize, p: u64) -> Self {
        System {
            fp: Fp { p },
            field: FieldSpec::Prime(p),
            s,
            basis: basis
                .iter()
                .map(|g| g.coeffs().iter().map(|c| c.residue().unwrap()).collect())
                .collect(),
        }
    }

    fn m(&self) -> usize {
        self.basis.len()
    }

    fn eval(&self, poly: &[u64], idx: u64) -> u64 {
        if idx == self.fp.p {
            return *poly.last().unwrap();
        }
        let mut acc = 0;
        for c in poly.iter().rev() {
            acc = self.fp.add(self.fp.mul(acc, idx), *c);
        }
        acc
    }

    fn eval_basis(&self, idx: u64) -> Vec<u64> {
        self.basis.iter().map(|g| self.eval(g, idx)).collect()
    }

    fn combine(&self, c: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.s + 1];
        for (ci, g) in c.iter().zip(&self.basis) {
            if *ci == 0 {
                continue;
            }
            for (o, gj) in out.iter_mut().zip(g) {
                *o = self.fp.add(*o, self.fp.mul(*ci, *gj));
            }
        }
        out
    }

    fn dot(&self, c: &[u64], ev: &[u64]) -> u64 {
        c.iter()
            .zip(ev)
            .fold(0, |acc, (a, b)| self.fp.add(acc, self.fp.mul(*a, *b)))
    }

    /// Members of `w` vanishing at a point with basis evaluations `ev`;
    /// `None` when every member already vanishes there.
    fn impose(&self, w: &[Vec<u64>], ev: &[u64]) -> Option<Vec<Vec<u64>>> {
        let e: Vec<u64> = w.iter().map(|c| self.dot(c, ev)).collect();
        let piv = e.iter().position(|&x| x != 0)?;
        let inv = self.fp.inv(e[piv]);
        let out = w
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != piv)
            .map(|(i, c)| {
                let f = self.fp.mul(e[i], inv);
                c.iter()
                    .zip(&w[piv])
                    .map(|(a, b)| self.fp.sub(*a, self.fp.mul(f, *b)))
                    .collect()
            })
            .collect();
        Some(out)
    }

    fn root_count(&self, poly: &[u64]) -> usize {
        (0..=self.fp.p).filter(|&x| self.eval(poly, x) == 0).count()
    }

    fn to_poly(&self, poly: &[u64]) -> BinaryPoly {
        BinaryPoly::new(
            self.field,
            poly.iter().map(|&c| self.field.from_u64(c)).collect(),
        )
    }

    fn identity(&self) -> Vec<Vec<u64>> {
        (0..self.m())
            .map(|i| {
                let mut c = vec![0u64; self.m()];
                c[i] = 1;
                c
            })
            .collect()
    }

    /// Imposes `m - 1` random distinct points and tests the resulting member.
    fn random_trial<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Vec<u64>> {
        let p = self.fp.p;
        if (self.m() as u64) > p + 1 {
            return None;
        }
        let mut w = self.identity();
        let mut used: Vec<u64> = Vec::new();
        while w.len() > 1 && used.len() + 1 < self.m() + 4 {
            let x = rng.gen_range(0..=p);
            if used.contains(&x) {
                continue;
            }
            used.push(x);
            if let Some(next) = self.impose(&w, &self.eval_basis(x)) {
                w = next;
            }
        }
        if w.len() != 1 {
            return None;
        }
        let poly = self.combine(&w[0]);
        (self.root_count(&poly) == self.s).then_some(poly)
    }

    /// All split members of a pencil `w` (two independent members), using
    /// that each non-base point lies on exactly one member.
    fn pencil_split_members(&self, w: &[Vec<u64>], table: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let p = self.fp.p;
        let mut counts = vec![0usize; p as usize + 1];
        let mut base = 0usize;
        for ev in table {
            let a = self.dot(&w[0], ev);
            let b = self.dot(&w[1], ev);
            if a == 0 && b == 0 {
                base += 1;
                continue;
            }
            // The member b·w0 - a·w1 vanishes here.
            let key = if b == 0 {
                p
            } else {
                self.fp.mul(self.fp.sub(0, a), self.fp.inv(b))
            };
            counts[key as usize] += 1;
        }
        let mut out = Vec::new();
        for (key, &c) in counts.iter().enumerate() {
            if c + base != self.s {
                continue;
            }
            let (lambda, mu) = if key as u64 == p { (0, 1) } else { (1, key as u64) };
            let c: Vec<u64> = w[0]
                .iter()
                .zip(&w[1])
                .map(|(x, y)| self.fp.add(self.fp.mul(lambda, *x), self.fp.mul(mu, *y)))
                .collect();
            out.push(self.combine(&c));
        }
        out
    }

    fn table(&self) -> Vec<Vec<u64>> {
        (0..=self.fp.p).map(|x| self.eval_basis(x)).collect()
    }

    /// Depth-first search imposing roots in increasing order. A split member
    /// is reached by always imposing its smallest root that is not yet a
    /// base point, so only dimension-dropping points need to be branched on.
    fn dfs(
        &self,
        w: &[Vec<u64>],
        start: u64,
        table: &[Vec<u64>],
        budget: &mut u64,
    ) -> Result<Option<Vec<u64>>> {
        let cost = table.len() as u64 * w.len() as u64;
        if *budget < cost {
            return Err(Error::SearchBudgetExceeded(
                "exhaustive split-member search".into(),
            ));
        }
        *budget -= cost;
        match w.len() {
            0 => Ok(None),
            1 => {
                let n = table.iter().filter(|ev| self.dot(&w[0], ev) == 0).count();
                Ok((n == self.s).then(|| self.combine(&w[0])))
            }
            2 => Ok(self.pencil_split_members(w, table).into_iter().next()),
            _ => {
                for x in start..=self.fp.p {
                    if let Some(next) = self.impose(w, &table[x as usize]) {
                        if let Some(found) = self.dfs(&next, x + 1, table, budget)? {
                            return Ok(Some(found));
                        }
                    }
                }
                Ok(None)
            }
        }
    }
}

/// A member of `span(basis)` of degree `s` with `s` distinct roots in
/// `P^1(F_p)`, or `None` if there is none. Exact: random probes first, then
/// an exhaustive search.
pub(crate) fn find_split_member_fp<R: Rng + ?Sized>(
    basis: &[BinaryPoly],
    s: usize,
    p: u64,
    rng: &mut R,
) -> Result<Option<BinaryPoly>> {
    if basis.is_empty() || s as u64 > p + 1 {
        return Ok(None);
    }
    let sys = System::new(basis, s, p);
    if sys.m() >= 3 {
        for _ in 0..RANDOM_TRIALS {
            if let Some(poly) = sys.random_trial(rng) {
                return Ok(Some(sys.to_poly(&poly)));
            }
        }
    }
    let table = sys.table();
    let mut budget = EXHAUSTIVE_BUDGET;
    Ok(sys
        .dfs(&sys.identity(), 0, &table, &mut budget)?
        .map(|poly| sys.to_poly(&poly)))
}

fn dedup_key(poly: &BinaryPoly) -> Vec<Scalar> {
    projective_normalize(poly.coeffs())
}

/// Up to `count` distinct split members. Pencils are enumerated completely
/// and sampled without replacement; larger systems are probed at random
/// with at most `64 · count` trials.
pub(crate) fn sample_split_members_fp<R: Rng + ?Sized>(
    basis: &[BinaryPoly],
    s: usize,
    p: u64,
    count: usize,
    rng: &mut R,
) -> Vec<BinaryPoly> {
    let sys = System::new(basis, s, p);
    match sys.m() {
        0 => Vec::new(),
        1 => {
            let poly = sys.combine(&[1]);
            if sys.root_count(&poly) == s {
                vec![sys.to_poly(&poly)]
            } else {
                Vec::new()
            }
        }
        2 => {
            let mut all = sys.pencil_split_members(&sys.identity(), &sys.table());
            all.shuffle(rng);
            all.truncate(count);
            all.iter().map(|poly| sys.to_poly(poly)).collect()
        }
        _ => {
            let mut seen = HashSet::new();
            let mut out = Vec::new();
            for _ in 0..64 * count {
                if out.len() == count {
                    break;
                }
                if let Some(poly) = sys.random_trial(rng) {
                    let g = sys.to_poly(&poly);
                    if seen.insert(dedup_key(&g)) {
                        out.push(g);
                    }
                }
            }
            out
        }
    }
}

fn random_member_q<R: Rng + ?Sized>(basis: &[BinaryPoly], rng: &mut R) -> Option<BinaryPoly> {
    let q = FieldSpec::Rational;
    let m = basis.len();
    if m == 1 {
        return Some(basis[0].clone());
    }
    let mut xs: Vec<i64> = Vec::new();
    while xs.len() < m - 1 {
        let x = rng.gen_range(-40..=40);
        if !xs.contains(&x) {
            xs.push(x);
        }
    }
    let rows = xs
        .iter()
        .map(|&x| {
            let (a, b) = (q.one(), q.from_i64(x));
            basis.iter().map(|g| g.eval(&a, &b)).collect()
        })
        .collect();
    let kernel = Matrix::from_rows(q, m, rows).kernel_basis();
    if kernel.len() != 1 {
        return None;
    }
    let s = basis[0].degree();
    let mut coeffs = vec![q.zero(); s + 1];
    for (c, g) in kernel[0].iter().zip(basis) {
        for (o, gj) in coeffs.iter_mut().zip(g.coeffs()) {
            *o = &*o + &(c * gj);
        }
    }
    Some(BinaryPoly::new(q, coeffs))
}

/// Randomized search over the rationals; `None` means no witness was found.
pub(crate) fn find_split_member_q<R: Rng + ?Sized>(
    basis: &[BinaryPoly],
    _s: usize,
    rng: &mut R,
) -> Option<BinaryPoly> {
    let trials = if basis.len() == 1 { 1 } else { 200 };
    (0..trials)
        .filter_map(|_| random_member_q(basis, rng))
        .find(|g| g.is_split_squarefree())
}

pub(crate) fn sample_split_members_q<R: Rng + ?Sized>(
    basis: &[BinaryPoly],
    _s: usize,
    count: usize,
    rng: &mut R,
) -> Vec<BinaryPoly> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for _ in 0..64 * count {
        if out.len() == count {
            break;
        }
        if let Some(g) = random_member_q(basis, rng) {
            if g.is_split_squarefree() && seen.insert(dedup_key(&g)) {
                out.push(g);
            }
        }
    }
    out
}
