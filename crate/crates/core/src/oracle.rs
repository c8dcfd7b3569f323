//! Exhaustive ground truth over small prime fields.
//!
//! Works on raw residues and shares no code with the Sylvester path beyond
//! point enumeration and the Veronese map. Every reported subset is
//! rechecked exactly: independent images, target in the span, all weights
//! nonzero.


use crate::error::{Error, Result};
use crate::fieldpoly::{projective_points, FieldSpec, PointSet, ProjPoint, Scalar};
use crate::veronese::{in_span, veronese_images, veronese_map, VeroneseSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    /// Cap on the number of candidate points.
    pub max_points: usize,
    /// Cap on subset size.
    pub max_rank: usize,
    /// Cap on enumerated subsets (search nodes).
    pub max_subsets: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_points: 50,
            max_rank: 6,
            max_subsets: 10_000_000,
        }
    }
}

impl OracleBudget {
    pub fn validate(&self) -> Result<()> {
        if self.max_points == 0 || self.max_rank == 0 || self.max_subsets == 0 {
            return Err(Error::InfeasibleParameters(
                "oracle budget entries must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Whether dependent partial subsets are cut early.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pruning {
    On,
    Off,
}

const INVERSE_TABLE_LIMIT: u64 = 1 << 22;

/// Arithmetic on residues with a table of inverses for small `p`.
struct Zp {
    p: u64,
    inverses: Vec<u64>,
}

impl Zp {
    fn new(p: u64) -> Self {
        if p > INVERSE_TABLE_LIMIT {
            return Zp {
                p,
                inverses: Vec::new(),
            };
        }
        let mut inverses = vec![0u64; p as usize];
        if p > 1 {
            inverses[1] = 1;
        }
        for i in 2..p {
            inverses[i as usize] = (p - p / i) * inverses[(p % i) as usize] % p;
        }
        Zp { p, inverses }
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn inv(&self, a: u64) -> u64 {
        if let Some(&x) = self.inverses.get(a as usize) {
            return x;
        }
        let (mut base, mut e, mut acc) = (a, self.p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
    /// `a - c·b`.
    fn axpy_neg(&self, a: &[u64], c: u64, b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(x, y)| self.sub(*x, self.mul(c, *y)))
            .collect()
    }
    fn normalize(&self, v: &[u64]) -> Vec<u64> {
        match v.iter().find(|&&x| x != 0) {
            Some(&lead) => {
                let inv = self.inv(lead);
                v.iter().map(|&x| self.mul(x, inv)).collect()
            }
            None => v.to_vec(),
        }
    }
    fn parallel(&self, a: &[u64], b: &[u64]) -> bool {
        self.normalize(a) == self.normalize(b)
    }
    fn rank(&self, mut rows: Vec<Vec<u64>>) -> usize {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for c in 0..cols {
            let Some(piv) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else {
                continue;
            };
            rows.swap(rank, piv);
            let inv = self.inv(rows[rank][c]);
            for i in rank + 1..rows.len() {
                if rows[i][c] != 0 {
                    let f = self.mul(rows[i][c], inv);
                    rows[i] = self.axpy_neg(&rows[i], f, &rows[rank]);
                }
            }
            rank += 1;
        }
        rank
    }
}

fn residues(v: &[Scalar]) -> Vec<u64> {
    v.iter().map(|c| c.residue().expect("prime field")).collect()
}

struct Engine<'a> {
    zp: Zp,
    space: VeroneseSpace,
    target: &'a [Scalar],
    points: &'a [ProjPoint],
    images: Vec<Vec<u64>>,
    t: Vec<u64>,
    s: usize,
    first_only: bool,
    budget: u64,
    spent: u64,
    found: Vec<Vec<usize>>,
}

impl<'a> Engine<'a> {
    fn charge(&mut self, units: u64) -> Result<()> {
        self.spent += units;
        if self.spent > self.budget {
            return Err(Error::BudgetExceeded(format!(
                "more than {} subsets examined",
                self.budget
            )));
        }
        Ok(())
    }

    fn done(&self) -> bool {
        self.first_only && !self.found.is_empty()
    }

    /// Exact acceptance test for a candidate subset.
    fn accept(&mut self, idx: Vec<usize>) -> Result<()> {
        let set = PointSet::new(idx.iter().map(|&i| self.points[i].clone()).collect());
        if set.len() != self.s {
            return Ok(());
        }
        let rows: Vec<Vec<u64>> = idx.iter().map(|&i| self.images[i].clone()).collect();
        if self.zp.rank(rows) != self.s {
            return Ok(());
        }
        if let Some(w) = in_span(self.target, &set, self.space)? {
            if w.iter().all(|c| !c.is_zero()) {
                self.found.push(idx);
            }
        }
        Ok(())
    }

    fn run_unpruned(&mut self) -> Result<()> {
        let n = self.images.len();
        let s = self.s;
        if s > n {
            return Ok(());
        }
        let mut idx: Vec<usize> = (0..s).collect();
        loop {
            self.charge(1)?;
            let mut rows: Vec<Vec<u64>> = idx.iter().map(|&i| self.images[i].clone()).collect();
            let r = self.zp.rank(rows.clone());
            rows.push(self.t.clone());
            if r == s && self.zp.rank(rows) == s {
                self.accept(idx.clone())?;
                if self.done() {
                    return Ok(());
                }
            }
            // Next combination in lexicographic order.
            let mut k = s;
            loop {
                if k == 0 {
                    return Ok(());
                }
                k -= 1;
                if idx[k] < n - s + k {
                    break;
                }
                if k == 0 && idx[0] >= n - s {
                    return Ok(());
                }
            }
            idx[k] += 1;
            for j in k + 1..s {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    /// `cands` holds `(index, reduced image)` for indices after the last
    /// chosen one; `t` is the reduced target.
    fn dfs(&mut self, chosen: &mut Vec<usize>, cands: &[(usize, Vec<u64>)], t: &[u64]) -> Result<()> {
        if self.done() {
            return Ok(());
        }
        // A target already in the span of the chosen images forces a zero weight.
        if t.iter().all(|&x| x == 0) {
            return Ok(());
        }
        let remaining = self.s - chosen.len();
        if remaining == 1 {
            self.charge(cands.len() as u64)?;
            for (i, v) in cands {
                if self.zp.parallel(v, t) {
                    chosen.push(*i);
                    self.accept(chosen.clone())?;
                    chosen.pop();
                    if self.done() {
                        return Ok(());
                    }
                }
            }
            return Ok(());
        }
        if remaining == 2 {
            return self.pair_completion(chosen, cands, t);
        }
        for (pos, (i, v)) in cands.iter().enumerate() {
            if cands.len() - pos < remaining {
                break;
            }
            self.charge(1)?;
            let Some(c) = v.iter().position(|&x| x != 0) else {
                continue; // dependent on the chosen images
            };
            let inv = self.zp.inv(v[c]);
            // Eliminate column c and drop it.
            let reduce = |w: &[u64]| -> Vec<u64> {
                let f = self.zp.mul(w[c], inv);
                w.iter()
                    .zip(v)
                    .enumerate()
                    .filter(|&(k, _)| k != c)
                    .map(|(_, (&x, &y))| if f == 0 { x } else { self.zp.sub(x, self.zp.mul(f, y)) })
                    .collect()
            };
            let next: Vec<(usize, Vec<u64>)> = cands[pos + 1..]
                .iter()
                .map(|(j, w)| (*j, reduce(w)))
                .filter(|(_, w)| w.iter().any(|&x| x != 0))
                .collect();
            let nt = reduce(t);
            chosen.push(*i);
            self.dfs(chosen, &next, &nt)?;
            chosen.pop();
            if self.done() {
                return Ok(());
            }
        }
        Ok(())
    }

    /// Pairs `{i, k}` with `t ∈ span(v_i, v_k)` and both weights nonzero:
    /// reduce each `v_i` modulo `t` and group by projective class.
    fn pair_completion(
        &mut self,
        chosen: &mut Vec<usize>,
        cands: &[(usize, Vec<u64>)],
        t: &[u64],
    ) -> Result<()> {
        self.charge(cands.len() as u64)?;
        let c0 = t.iter().position(|&x| x != 0).expect("nonzero target");
        let tinv = self.zp.inv(t[c0]);
        // Fingerprint the projective class of v mod t; collisions only add
        // candidates, which the exact test rejects.
        let mut keyed: Vec<(u64, usize)> = Vec::with_capacity(cands.len());
        let mut u = vec![0u64; t.len()];
        for (pos, (_, v)) in cands.iter().enumerate() {
            let f = self.zp.mul(v[c0], tinv);
            for k in 0..t.len() {
                u[k] = self.zp.sub(v[k], self.zp.mul(f, t[k]));
            }
            let Some(lead) = u.iter().position(|&x| x != 0) else {
                continue; // v is zero or parallel to t
            };
            let li = self.zp.inv(u[lead]);
            let mut h = lead as u64;
            for &x in &u[lead..] {
                h = h
                    .wrapping_mul(0x9e37_79b9_7f4a_7c15)
                    .wrapping_add(self.zp.mul(x, li));
            }
            keyed.push((h, pos));
        }
        keyed.sort_unstable();
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for run in keyed.chunk_by(|a, b| a.0 == b.0) {
            for (a, &(_, x)) in run.iter().enumerate() {
                for &(_, y) in &run[a + 1..] {
                    if !self.zp.parallel(&cands[x].1, &cands[y].1) {
                        pairs.push((x.min(y), x.max(y)));
                    }
                }
            }
        }
        pairs.sort_unstable();
        for (x, y) in pairs {
            chosen.push(cands[x].0);
            chosen.push(cands[y].0);
            self.accept(chosen.clone())?;
            chosen.truncate(chosen.len() - 2);
            if self.done() {
                return Ok(());
            }
        }
        Ok(())
    }
}

fn search(
    target: &[Scalar],
    points: &[ProjPoint],
    s: usize,
    space: VeroneseSpace,
    budget: &OracleBudget,
    pruning: Pruning,
    first_only: bool,
    spent: &mut u64,
) -> Result<Vec<PointSet>> {
    let field = points
        .first()
        .map(|p| p.field())
        .unwrap_or(FieldSpec::Rational);
    let p = match field {
        FieldSpec::Prime(p) => p,
        FieldSpec::Rational if points.is_empty() => return Ok(Vec::new()),
        FieldSpec::Rational => {
            return Err(Error::UnsupportedField(
                "the oracle enumerates points over F_p only".into(),
            ))
        }
    };
    if target.len() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            got: target.len(),
        });
    }
    if s == 0 {
        return Ok(Vec::new());
    }
    let sorted = PointSet::new(points.to_vec());
    let pts = sorted.points();
    let images: Vec<Vec<u64>> = veronese_images(&sorted, space)?
        .iter()
        .map(|v| residues(v))
        .collect();
    let mut engine = Engine {
        zp: Zp::new(p),
        space,
        target,
        points: pts,
        t: residues(target),
        images,
        s,
        first_only,
        budget: budget.max_subsets,
        spent: *spent,
        found: Vec::new(),
    };
    let outcome = match pruning {
        Pruning::Off => engine.run_unpruned(),
        Pruning::On => {
            let cands: Vec<(usize, Vec<u64>)> = engine.images.iter().cloned().enumerate().collect();
            let t = engine.t.clone();
            engine.dfs(&mut Vec::new(), &cands, &t)
        }
    };
    *spent = engine.spent;
    outcome?;
    let mut out: Vec<PointSet> = engine
        .found
        .iter()
        .map(|idx| PointSet::new(idx.iter().map(|&i| pts[i].clone()).collect()))
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

fn all_points(space: VeroneseSpace, field: FieldSpec, budget: &OracleBudget) -> Result<Vec<ProjPoint>> {
    budget.validate()?;
    let p = field.require_prime("oracle enumeration")?;
    let count = crate::fieldpoly::projective_point_count(p, space.r);
    if count > budget.max_points as u64 {
        return Err(Error::BudgetExceeded(format!(
            "P^{}(F_{p}) has {count} points, cap is {}",
            space.r, budget.max_points
        )));
    }
    projective_points(field, space.r)
}

/// All `s`-subsets `A ⊂ P^r(F_p)` with `P ∈ ⟨ν_d(A)⟩`, independent images
/// and nonzero weights, in canonical order.
pub fn enumerate_s(
    target: &[Scalar],
    s: usize,
    space: VeroneseSpace,
    field: FieldSpec,
    budget: &OracleBudget,
) -> Result<Vec<PointSet>> {
    enumerate_s_with(target, s, space, field, budget, Pruning::On)
}

pub fn enumerate_s_with(
    target: &[Scalar],
    s: usize,
    space: VeroneseSpace,
    field: FieldSpec,
    budget: &OracleBudget,
    pruning: Pruning,
) -> Result<Vec<PointSet>> {
    if s > budget.max_rank {
        return Err(Error::BudgetExceeded(format!(
            "subset size {s} exceeds cap {}",
            budget.max_rank
        )));
    }
    let pts = all_points(space, field, budget)?;
    search(target, &pts, s, space, budget, pruning, false, &mut 0)
}

/// Same search restricted to a candidate point list.
pub fn enumerate_among(
    target: &[Scalar],
    candidates: &[ProjPoint],
    s: usize,
    space: VeroneseSpace,
    budget: &OracleBudget,
) -> Result<Vec<PointSet>> {
    search(target, candidates, s, space, budget, Pruning::On, false, &mut 0)
}

/// Least `s ≤ max_rank` such that some `s` points of `P^r(F_p)` decompose `P`.
pub fn brute_rank(
    target: &[Scalar],
    space: VeroneseSpace,
    field: FieldSpec,
    budget: &OracleBudget,
) -> Result<usize> {
    if target.iter().all(Scalar::is_zero) {
        return Err(Error::ZeroForm);
    }
    let pts = all_points(space, field, budget)?;
    // One budget for the whole ladder of sizes.
    let mut spent = 0u64;
    for s in 1..=budget.max_rank {
        let found = search(target, &pts, s, space, budget, Pruning::On, true, &mut spent)?;
        if !found.is_empty() {
            return Ok(s);
        }
    }
    Err(Error::BudgetExceeded(format!(
        "rank exceeds max_rank = {}",
        budget.max_rank
    )))
}

/// `ν_d(a)` for every point of `P^r(F_p)`, for callers that want the raw list.
pub fn veronese_point_images(
    space: VeroneseSpace,
    field: FieldSpec,
    budget: &OracleBudget,
) -> Result<Vec<(ProjPoint, Vec<Scalar>)>> {
    all_points(space, field, budget)?
        .into_iter()
        .map(|p| veronese_map(&p, space).map(|v| (p, v)))
        .collect()
}
