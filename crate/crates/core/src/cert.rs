//! Certificates for decompositions and direct checks of the span lemmas on
//! concrete pairs.

use crate::classify::Decomposition;
use crate::error::{Error, Result};
use crate::fieldpoly::{is_zero_vector, subspace_intersect, subspace_sum_dim, vectors_rank, PointSet};
use crate::oracle::{enumerate_s, OracleBudget};
use crate::veronese::{hilbert_defect, residual, veronese_images, weighted_sum, Hypersurface};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// A list of named checks; `valid` is their conjunction.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Certificate {
    pub valid: bool,
    pub checks: Vec<Check>,
}

impl Certificate {
    fn new() -> Self {
        Certificate {
            valid: true,
            checks: Vec::new(),
        }
    }

    fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.valid &= passed;
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect()
    }
}

/// Reconstruction up to scale, independence of `ν_d(A)` and nonzero
/// weights. The last two together mean no proper subset of `A` spans `P`.
pub fn verify_decomposition(dec: &Decomposition) -> Certificate {
    let mut cert = Certificate::new();
    let field = dec.field();
    let dim = dec.space.dim();

    let rebuilt = if dec.points.is_empty() || dec.weights.len() != dec.points.len() {
        None
    } else {
        weighted_sum(&dec.points, &dec.weights, dec.space).ok()
    };
    match rebuilt {
        Some(v) => {
            let exact = v == dec.target;
            let ok = !is_zero_vector(&v)
                && !is_zero_vector(&dec.target)
                && vectors_rank(field, dim, &[v, dec.target.clone()]) == 1;
            let detail = if exact {
                "weighted sum equals the target"
            } else if ok {
                "weighted sum is a nonzero multiple of the target"
            } else {
                "weighted sum is not proportional to the target"
            };
            cert.push("reconstruction", ok, detail);
        }
        None => cert.push("reconstruction", false, "no points or mismatched weights"),
    }

    let rank = veronese_images(&dec.points, dec.space)
        .map(|imgs| vectors_rank(field, dim, &imgs))
        .unwrap_or(0);
    cert.push(
        "independence",
        rank == dec.points.len(),
        format!("rank {rank} for {} points", dec.points.len()),
    );

    let zeros = dec.weights.iter().filter(|w| w.is_zero()).count();
    cert.push(
        "nonzero_weights",
        zeros == 0 && !dec.weights.is_empty(),
        format!("{zeros} zero weights"),
    );
    cert
}

fn same_target(a: &Decomposition, b: &Decomposition) -> bool {
    a.space == b.space
        && a.field() == b.field()
        && vectors_rank(a.field(), a.space.dim(), &[a.target.clone(), b.target.clone()]) == 1
}

/// Two distinct decompositions of one target force `A ∪ B` to fail to impose
/// independent conditions on degree-`d` forms.
pub fn lemma_v1_check(a: &Decomposition, b: &Decomposition) -> Result<Certificate> {
    if !same_target(a, b) {
        return Err(Error::PreconditionFailed("targets differ".into()));
    }
    if a.points == b.points {
        return Err(Error::PreconditionFailed("point sets coincide".into()));
    }
    for (name, dec) in [("first", a), ("second", b)] {
        let c = verify_decomposition(dec);
        if !c.valid {
            return Err(Error::PreconditionFailed(format!(
                "{name} decomposition is invalid: {}",
                c.failures().join("; ")
            )));
        }
    }
    let union = a.points.union(&b.points);
    let defect = hilbert_defect(&union, a.d());
    let mut cert = Certificate::new();
    cert.push(
        "defect_positive",
        defect > 0,
        format!("h1 of {} points in degree {} is {defect}", union.len(), a.d()),
    );
    Ok(cert)
}

/// Splitting along a hypersurface `D` of degree `t ≤ d`, under the hypothesis
/// that `(A ∪ B) \ D` imposes independent conditions in degree `d - t`.
pub fn lemma_v2_split(a: &Decomposition, b: &Decomposition, hyp: &Hypersurface) -> Result<Certificate> {
    if !same_target(a, b) {
        return Err(Error::PreconditionFailed("targets differ".into()));
    }
    for dec in [a, b] {
        let c = verify_decomposition(dec);
        if !c.valid {
            return Err(Error::PreconditionFailed(c.failures().join("; ")));
        }
    }
    let d = a.d();
    let t = hyp.degree();
    if t > d {
        return Err(Error::PreconditionFailed(format!(
            "hypersurface degree {t} exceeds {d}"
        )));
    }
    let off = residual(&a.points.union(&b.points), hyp);
    let defect = hilbert_defect(&off, d - t);
    if defect != 0 {
        return Err(Error::HypothesisFailed(format!(
            "h1 of the {} points off the hypersurface in degree {} is {defect}",
            off.len(),
            d - t
        )));
    }

    let mut cert = Certificate::new();
    let (ra, rb) = (residual(&a.points, hyp), residual(&b.points, hyp));
    cert.push(
        "residuals_equal",
        ra == rb,
        format!("{} and {} points off the hypersurface", ra.len(), rb.len()),
    );

    let field = a.field();
    let dim = a.space.dim();
    let f = residual(&a.points.intersection(&b.points), hyp);
    let images = |s: &PointSet| veronese_images(s, a.space);
    let vf = images(&f)?;
    let rank_f = vectors_rank(field, dim, &vf);
    cert.push(
        "common_residual_independent",
        rank_f == f.len(),
        format!("rank {rank_f} for {} points", f.len()),
    );

    // ⟨ν(A)⟩ ∩ ⟨ν(B)⟩ = ⟨ν(F)⟩ ⊕ (⟨ν(A∩D)⟩ ∩ ⟨ν(B∩D)⟩), by dimensions.
    let meet = subspace_intersect(field, dim, &images(&a.points)?, &images(&b.points)?);
    let on_a = a.points.difference(&ra);
    let on_b = b.points.difference(&rb);
    let meet_d = subspace_intersect(field, dim, &images(&on_a)?, &images(&on_b)?);
    let sum = subspace_sum_dim(field, dim, &meet_d, &vf);
    let ok = sum == meet.len() && sum == meet_d.len() + rank_f;
    cert.push(
        "span_split",
        ok,
        format!(
            "dim meet {}, on-hypersurface meet {}, common residual {}, sum {}",
            meet.len(),
            meet_d.len(),
            rank_f,
            sum
        ),
    );
    Ok(cert)
}

/// Exhaustive check that a decomposition with at most `(d+1)/2` points is
/// the only one of its size.
pub fn bgl_uniqueness_probe(dec: &Decomposition, budget: &OracleBudget) -> Result<Certificate> {
    let n = dec.len();
    if 2 * n > dec.d() as usize + 1 {
        return Err(Error::PreconditionFailed(format!(
            "{n} points exceed (d+1)/2 for d = {}",
            dec.d()
        )));
    }
    let found = match enumerate_s(&dec.target, n, dec.space, dec.field(), budget) {
        Err(Error::BudgetExceeded(m)) => return Err(Error::TooLarge(m)),
        other => other?,
    };
    let mut cert = Certificate::new();
    cert.push(
        "single_decomposition",
        found.len() == 1 && found[0] == dec.points,
        format!("{} decompositions of size {n}", found.len()),
    );
    Ok(cert)
}
