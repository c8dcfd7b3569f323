//! Acceptance gate: one PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use waring_core::binary::{
    decomposition_family, lift_decomposition, project_from_nodes, sylvester_analyze,
    sylvester_decompose, BinaryDecomposition, BinaryForm,
};
use waring_core::cert::{bgl_uniqueness_probe, lemma_v1_check, verify_decomposition};
use waring_core::classify::{
    case_c_family, classify_decomposition, generate_family, uniqueness_verdict, Decomposition,
    Verdict,
};
use waring_core::examples::{build_case_a, build_case_b, build_case_c, build_example_i1};
use waring_core::fieldpoly::{
    subspace_intersect, vectors_rank, FieldSpec, Matrix, PointSet, Scalar, Vector,
};
use waring_core::oracle::{brute_rank, enumerate_s, OracleBudget};
use waring_core::veronese::{random_point, VeroneseSpace};

const BIG: FieldSpec = FieldSpec::Prime(10007);

struct Outcome {
    passed: bool,
    detail: String,
}

fn pass(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn random_form<R: Rng>(field: FieldSpec, d: u32, rng: &mut R) -> BinaryForm {
    loop {
        let v: Vector = (0..=d).map(|_| field.random(rng)).collect();
        if let Ok(f) = BinaryForm::from_tensor(field, v) {
            return f;
        }
    }
}

fn binary_dec(f: &BinaryForm, b: &BinaryDecomposition) -> Decomposition {
    Decomposition::new(f.space(), f.tensor().to_vec(), b.nodes.clone(), b.weights.clone())
        .expect("consistent sizes")
}

/// Every nonzero vector of `F_p^n` whose first nonzero entry is 1.
fn projective_vectors(field: FieldSpec, n: usize) -> Vec<Vector> {
    let p = field.modulus().unwrap();
    let total = p.pow(n as u32);
    (1..total)
        .filter_map(|mut code| {
            let v: Vector = (0..n)
                .map(|_| {
                    let x = field.from_u64(code % p);
                    code /= p;
                    x
                })
                .collect();
            let lead = v.iter().find(|x| !x.is_zero())?;
            lead.is_one().then_some(v)
        })
        .collect()
}

fn ac1() -> Outcome {
    let small = FieldSpec::Prime(5);
    let mut checked = 0;
    let mut mismatches = Vec::new();
    let budget = OracleBudget::default();
    for d in 1..=4u32 {
        for v in projective_vectors(small, d as usize + 1) {
            let f = BinaryForm::from_tensor(small, v).unwrap();
            let syl = sylvester_analyze(&f).unwrap().rank;
            let brute = brute_rank(f.tensor(), f.space(), small, &budget).unwrap();
            checked += 1;
            if syl != brute {
                mismatches.push(format!("{f:?}: {syl} vs {brute}"));
            }
        }
    }
    let mid = FieldSpec::Prime(101);
    let budget = OracleBudget {
        max_points: 102,
        max_rank: 8,
        max_subsets: 4_000_000_000,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut ranks = [0usize; 9];
    for _ in 0..200 {
        let d = rng.gen_range(5..=8);
        let f = random_form(mid, d, &mut rng);
        let syl = sylvester_analyze(&f).unwrap().rank;
        let brute = brute_rank(f.tensor(), f.space(), mid, &budget).unwrap();
        ranks[syl] += 1;
        checked += 1;
        if syl != brute {
            mismatches.push(format!("degree {d}: {syl} vs {brute}"));
        }
    }
    pass(
        mismatches.is_empty(),
        format!(
            "{checked} forms, {} mismatches; F_101 rank histogram {:?}",
            mismatches.len(),
            &ranks[1..]
        ),
    )
}

fn ac2() -> Outcome {
    let mut bad = Vec::new();
    for field in [BIG, FieldSpec::Rational] {
        for d in 3..=8u32 {
            let f = BinaryForm::parse(&format!("x0*x1^{}", d - 1), field).unwrap();
            let rank = sylvester_analyze(&f).unwrap().rank;
            if rank != d as usize {
                bad.push(format!("{field} d={d}: {rank}"));
            }
        }
    }
    pass(bad.is_empty(), format!("x*y^(d-1), d=3..8 over F_10007 and Q; bad: {bad:?}"))
}

fn pairs_from(family: &[Decomposition]) -> Vec<(Decomposition, Decomposition)> {
    family
        .iter()
        .skip(1)
        .filter(|m| m.points != family[0].points)
        .map(|m| (family[0].clone(), m.clone()))
        .collect()
}

fn ac3() -> Outcome {
    let mut pairs = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut forms = 0;
    while forms < 10 {
        let d = rng.gen_range(3..=6);
        let f = random_form(BIG, d, &mut rng);
        if !sylvester_analyze(&f).unwrap().has_infinite_family() {
            continue;
        }
        forms += 1;
        let fam: Vec<Decomposition> = decomposition_family(&f, 6, rng.gen())
            .unwrap()
            .iter()
            .map(|b| binary_dec(&f, b))
            .collect();
        pairs.extend(pairs_from(&fam));
    }
    let binary_pairs = pairs.len();
    let (_, a) = build_case_a(5, 2, 4, 2, BIG, 31).unwrap();
    let (_, b) = build_case_b(4, 2, 5, 0, BIG, 32).unwrap();
    let (_, c) = build_case_c(5, 2, BIG, 33).unwrap();
    for dec in [&a, &b] {
        let report = classify_decomposition(dec).unwrap();
        pairs.extend(pairs_from(&generate_family(dec, &report, 20, 7).unwrap()));
    }
    let report = classify_decomposition(&c).unwrap();
    pairs.extend(pairs_from(&case_c_family(&c, &report, 20, 7).unwrap()));

    let mut failures = 0;
    for (x, y) in &pairs {
        match lemma_v1_check(x, y) {
            Ok(cert) if cert.valid => {}
            _ => failures += 1,
        }
    }
    pass(
        pairs.len() >= 100 && failures == 0,
        format!(
            "{} pairs ({binary_pairs} binary, {} from curve families), {failures} without positive defect",
            pairs.len(),
            pairs.len() - binary_pairs
        ),
    )
}

fn ac4() -> Outcome {
    let (_, a) = build_case_a(5, 2, 4, 2, BIG, 41).unwrap();
    let (_, b) = build_case_b(4, 2, 5, 0, BIG, 42).unwrap();
    let (_, c) = build_case_c(5, 2, BIG, 43).unwrap();
    let mut ok = true;
    let mut notes = Vec::new();
    for (label, dec) in [("A", &a), ("B", &b), ("C", &c)] {
        let report = classify_decomposition(dec).unwrap();
        let mut batches: Vec<BTreeSet<PointSet>> = Vec::new();
        let mut batch_ok = true;
        for seed in [1u64, 2, 3] {
            let fam = if label == "C" {
                case_c_family(dec, &report, 20, seed)
            } else {
                generate_family(dec, &report, 20, seed)
            }
            .unwrap();
            let sets: BTreeSet<PointSet> = fam.iter().map(|m| m.points.clone()).collect();
            batch_ok &= fam.len() == 20
                && sets.len() == 20
                && fam
                    .iter()
                    .all(|m| verify_decomposition(m).valid && m.len() == dec.len());
            batches.push(sets);
        }
        let mut overlaps = Vec::new();
        for i in 0..3 {
            for j in i + 1..3 {
                let shared = batches[i]
                    .intersection(&batches[j])
                    .filter(|s| **s != dec.points)
                    .count();
                overlaps.push(shared);
            }
        }
        let disjoint = overlaps.iter().all(|&n| n == 0);
        ok &= batch_ok && disjoint;
        notes.push(format!(
            "{label}: batches {} shared across seeds {overlaps:?}",
            if batch_ok { "20/20 certified" } else { "incomplete" }
        ));
    }
    pass(ok, notes.join("; "))
}

fn ac5() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    let expect = |ok: &mut bool, notes: &mut Vec<String>, name: &str, got: &str, want: &str| {
        *ok &= got == want;
        notes.push(format!("{name}={got}"));
    };
    let (_, a) = build_case_a(5, 2, 4, 2, BIG, 51).unwrap();
    let (_, b) = build_case_b(4, 2, 5, 0, BIG, 52).unwrap();
    let (_, c) = build_case_c(5, 2, BIG, 53).unwrap();
    for (name, dec, want) in [("A", &a, "A"), ("B", &b, "B"), ("C", &c, "C")] {
        expect(&mut ok, &mut notes, name, classify_decomposition(dec).unwrap().case.label(), want);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let space = VeroneseSpace::new(2, 4).unwrap();
    let one = PointSet::new(vec![random_point(BIG, 2, &mut rng)]);
    let rank_one = Decomposition::from_weighted(one, vec![BIG.from_i64(3)], space).unwrap();
    expect(&mut ok, &mut notes, "rank1", classify_decomposition(&rank_one).unwrap().case.label(), "unique");

    // Two points of P^2(F_3) in degree 4: unique by exhaustive search.
    let f3 = FieldSpec::Prime(3);
    let pts = PointSet::new(vec![
        waring_core::fieldpoly::ProjPoint::from_i64(f3, &[1, 0, 2]).unwrap(),
        waring_core::fieldpoly::ProjPoint::from_i64(f3, &[0, 1, 1]).unwrap(),
    ]);
    let small = Decomposition::from_weighted(pts, vec![f3.one(), f3.from_i64(2)], space).unwrap();
    let found = enumerate_s(&small.target, 2, space, f3, &OracleBudget::default()).unwrap();
    let brute = brute_rank(&small.target, space, f3, &OracleBudget::default()).unwrap();
    ok &= found.len() == 1 && brute == 2;
    expect(&mut ok, &mut notes, "oracle_unique", classify_decomposition(&small).unwrap().case.label(), "unique");

    let i1 = build_example_i1(6, FieldSpec::Prime(13), 0).unwrap();
    let verdict = uniqueness_verdict(&i1.first).unwrap();
    ok &= verdict == Verdict::OutOfRegime;
    notes.push(format!("size 9 at d=6: {verdict:?}"));
    pass(ok, notes.join(", "))
}

fn ac6() -> Outcome {
    let f7 = FieldSpec::Prime(7);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let budget = OracleBudget::default();
    let mut bad = 0;
    for _ in 0..50 {
        let d = rng.gen_range(1..=7u32);
        let k = rng.gen_range(1..=(d as usize).div_ceil(2));
        let space = VeroneseSpace::new(1, d).unwrap();
        let pts = waring_core::veronese::random_points(f7, 1, k, &mut rng, |_| true).unwrap();
        let w = (0..k).map(|_| f7.random_nonzero(&mut rng)).collect();
        let dec = Decomposition::from_weighted(pts, w, space).unwrap();
        let f = BinaryForm::from_tensor(f7, dec.target.clone()).unwrap();
        let rank = sylvester_analyze(&f).unwrap().rank;
        let found = enumerate_s(&dec.target, rank, space, f7, &budget).unwrap();
        let probe = bgl_uniqueness_probe(&dec, &budget).unwrap();
        if found.len() != 1 || !probe.valid {
            bad += 1;
        }
    }
    let f3 = FieldSpec::Prime(3);
    for _ in 0..20 {
        let d = rng.gen_range(3..=4u32);
        let space = VeroneseSpace::new(2, d).unwrap();
        let pts = waring_core::veronese::random_points(f3, 2, 2, &mut rng, |_| true).unwrap();
        let w = (0..2).map(|_| f3.random_nonzero(&mut rng)).collect();
        let dec = Decomposition::from_weighted(pts, w, space).unwrap();
        let rank = brute_rank(&dec.target, space, f3, &budget).unwrap();
        let found = enumerate_s(&dec.target, rank, space, f3, &budget).unwrap();
        if rank != 2 || found.len() != 1 {
            bad += 1;
        }
    }
    pass(bad == 0, format!("70 instances, {bad} with more than one decomposition"))
}

fn ac7() -> Outcome {
    let ex = match build_example_i1(6, FieldSpec::Prime(13), 0) {
        Ok(ex) => ex,
        Err(e) => return pass(false, format!("builder failed: {e}")),
    };
    let distinct = ex.first.points != ex.second.points;
    let sizes = ex.first.len() == 9 && ex.second.len() == 9;
    let certified = verify_decomposition(&ex.first).valid && verify_decomposition(&ex.second).valid;
    let v1 = lemma_v1_check(&ex.first, &ex.second).is_ok_and(|c| c.valid);
    let count = ex.in_curve_count();
    let flag = if count == 2 { "" } else { " (differs from 2)" };
    pass(
        distinct && sizes && certified && v1 && count >= 2,
        format!(
            "F_13 cubic with {} points, in-curve count {count}{flag}, attempts {}, off-curve hits {}/{}",
            ex.curve_points, ex.attempts, ex.off_curve_hits, ex.off_curve_trials
        ),
    )
}

fn ac8() -> Outcome {
    let field = FieldSpec::Prime(101);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut forms, mut lifted, mut skipped, mut failures) = (0, 0, 0, 0);
    while forms < 50 {
        let d = rng.gen_range(4..=8);
        let f = random_form(field, d, &mut rng);
        let analysis = sylvester_analyze(&f).unwrap();
        let (t, s) = (analysis.border_rank, analysis.rank);
        if s != d as usize + 2 - t || s <= t {
            continue;
        }
        forms += 1;
        let a = sylvester_decompose(&f).unwrap();
        let mut nodes = a.nodes.points().to_vec();
        nodes.shuffle(&mut rng);
        let e = PointSet::new(nodes[..s - t].to_vec());
        let q = match project_from_nodes(&f, &e) {
            Ok(q) => q,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        let family = decomposition_family(&q, 5, rng.gen()).unwrap_or_default();
        if family.is_empty() {
            failures += 1;
        }
        for u in family {
            if !u.nodes.is_disjoint(&e) {
                skipped += 1;
                continue;
            }
            match lift_decomposition(&f, &u.nodes, &e) {
                Ok(Some(l)) if l.len() == s && verify_decomposition(&binary_dec(&f, &l)).valid => {
                    lifted += 1
                }
                _ => failures += 1,
            }
        }
    }
    pass(
        failures == 0 && lifted > 0,
        format!("{forms} forms, {lifted} lifts certified, {skipped} samples meeting E skipped, {failures} failures"),
    )
}

fn random_matrix<R: Rng>(field: FieldSpec, rows: usize, cols: usize, rank: usize, rng: &mut R) -> Matrix {
    let left = Matrix::from_rows(
        field,
        rank,
        (0..rows).map(|_| (0..rank).map(|_| field.random(rng)).collect()).collect(),
    );
    let right = Matrix::from_rows(
        field,
        cols,
        (0..rank).map(|_| (0..cols).map(|_| field.random(rng)).collect()).collect(),
    );
    left.mul(&right)
}

fn ac9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut failures = 0;
    for i in 0..1000 {
        let field = if i % 2 == 0 { FieldSpec::Rational } else { BIG };
        let n = rng.gen_range(2..=7);
        if i % 4 < 2 {
            let rows = rng.gen_range(1..=7);
            let rank = rng.gen_range(1..=rows.min(n));
            let m = random_matrix(field, rows, n, rank, &mut rng);
            let r = m.rank();
            let ker = m.kernel_basis();
            let zero = ker
                .iter()
                .all(|k| m.mul_vec(k).iter().all(Scalar::is_zero));
            let bareiss_ok = field != FieldSpec::Rational || r == m.bareiss_rank();
            if r + ker.len() != n || !zero || !bareiss_ok || vectors_rank(field, n, &ker) != ker.len() {
                failures += 1;
            }
        } else {
            let gen = |k: usize, rng: &mut ChaCha8Rng| -> Vec<Vector> {
                (0..k).map(|_| (0..n).map(|_| field.random(rng)).collect()).collect()
            };
            let (ku, kw) = (rng.gen_range(1..=n), rng.gen_range(1..=n));
            let u = gen(ku, &mut rng);
            let mut w = gen(kw, &mut rng);
            if rng.gen_bool(0.5) {
                w.push(u[0].clone());
            }
            let du = vectors_rank(field, n, &u);
            let dw = vectors_rank(field, n, &w);
            let meet = subspace_intersect(field, n, &u, &w);
            let sum = waring_core::fieldpoly::subspace_sum_dim(field, n, &u, &w);
            let inside = meet.iter().all(|v| {
                let mut uu = u.clone();
                uu.push(v.clone());
                let mut ww = w.clone();
                ww.push(v.clone());
                vectors_rank(field, n, &uu) == du && vectors_rank(field, n, &ww) == dw
            });
            if meet.len() + sum != du + dw || !inside {
                failures += 1;
            }
        }
    }
    pass(failures == 0, format!("1000 cases over Q and F_10007, {failures} failures"))
}

fn main() {
    type Criterion = (&'static str, &'static str, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        ("AC1", "sylvester rank equals oracle rank", ac1),
        ("AC2", "rank of x*y^(d-1) is d", ac2),
        ("AC3", "distinct decompositions have positive defect", ac3),
        ("AC4", "families are certified and fresh across seeds", ac4),
        ("AC5", "classification of builder outputs", ac5),
        ("AC6", "small rank is unique", ac6),
        ("AC7", "two decompositions of size 3d/2 on a cubic", ac7),
        ("AC8", "projected decompositions lift", ac8),
        ("AC9", "linear algebra identities", ac9),
    ];
    let mut passed = 0;
    for (id, name, run) in criteria {
        let start = Instant::now();
        let out = run();
        let secs = start.elapsed().as_secs_f64();
        if out.passed {
            passed += 1;
        }
        println!(
            "{} {id} {name} [{secs:.1}s]: {}",
            if out.passed { "PASS" } else { "FAIL" },
            out.detail
        );
    }
    println!("acceptance: {passed}/9 criteria passed");
}
