use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use waring_core::binary::{apolar_basis, catalecticant, sylvester_analyze, sylvester_decompose, BinaryForm};
use waring_core::cert::verify_decomposition;
use waring_core::classify::{classify_decomposition, Decomposition, Line};
use waring_core::fieldpoly::{
    is_zero_vector, subspace_intersect, subspace_sum_dim, vectors_rank, FieldSpec, Matrix, PointSet, Scalar,
    Vector,
};
use waring_core::oracle::{brute_rank, enumerate_s_with, OracleBudget, Pruning};
use waring_core::veronese::{
    collinear_defect, hilbert_defect, in_span, random_points, weighted_sum, VeroneseSpace,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_vectors(field: FieldSpec, dim: usize, count: usize, seed: u64) -> Vec<Vector> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| (0..dim).map(|_| field.random(&mut r)).collect())
        .collect()
}

fn random_form(field: FieldSpec, d: u32, seed: u64) -> Option<BinaryForm> {
    let v = random_vectors(field, d as usize + 1, 1, seed).pop()?;
    if is_zero_vector(&v) {
        return None;
    }
    BinaryForm::from_tensor(field, v).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn grassmann_identity(seed in any::<u64>(), a in 0usize..5, b in 0usize..5) {
        let f = FieldSpec::Prime(5);
        let dim = 5;
        let u = random_vectors(f, dim, a, seed);
        let w = random_vectors(f, dim, b, seed ^ 0x9e37);
        let cap = subspace_intersect(f, dim, &u, &w).len();
        let sum = subspace_sum_dim(f, dim, &u, &w);
        prop_assert_eq!(vectors_rank(f, dim, &u) + vectors_rank(f, dim, &w), cap + sum);
    }

    #[test]
    fn kernel_is_annihilated(seed in any::<u64>(), rows in 1usize..6, cols in 1usize..7) {
        let f = FieldSpec::Prime(101);
        let m = Matrix::from_rows(f, cols, random_vectors(f, cols, rows, seed));
        let kernel = m.kernel_basis();
        prop_assert_eq!(kernel.len() + m.rank(), cols);
        for k in &kernel {
            prop_assert!(is_zero_vector(&m.mul_vec(k)));
        }
    }

    #[test]
    fn rational_rank_matches_fraction_free(entries in prop::collection::vec(-4i64..5, 12)) {
        let q = FieldSpec::Rational;
        let rows = entries.chunks(4).map(|c| c.iter().map(|&x| q.from_i64(x)).collect()).collect();
        let m = Matrix::from_rows(q, 4, rows);
        prop_assert_eq!(m.rank(), m.bareiss_rank());
    }

    #[test]
    fn weighted_sum_recovers_weights(seed in any::<u64>(), r in 1usize..4, d in 2u32..5, n in 1usize..4) {
        let f = FieldSpec::Prime(10007);
        let space = VeroneseSpace::new(r, d).unwrap();
        let mut g = rng(seed);
        let a = random_points(f, r, n, &mut g, |_| true).unwrap();
        let w: Vec<Scalar> = (0..n).map(|_| f.random_nonzero(&mut g)).collect();
        let p = weighted_sum(&a, &w, space).unwrap();
        let back = in_span(&p, &a, space).unwrap();
        prop_assert_eq!(back, Some(w.clone()));
        let form = space.vector_to_form(f, &p).unwrap();
        prop_assert_eq!(space.form_to_vector(&form).unwrap(), p.clone());
        let dec = Decomposition::from_weighted(a, w, space).unwrap();
        prop_assert!(verify_decomposition(&dec).valid);
    }

    #[test]
    fn collinear_points_have_expected_defect(seed in any::<u64>(), n in 2usize..9, t in 1u32..5) {
        let f = FieldSpec::Prime(10007);
        let mut g = rng(seed);
        let base = random_points(f, 2, 2, &mut g, |_| true).unwrap();
        let line = Line::through(&base.points()[0], &base.points()[1]).unwrap();
        let on = random_points(f, 1, n, &mut g, |_| true).unwrap();
        let z = PointSet::new(on.iter().map(|u| line.image(u)).collect());
        prop_assert_eq!(hilbert_defect(&z, t), collinear_defect(n, t));
    }

    #[test]
    fn apolar_basis_lies_in_catalecticant_kernel(seed in any::<u64>(), d in 1u32..8) {
        let Some(form) = random_form(FieldSpec::Prime(101), d, seed) else { return Ok(()) };
        for k in 0..=d as usize {
            let h = catalecticant(&form, k);
            for g in apolar_basis(&form, k) {
                prop_assert!(is_zero_vector(&h.mul_vec(g.coeffs())));
            }
        }
    }

    #[test]
    fn sylvester_witness_reconstructs(seed in any::<u64>(), d in 1u32..8) {
        let f = FieldSpec::Prime(101);
        let Some(form) = random_form(f, d, seed) else { return Ok(()) };
        let a = sylvester_analyze(&form).unwrap();
        prop_assert!(a.border_rank <= a.geometric_rank);
        prop_assert!(a.geometric_rank <= a.rank);
        prop_assert!(a.rank <= d as usize + 1);
        let dec = sylvester_decompose(&form).unwrap();
        prop_assert_eq!(dec.len(), a.rank);
        let dec = Decomposition::new(form.space(), form.tensor().to_vec(), dec.nodes, dec.weights).unwrap();
        prop_assert!(verify_decomposition(&dec).valid);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn binary_rank_agrees_with_oracle(seed in any::<u64>(), d in 1u32..6) {
        let f = FieldSpec::Prime(7);
        let Some(form) = random_form(f, d, seed) else { return Ok(()) };
        let budget = OracleBudget { max_points: 8, max_rank: 8, max_subsets: 1_000_000 };
        let brute = brute_rank(form.tensor(), form.space(), f, &budget).unwrap();
        prop_assert_eq!(sylvester_analyze(&form).unwrap().rank, brute);
    }

    #[test]
    fn pruning_preserves_the_search(seed in any::<u64>(), s in 1usize..4) {
        let f = FieldSpec::Prime(3);
        let space = VeroneseSpace::new(2, 2).unwrap();
        let mut g = rng(seed);
        let target: Vec<Scalar> = (0..space.dim()).map(|_| f.random(&mut g)).collect();
        if is_zero_vector(&target) {
            return Ok(());
        }
        let budget = OracleBudget::default();
        let on = enumerate_s_with(&target, s, space, f, &budget, Pruning::On).unwrap();
        let off = enumerate_s_with(&target, s, space, f, &budget, Pruning::Off).unwrap();
        prop_assert_eq!(on, off);
    }

    #[test]
    fn classification_is_scale_invariant(seed in any::<u64>(), n in 1usize..6) {
        let f = FieldSpec::Prime(10007);
        let space = VeroneseSpace::new(2, 4).unwrap();
        let mut g = rng(seed);
        let a = random_points(f, 2, n, &mut g, |_| true).unwrap();
        let w: Vec<Scalar> = (0..n).map(|_| f.random_nonzero(&mut g)).collect();
        let c = f.random_nonzero(&mut g);
        let scaled: Vec<Scalar> = w.iter().map(|x| x * &c).collect();
        let one = classify_decomposition(&Decomposition::from_weighted(a.clone(), w, space).unwrap()).unwrap();
        let two = classify_decomposition(&Decomposition::from_weighted(a, scaled, space).unwrap()).unwrap();
        prop_assert_eq!(one.case.label(), two.case.label());
    }
}
