use hodgeset_core::oracle::{jordan_weight_filtration, weight_filtration_unique_mod_p};
use hodgeset_core::samples::random_nilpotent;
use hodgeset_core::weightfilt::{monodromy_axioms, monodromy_filtration, relative_weight_filtration, NilpotentOperator, Relative};
use hodgeset_core::exactlin::{Direction, Filtration};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matches_jordan_basis_reference(seed in any::<u64>(), dim in 1usize..=6, center in -2i64..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_nilpotent(dim, &mut rng);
        let n = NilpotentOperator::new(s.matrix.clone()).unwrap();
        let w = monodromy_filtration(&n, center).unwrap();
        prop_assert!(monodromy_axioms(&s.matrix, &w, center).is_ok());
        prop_assert_eq!(w, jordan_weight_filtration(&s, center));
    }

    #[test]
    fn scaling_does_not_change_filtration(seed in any::<u64>(), dim in 1usize..=5, k in 1i64..=7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_nilpotent(dim, &mut rng);
        let n = NilpotentOperator::new(s.matrix.clone()).unwrap();
        let scaled = n.scaled(&hodgeset_core::exactlin::ExactScalar::from_int(k));
        prop_assert_eq!(monodromy_filtration(&n, 0).unwrap(), monodromy_filtration(&scaled, 0).unwrap());
    }
}

#[test]
fn unique_by_exhaustive_search_in_low_dimension() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for dim in 1..=4 {
        for _ in 0..3 {
            let s = random_nilpotent(dim, &mut rng);
            let p = if dim == 4 { 2 } else { 3 };
            assert_eq!(weight_filtration_unique_mod_p(&s, p), Some(true), "blocks {:?}", s.blocks);
        }
    }
}

#[test]
fn relative_filtration_over_trivial_w_is_absolute() {
    let mut rng = ChaCha8Rng::seed_from_u64(78);
    for dim in 1..=5 {
        let s = random_nilpotent(dim, &mut rng);
        let n = NilpotentOperator::new(s.matrix.clone()).unwrap();
        let trivial = Filtration::trivial(dim, 0, Direction::Increasing);
        let rel = relative_weight_filtration(&n, &trivial).unwrap();
        assert!(matches!(rel, Relative::Exists(_)));
        assert_eq!(rel.filtration().unwrap(), &monodromy_filtration(&n, 0).unwrap());
    }
}
