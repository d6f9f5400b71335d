use hodgeset_core::mhs::catalog;
use hodgeset_core::mhs::{
    delta_splitting, deligne_splitting, hodge_filtration_of, is_r_split, polarized_mhs_check, MixedHodge,
};
use hodgeset_core::samples::random_hodge_tate;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn identities_hold(m: &MixedHodge) {
    let s = deligne_splitting(m).unwrap();
    let total: usize = s.pieces().values().map(|p| p.dim()).sum();
    assert_eq!(total, m.dim());
    assert!(s.sum_where(|_, _| true).is_full());
    assert_eq!(&hodge_filtration_of(&s).unwrap(), m.f());
    let (lo, hi) = m.w().range();
    for l in lo - 1..=hi {
        assert_eq!(s.sum_where(|p, q| p + q <= l), m.w().get(l));
    }
    let (delta, split) = delta_splitting(m).unwrap();
    assert!(delta.is_real());
    assert!(is_r_split(&deligne_splitting(&split).unwrap()));
}

#[test]
fn catalog_structures_split() {
    let g = |a, b| hodgeset_core::exactlin::ExactScalar::gaussian(a, b);
    for m in [
        catalog::pure_weight_one(g(0, 1)),
        catalog::pure_weight_one(g(3, 2)),
        catalog::hodge_tate(g(2, -5)),
        catalog::legendre_limit(),
        catalog::rank_four_mixed(),
        catalog::product_limit(),
    ] {
        identities_hold(&m);
    }
}

#[test]
fn random_hodge_tate_structures_split() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..40 {
        identities_hold(&random_hodge_tate(&mut rng));
    }
}

#[test]
fn legendre_limit_is_polarized_and_sign_matters() {
    let m = catalog::legendre_limit();
    let n = catalog::legendre_n();
    let q = catalog::symplectic_form();
    assert!(polarized_mhs_check(&m, &n, &q, 1).unwrap().holds());
    assert!(!polarized_mhs_check(&m, &n, &q.negated(), 1).unwrap().holds());
}
