//! Small exact mixed Hodge structures used throughout tests, the CLI and
//! the verification harness.

use super::{MixedHodge, PolarizationForm};
use crate::exactlin::{unit_vector, Direction, ExactMatrix, ExactScalar, ExactVector, Filtration, Subspace};
use crate::weightfilt::NilpotentOperator;

fn s(n: usize, vs: &[ExactVector]) -> Subspace {
    Subspace::span(n, vs)
}

fn e(n: usize, i: usize) -> ExactVector {
    unit_vector(n, i)
}

fn hodge(n: usize, f1: Vec<ExactVector>) -> Filtration {
    Filtration::from_steps(n, Direction::Decreasing, vec![(0, Subspace::full(n)), (1, s(n, &f1))]).expect("valid F")
}

/// Pure weight 1 on `Q²`: `W_1 = V`, `F¹ = span(τ e1 + e2)`.
pub fn pure_weight_one(tau: ExactScalar) -> MixedHodge {
    let w = Filtration::trivial(2, 1, Direction::Increasing);
    MixedHodge::new(w, hodge(2, vec![vec![tau, ExactScalar::one()]])).expect("filtrations")
}

/// Hodge–Tate on `Q²`: `W_0 = span(e1) ⊂ W_2 = V`, `F¹ = span(e2 + c e1)`.
pub fn hodge_tate(c: ExactScalar) -> MixedHodge {
    let w = Filtration::from_steps(2, Direction::Increasing, vec![(0, s(2, &[e(2, 0)])), (2, Subspace::full(2))])
        .expect("valid W");
    MixedHodge::new(w, hodge(2, vec![vec![c, ExactScalar::one()]])).expect("filtrations")
}

/// Limit mixed Hodge structure of the Legendre family in the basis where
/// `N = [[0,2],[0,0]]`: Hodge–Tate with `F¹ = span(e2)`.
pub fn legendre_limit() -> MixedHodge {
    hodge_tate(ExactScalar::zero())
}

/// Logarithm of the local monodromy `T = [[1,2],[0,1]]` at `λ = 0`.
pub fn legendre_n() -> NilpotentOperator {
    NilpotentOperator::new(ExactMatrix::from_ints(&[[0, 2], [0, 0]])).expect("nilpotent")
}

/// The intersection form with `Q(e1, e2) = -1`.
pub fn symplectic_form() -> PolarizationForm {
    PolarizationForm::new(ExactMatrix::from_ints(&[[0, -1], [1, 0]]), 1).expect("nondegenerate")
}

/// A rank 4 structure with weights 0, 1, 2 that is not R-split.
pub fn rank_four_mixed() -> MixedHodge {
    let w = Filtration::from_steps(
        4,
        Direction::Increasing,
        vec![
            (0, s(4, &[e(4, 0)])),
            (1, s(4, &[e(4, 0), e(4, 1), e(4, 2)])),
            (2, Subspace::full(4)),
        ],
    )
    .expect("valid W");
    let g = |re, im| ExactScalar::gaussian(re, im);
    let f1 = vec![
        vec![g(1, 2), g(1, 0), g(0, 1), g(0, 0)],
        vec![g(3, -1), g(0, 1), g(2, 0), g(1, 0)],
    ];
    MixedHodge::new(w, hodge(4, f1)).expect("filtrations")
}

/// `N_1 = N ⊕ 0` on the product of two Legendre fibers.
pub fn product_n1() -> NilpotentOperator {
    let n = legendre_n().matrix().clone();
    NilpotentOperator::new(ExactMatrix::block_diag(&[n, ExactMatrix::zeros(2, 2)])).expect("nilpotent")
}

/// `N_2 = 0 ⊕ N` on the product of two Legendre fibers.
pub fn product_n2() -> NilpotentOperator {
    let n = legendre_n().matrix().clone();
    NilpotentOperator::new(ExactMatrix::block_diag(&[ExactMatrix::zeros(2, 2), n])).expect("nilpotent")
}

/// `Q ⊕ Q` on the product.
pub fn product_form() -> PolarizationForm {
    let q = symplectic_form().matrix().clone();
    PolarizationForm::new(ExactMatrix::block_diag(&[q.clone(), q]), 1).expect("nondegenerate")
}

/// Limit structure of the product family: `W = W(N_1 + N_2)` centered at 1
/// and `F¹ = span(e2, e4)`.
pub fn product_limit() -> MixedHodge {
    let w = Filtration::from_steps(
        4,
        Direction::Increasing,
        vec![(0, s(4, &[e(4, 0), e(4, 2)])), (2, Subspace::full(4))],
    )
    .expect("valid W");
    MixedHodge::new(w, hodge(4, vec![e(4, 1), e(4, 3)])).expect("filtrations")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mhs::is_mhs;

    #[test]
    fn catalog_entries_are_mhs() {
        assert!(is_mhs(&pure_weight_one(ExactScalar::gaussian(1, 1))));
        assert!(is_mhs(&hodge_tate(ExactScalar::gaussian(0, 5))));
        assert!(is_mhs(&legendre_limit()));
        assert!(is_mhs(&rank_four_mixed()));
        assert!(is_mhs(&product_limit()));
    }
}
