use serde::Serialize;

use super::{NilpotentOrbitData, PeriodError};
use crate::exactlin::{operator_weight, ExactMatrix, Filtration, Subspace};
use crate::mhs::{ad_weight_components, deligne_splitting, delta_splitting, grading_element, is_mhs, MixedHodge};
use crate::weightfilt::{cone_constancy_check, monodromy_filtration, ConeSpec, ConeVerdict, NilpotentOperator};

const CONE_SAMPLES: usize = 8;

/// Limit parabolic attached to an ordering of the monodromy logarithms.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitParabolic {
    pub ordering: Vec<usize>,
    pub center: i64,
    /// `W^(r) = W(N_σ(1) + … + N_σ(r))`, centered at the weight.
    pub w_filts: Vec<Filtration>,
    /// Grading elements `Ŷ_(r)` of the δ-split structures `(W^(r), F_(r))`.
    pub gradings: Vec<ExactMatrix>,
    /// Basis of `n_P`: operators of `g` lowering every `Ŷ_(r)`-weight weakly
    /// and at least one strictly.
    pub n_p_basis: Vec<ExactMatrix>,
    pub bracket_closed: bool,
}

impl LimitParabolic {
    pub fn n_p(&self) -> Subspace {
        let n = self.w_filts.first().map_or(0, Filtration::dim);
        let flat: Vec<_> = self.n_p_basis.iter().map(ExactMatrix::flatten).collect();
        Subspace::span(n * n, &flat)
    }
}

fn sum_of(ns: &[&NilpotentOperator], dim: usize) -> ExactMatrix {
    ns.iter().fold(ExactMatrix::zeros(dim, dim), |acc, n| &acc + n.matrix())
}

/// Builds `W^(r)`, `Ŷ_(r)` and `n_P` for `ordering` (zero-based indices into
/// `d.ns()`), inside the Lie algebra spanned by `g_basis`.
pub fn build_limit_parabolic(
    d: &NilpotentOrbitData,
    ordering: &[usize],
    g_basis: &[ExactMatrix],
) -> Result<LimitParabolic, PeriodError> {
    let k = d.ns().len();
    let mut sorted = ordering.to_vec();
    sorted.sort_unstable();
    if sorted != (0..k).collect::<Vec<_>>() {
        return Err(PeriodError::Invalid("ordering is not a permutation of the operators".into()));
    }
    let dim = d.dim();
    let center = d.weight();
    let mut w_filts = Vec::with_capacity(k);
    let mut gradings = Vec::with_capacity(k);
    for r in 1..=k {
        let head: Vec<&NilpotentOperator> = ordering[..r].iter().map(|&j| &d.ns()[j]).collect();
        let cone = ConeSpec::with_random_samples(head.iter().map(|n| (*n).clone()).collect(), CONE_SAMPLES, r as u64)?;
        let w = match cone_constancy_check(&cone, center)? {
            ConeVerdict::Constant(w) => w,
            ConeVerdict::Varies { .. } => return Err(PeriodError::ConeNotConstant(ordering[..r].to_vec())),
        };
        debug_assert_eq!(w, monodromy_filtration(&NilpotentOperator::new(sum_of(&head, dim))?, center)?);
        let tail: Vec<&NilpotentOperator> = ordering[r..].iter().map(|&j| &d.ns()[j]).collect();
        let shift = sum_of(&tail, dim).scale(&crate::exactlin::ExactScalar::i());
        let g = shift.exp_nilpotent().expect("sum of commuting nilpotents");
        let m = MixedHodge::new(w.clone(), d.limit_f().transform(&g))?;
        if !is_mhs(&m) {
            return Err(PeriodError::Invalid(format!("(W^({r}), F_({r})) is not a mixed Hodge structure")));
        }
        let (_, split) = delta_splitting(&m)?;
        gradings.push(grading_element(&deligne_splitting(&split)?, center)?);
        w_filts.push(w);
    }
    let mut lowering = Vec::new();
    for x in g_basis {
        for (key, comp) in ad_weight_components(x, &gradings)? {
            if key.iter().all(|&v| v <= 0) && key.iter().any(|&v| v < 0) {
                lowering.push(comp.flatten());
            }
        }
    }
    let span = Subspace::span(dim * dim, &lowering);
    let n_p_basis: Vec<ExactMatrix> = span.basis().iter().map(|v| ExactMatrix::unflatten(dim, v)).collect();
    let bracket_closed = n_p_basis
        .iter()
        .all(|a| n_p_basis.iter().all(|b| span.contains(&a.bracket(b).flatten())));
    Ok(LimitParabolic { ordering: ordering.to_vec(), center, w_filts, gradings, n_p_basis, bracket_closed })
}

/// `ops[σ(j)] ∈ W^(r)_{−2}(End V)` for `j ≤ r`, `∈ W^(r)_{≤0}(End V)` for
/// `j > r`, and every nonzero `ops[i] ∈ n_P`.
pub fn nilradical_membership(ops: &[ExactMatrix], parab: &LimitParabolic) -> bool {
    let n_p = parab.n_p();
    for (r, w) in parab.w_filts.iter().enumerate() {
        for (pos, &j) in parab.ordering.iter().enumerate() {
            let bound = if pos <= r { -2 } else { 0 };
            if operator_weight(w, &ops[j]).is_some_and(|m| m > bound) {
                return false;
            }
        }
    }
    ops.iter().all(|x| x.is_zero() || n_p.contains(&x.flatten()))
}

pub fn nj_in_nilradical_check(d: &NilpotentOrbitData, parab: &LimitParabolic) -> bool {
    let ops: Vec<ExactMatrix> = d.ns().iter().map(|n| n.matrix().clone()).collect();
    ops.len() == parab.ordering.len() && nilradical_membership(&ops, parab)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::period::Family;

    #[test]
    fn legendre_nilradical_is_span_of_n() {
        let d = Family::Legendre.orbit_data();
        let p = build_limit_parabolic(&d, &[0], &Family::Legendre.lie_algebra()).unwrap();
        assert_eq!(p.n_p_basis.len(), 1);
        assert!(p.bracket_closed);
        assert!(nj_in_nilradical_check(&d, &p));
        assert_eq!(p.gradings[0], ExactMatrix::from_ints(&[[-1, 0], [0, 1]]));
        let raising = ExactMatrix::from_ints(&[[0, 0], [2, 0]]);
        assert!(!nilradical_membership(&[raising], &p));
    }

    #[test]
    fn product_nilradical_has_two_block_lowers() {
        let d = Family::Product.orbit_data();
        for ordering in [[0, 1], [1, 0]] {
            let p = build_limit_parabolic(&d, &ordering, &Family::Product.lie_algebra()).unwrap();
            assert_eq!(p.n_p_basis.len(), 2);
            assert!(p.bracket_closed);
            assert!(nj_in_nilradical_check(&d, &p));
        }
    }

    #[test]
    fn zero_operators_give_trivial_nilradical() {
        let d = Family::Constant.orbit_data();
        let p = build_limit_parabolic(&d, &[0], &Family::Constant.lie_algebra()).unwrap();
        assert!(p.n_p_basis.is_empty());
        assert!(nj_in_nilradical_check(&d, &p));
    }
}
