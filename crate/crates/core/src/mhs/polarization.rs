use serde::Serialize;

use super::{deligne_splitting, MhsError, MixedHodge};
use crate::exactlin::{conj_vector, dot, ExactMatrix, ExactScalar, ExactVector, Subspace};
use crate::weightfilt::{monodromy_filtration, NilpotentOperator};

/// A nondegenerate bilinear form `Q(x, y) = xᵀ Q y` with `Q(x, y) = (-1)^k Q(y, x)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolarizationForm {
    matrix: ExactMatrix,
    weight: i64,
}

impl PolarizationForm {
    pub fn new(matrix: ExactMatrix, weight: i64) -> Result<Self, MhsError> {
        if !matrix.is_square() {
            return Err(MhsError::Degenerate);
        }
        let expected = if weight.rem_euclid(2) == 0 { matrix.clone() } else { -&matrix };
        if matrix.transpose() != expected {
            return Err(MhsError::WrongSymmetry);
        }
        if matrix.det().is_zero() {
            return Err(MhsError::Degenerate);
        }
        Ok(Self { matrix, weight })
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.matrix
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn eval(&self, x: &[ExactScalar], y: &[ExactScalar]) -> ExactScalar {
        dot(x, &self.matrix.apply(y))
    }

    pub fn negated(&self) -> Self {
        Self {
            matrix: -&self.matrix,
            weight: self.weight,
        }
    }
}

/// Outcome of each clause of the polarization check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolarizationReport {
    /// `W = W(N)` centered at `k`, and `N` is an infinitesimal isometry of `Q`.
    pub weight_lowering: bool,
    /// `N F^p ⊂ F^{p-1}`.
    pub griffiths: bool,
    /// `Q(F^p, F^{k-p+1}) = 0`.
    pub orthogonality: bool,
    /// `i^{p-q} Q(v, N^l v̄) > 0` on primitive `(p,q)` parts of `Gr_{k+l}`.
    pub positivity: bool,
}

impl PolarizationReport {
    pub fn holds(&self) -> bool {
        self.weight_lowering && self.griffiths && self.orthogonality && self.positivity
    }
}

/// Checks that `(W, F)` is polarized by `N` and `Q` with weight filtration
/// `W(N)` centered at `center`.
///
/// Sign convention: on the primitive part `P^{p,q} = I^{p,q} ∩ ker N^{l+1}`
/// of `Gr_{k+l}`, the Hermitian form `h(u, v) = i^{p-q} Q(u, N^l v̄)` must be
/// positive definite (Hodge–Riemann with no extra sign factors).
pub fn polarized_mhs_check(
    m: &MixedHodge,
    n: &NilpotentOperator,
    q: &PolarizationForm,
    center: i64,
) -> Result<PolarizationReport, MhsError> {
    let dim = m.dim();
    if n.dim() != dim || q.matrix().rows() != dim {
        return Err(MhsError::Precondition("dimensions differ".into()));
    }
    let s = deligne_splitting(m)?;
    let nm = n.matrix();
    let isometry = &(&nm.transpose() * q.matrix()) + &(q.matrix() * nm);
    let weight_lowering =
        isometry.is_zero() && m.w().shifted_by(nm, -2) && monodromy_filtration(n, center)? == *m.w();
    let griffiths = m.f().shifted_by(nm, -1);
    let (flo, fhi) = m.f().range();
    let orthogonality = (flo..=fhi + 1).all(|p| {
        let a = m.f().get(p);
        let b = m.f().get(center - p + 1);
        a.basis().iter().all(|x| b.basis().iter().all(|y| q.eval(x, y).is_zero()))
    });
    let mut positivity = true;
    for (&(p, qq), piece) in s.pieces() {
        let l = p + qq - center;
        if l < 0 {
            continue;
        }
        let np = nm.pow(l as u32);
        let kernel = Subspace::span(dim, &nm.pow(l as u32 + 1).kernel());
        let prim = piece.intersect(&kernel)?;
        if prim.is_zero() {
            continue;
        }
        let phase = ExactScalar::i().pow((p - qq).rem_euclid(4) as u32);
        if !hermitian_positive(prim.basis(), |u, v| &phase * &q.eval(u, &np.apply(&conj_vector(v)))) {
            positivity = false;
        }
    }
    Ok(PolarizationReport {
        weight_lowering,
        griffiths,
        orthogonality,
        positivity,
    })
}

/// Sylvester's criterion on the Gram matrix of `form` over `basis`.
fn hermitian_positive(basis: &[ExactVector], form: impl Fn(&ExactVector, &ExactVector) -> ExactScalar) -> bool {
    let k = basis.len();
    let mut gram = ExactMatrix::zeros(k, k);
    for (a, u) in basis.iter().enumerate() {
        for (b, v) in basis.iter().enumerate() {
            gram.set(a, b, form(u, v));
        }
    }
    if gram.conj().transpose() != gram {
        return false;
    }
    (1..=k).all(|r| {
        let mut minor = ExactMatrix::zeros(r, r);
        for a in 0..r {
            for b in 0..r {
                minor.set(a, b, gram.get(a, b).clone());
            }
        }
        minor.det().real_sign() == Some(1)
    })
}

#[cfg(test)]
mod tests {
    use super::super::catalog;
    use super::*;

    fn legendre() -> (MixedHodge, NilpotentOperator, PolarizationForm) {
        (catalog::legendre_limit(), catalog::legendre_n(), catalog::symplectic_form())
    }

    #[test]
    fn legendre_limit_is_polarized() {
        let (m, n, q) = legendre();
        let r = polarized_mhs_check(&m, &n, &q, 1).unwrap();
        assert!(r.holds(), "{r:?}");
    }

    #[test]
    fn negated_form_fails_positivity() {
        let (m, n, q) = legendre();
        let r = polarized_mhs_check(&m, &n, &q.negated(), 1).unwrap();
        assert!(!r.positivity);
        assert!(r.weight_lowering && r.griffiths && r.orthogonality);
    }

    #[test]
    fn pure_structure_with_zero_n() {
        let m = catalog::pure_weight_one(ExactScalar::i());
        let n = NilpotentOperator::new(ExactMatrix::zeros(2, 2)).unwrap();
        let r = polarized_mhs_check(&m, &n, &catalog::symplectic_form(), 1).unwrap();
        assert!(r.holds(), "{r:?}");
    }

    #[test]
    fn form_validation() {
        assert_eq!(
            PolarizationForm::new(ExactMatrix::from_ints(&[[0, 1], [0, 0]]), 1).unwrap_err(),
            MhsError::WrongSymmetry
        );
        assert_eq!(PolarizationForm::new(ExactMatrix::zeros(2, 2), 1).unwrap_err(), MhsError::Degenerate);
        assert!(PolarizationForm::new(ExactMatrix::identity(2), 0).is_ok());
    }
}
