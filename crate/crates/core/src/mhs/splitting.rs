use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{MhsError, MixedHodge};
use crate::exactlin::{Direction, ExactMatrix, ExactScalar, ExactVector, Filtration, Subspace};

/// The bigrading `V ⊗ C = ⊕ I^{p,q}`; only nonzero pieces are stored.
///
/// JSON: `{"dim": n, "pieces": [{"p": p, "q": q, "basis": [[...], ...]}, ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "SplittingJson", try_from = "SplittingJson")]
pub struct DeligneSplitting {
    dim: usize,
    pieces: BTreeMap<(i64, i64), Subspace>,
}

#[derive(Serialize, Deserialize)]
struct PieceJson {
    p: i64,
    q: i64,
    basis: Vec<ExactVector>,
}

#[derive(Serialize, Deserialize)]
struct SplittingJson {
    dim: usize,
    pieces: Vec<PieceJson>,
}

impl From<DeligneSplitting> for SplittingJson {
    fn from(s: DeligneSplitting) -> Self {
        let pieces = s
            .pieces
            .into_iter()
            .map(|((p, q), v)| PieceJson { p, q, basis: v.basis().to_vec() })
            .collect();
        Self { dim: s.dim, pieces }
    }
}

impl TryFrom<SplittingJson> for DeligneSplitting {
    type Error = String;

    fn try_from(j: SplittingJson) -> Result<Self, String> {
        let mut pieces = BTreeMap::new();
        for piece in j.pieces {
            if piece.basis.iter().any(|b| b.len() != j.dim) {
                return Err("basis vector length differs from dim".into());
            }
            pieces.insert((piece.p, piece.q), Subspace::span(j.dim, &piece.basis));
        }
        Ok(Self { dim: j.dim, pieces })
    }
}

impl DeligneSplitting {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &BTreeMap<(i64, i64), Subspace> {
        &self.pieces
    }

    pub fn get(&self, p: i64, q: i64) -> Subspace {
        self.pieces.get(&(p, q)).cloned().unwrap_or_else(|| Subspace::zero(self.dim))
    }

    /// Hodge numbers `h^{p,q} = dim I^{p,q}`.
    pub fn hodge_numbers(&self) -> BTreeMap<(i64, i64), usize> {
        self.pieces.iter().map(|(k, s)| (*k, s.dim())).collect()
    }

    /// `⊕_{(p,q) : pred(p,q)} I^{p,q}`.
    pub fn sum_where(&self, pred: impl Fn(i64, i64) -> bool) -> Subspace {
        let mut acc = Subspace::zero(self.dim);
        for ((p, q), s) in &self.pieces {
            if pred(*p, *q) {
                acc = acc.sum(s).expect("same ambient");
            }
        }
        acc
    }

    /// Basis adapted to the splitting (columns) with the bidegree of each column.
    pub fn adapted_basis(&self) -> (ExactMatrix, Vec<(i64, i64)>) {
        let mut cols = Vec::new();
        let mut degrees = Vec::new();
        for (k, s) in &self.pieces {
            for b in s.basis() {
                cols.push(b.clone());
                degrees.push(*k);
            }
        }
        (ExactMatrix::from_columns(self.dim, &cols), degrees)
    }

    /// Operator acting on `I^{p,q}` by `value(p, q)`.
    pub fn diagonal_operator(&self, value: impl Fn(i64, i64) -> ExactScalar) -> ExactMatrix {
        let (p, degrees) = self.adapted_basis();
        let d: Vec<ExactScalar> = degrees.iter().map(|&(a, b)| value(a, b)).collect();
        let inv = p.inverse().expect("splitting is a direct sum");
        &(&p * &ExactMatrix::diag(&d)) * &inv
    }
}

/// Whether `F` induces on every `Gr^W_l` a pure Hodge structure of weight `l`,
/// i.e. `F^p ⊕ F̄^{l-p+1} = Gr^W_l` for all `p`.
pub fn is_mhs(m: &MixedHodge) -> bool {
    let (w, f) = (m.w(), m.f());
    if !w.is_real() {
        return false;
    }
    let fb = f.conj();
    let (flo, fhi) = f.range();
    for l in w.jumps() {
        let top = w.get(l);
        let below = w.get(l - 1);
        for p in flo - 1..=fhi + 1 {
            let a = f.induced_on(&top, &below, p);
            let b = fb.induced_on(&top, &below, l - p + 1);
            let sum = a.sum(&b).expect("same ambient");
            let meet = a.intersect(&b).expect("same ambient");
            if sum != top || meet != below {
                return false;
            }
        }
    }
    true
}

/// Deligne's splitting `I^{p,q} = F^p ∩ W_{p+q} ∩ (F̄^q ∩ W_{p+q} + Σ_{j≥1} F̄^{q-j} ∩ W_{p+q-j-1})`,
/// with its defining identities verified.
pub fn deligne_splitting(m: &MixedHodge) -> Result<DeligneSplitting, MhsError> {
    if !is_mhs(m) {
        return Err(MhsError::NotMhs);
    }
    let (w, f) = (m.w(), m.f());
    let fb = f.conj();
    let (wlo, whi) = w.range();
    let (flo, fhi) = f.range();
    let mut pieces = BTreeMap::new();
    for p in flo..=fhi {
        for q in flo..=fhi {
            let l = p + q;
            if l < wlo || l > whi {
                continue;
            }
            let wl = w.get(l);
            let mut inner = fb.get(q).intersect(&wl)?;
            let mut j = 1;
            while l - j - 1 >= wlo {
                inner = inner.sum(&fb.get(q - j).intersect(&w.get(l - j - 1))?)?;
                j += 1;
            }
            let ipq = f.get(p).intersect(&wl)?.intersect(&inner)?;
            if !ipq.is_zero() {
                pieces.insert((p, q), ipq);
            }
        }
    }
    let s = DeligneSplitting { dim: m.dim(), pieces };
    check_splitting(&s, w, f)?;
    Ok(s)
}

fn check_splitting(s: &DeligneSplitting, w: &Filtration, f: &Filtration) -> Result<(), MhsError> {
    let total: usize = s.pieces.values().map(Subspace::dim).sum();
    if total != s.dim || !s.sum_where(|_, _| true).is_full() {
        return Err(MhsError::SplittingInvariant("pieces do not form a direct sum decomposition".into()));
    }
    let (flo, fhi) = f.range();
    for p in flo..=fhi + 1 {
        if s.sum_where(|a, _| a >= p) != f.get(p) {
            return Err(MhsError::SplittingInvariant(format!("F^{p} is not recovered")));
        }
    }
    let (wlo, whi) = w.range();
    for l in wlo - 1..=whi {
        if s.sum_where(|a, b| a + b <= l) != w.get(l) {
            return Err(MhsError::SplittingInvariant(format!("W_{l} is not recovered")));
        }
    }
    Ok(())
}

/// Whether complex conjugation maps `I^{p,q}` onto `I^{q,p}`.
pub fn is_r_split(s: &DeligneSplitting) -> bool {
    s.pieces.iter().all(|(&(p, q), i)| i.conj() == s.get(q, p))
}

/// The grading element: acts on `I^{p,q}` by `(p + q) - center`.
pub fn grading_element(s: &DeligneSplitting, center: i64) -> Result<ExactMatrix, MhsError> {
    if !is_r_split(s) {
        return Err(MhsError::NotRSplit);
    }
    Ok(s.diagonal_operator(|p, q| ExactScalar::from_int(p + q - center)))
}

/// Deligne's δ-splitting: the real operator `δ` of type `(-1,-1)` with
/// `(W, exp(-iδ)F)` R-split.
///
/// With `Y` the grading by `p + q` of the splitting, `Ȳ = exp(-2iδ) Y exp(2iδ)`.
/// The unipotent `u = exp(-2iδ)` is determined by `u E_l(Y) = E_l(Ȳ)` and
/// `u ≡ 1 mod W_{l-1}`, so `δ = (i/2) log u`.
pub fn delta_splitting(m: &MixedHodge) -> Result<(ExactMatrix, MixedHodge), MhsError> {
    let s = deligne_splitting(m)?;
    let n = m.dim();
    let w = m.w();
    let mut src = Vec::new();
    let mut dst = Vec::new();
    for l in w.jumps() {
        let e = s.sum_where(|p, q| p + q == l);
        let ebar = e.conj();
        let below = w.get(l - 1);
        let frame: Vec<ExactVector> = ebar.basis().iter().chain(below.basis()).cloned().collect();
        for v in e.basis() {
            let c = Subspace::coordinates(&frame, v)
                .ok_or_else(|| MhsError::SplittingInvariant("E_l(Y) conjugate is not a complement of W_{l-1}".into()))?;
            let mut uv = vec![ExactScalar::zero(); n];
            for (ck, b) in c.iter().zip(ebar.basis()) {
                for (x, y) in uv.iter_mut().zip(b) {
                    *x += &(ck * y);
                }
            }
            src.push(v.clone());
            dst.push(uv);
        }
    }
    let a = ExactMatrix::from_columns(n, &src);
    let b = ExactMatrix::from_columns(n, &dst);
    let u = &b * &a.inverse().expect("splitting basis");
    let log_u = u
        .log_unipotent()
        .ok_or_else(|| MhsError::SplittingInvariant("u is not unipotent".into()))?;
    let delta = log_u.scale(&ExactScalar::from_frac(1, 2)).scale(&ExactScalar::i());
    if !delta.is_real() {
        return Err(MhsError::SplittingInvariant("δ is not real".into()));
    }
    for (&(p, q), piece) in s.pieces() {
        let target = s.sum_where(|r, t| r < p && t < q);
        if !target.contains_subspace(&piece.image(&delta)) {
            return Err(MhsError::SplittingInvariant(format!("δ does not lower both indices on I^({p},{q})")));
        }
    }
    let g = delta
        .scale(&-ExactScalar::i())
        .exp_nilpotent()
        .ok_or_else(|| MhsError::SplittingInvariant("δ is not nilpotent".into()))?;
    let rsplit = MixedHodge::new(w.clone(), m.f().transform(&g))?;
    let check = deligne_splitting(&rsplit)?;
    if !is_r_split(&check) {
        return Err(MhsError::SplittingInvariant("exp(-iδ)F is not R-split".into()));
    }
    Ok((delta, rsplit))
}

/// Decreasing filtration `F^p = Σ_{p' ≥ p} I^{p',q}` read back from a splitting.
pub fn hodge_filtration_of(s: &DeligneSplitting) -> Result<Filtration, MhsError> {
    let pieces: Vec<(i64, Subspace)> = s.pieces.iter().map(|(&(p, _), v)| (p, v.clone())).collect();
    Ok(Filtration::graded(s.dim, &pieces, Direction::Decreasing)?)
}

#[cfg(test)]
mod tests {
    use super::super::catalog;
    use super::*;
    use crate::exactlin::unit_vector;

    fn line(v: ExactVector) -> Subspace {
        Subspace::span(v.len(), &[v])
    }

    #[test]
    fn pure_weight_one() {
        let m = catalog::pure_weight_one(ExactScalar::i());
        assert!(is_mhs(&m));
        let s = deligne_splitting(&m).unwrap();
        assert_eq!(s.get(1, 0), m.f().get(1));
        assert_eq!(s.get(0, 1), m.f().get(1).conj());
        assert!(is_r_split(&s));
        assert!(grading_element(&s, 1).unwrap().is_zero());
    }

    #[test]
    fn real_line_is_not_pure() {
        let m = catalog::pure_weight_one(ExactScalar::from_int(3));
        assert!(!is_mhs(&m));
        assert_eq!(deligne_splitting(&m).unwrap_err(), MhsError::NotMhs);
    }

    #[test]
    fn hodge_tate_splitting() {
        let c = ExactScalar::gaussian(2, 3);
        let m = catalog::hodge_tate(c.clone());
        let s = deligne_splitting(&m).unwrap();
        assert_eq!(s.get(0, 0), line(unit_vector(2, 0)));
        assert_eq!(s.get(1, 1), line(vec![c, ExactScalar::one()]));
        assert!(!is_r_split(&s));
        assert!(is_r_split(&deligne_splitting(&catalog::hodge_tate(ExactScalar::from_frac(1, 2))).unwrap()));
        assert!(!is_r_split(&deligne_splitting(&catalog::hodge_tate(ExactScalar::i())).unwrap()));
    }

    #[test]
    fn hodge_tate_grading() {
        let s = deligne_splitting(&catalog::hodge_tate(ExactScalar::from_int(5))).unwrap();
        let y = grading_element(&s, 1).unwrap();
        assert_eq!(y.apply(&unit_vector(2, 0)), vec![ExactScalar::from_int(-1), ExactScalar::zero()]);
        let v = vec![ExactScalar::from_int(5), ExactScalar::one()];
        assert_eq!(y.apply(&v), v);
        let t = deligne_splitting(&catalog::hodge_tate(ExactScalar::i())).unwrap();
        assert_eq!(grading_element(&t, 1).unwrap_err(), MhsError::NotRSplit);
    }

    #[test]
    fn delta_of_hodge_tate() {
        let m = catalog::hodge_tate(ExactScalar::gaussian(2, 3));
        let (delta, r) = delta_splitting(&m).unwrap();
        assert_eq!(delta, ExactMatrix::from_ints(&[[0, 3], [0, 0]]));
        assert_eq!(r.f().get(1), line(vec![ExactScalar::from_int(2), ExactScalar::one()]));
    }

    #[test]
    fn delta_of_r_split_is_zero() {
        let m = catalog::legendre_limit();
        let (delta, r) = delta_splitting(&m).unwrap();
        assert!(delta.is_zero());
        assert_eq!(r, m);
    }

    #[test]
    fn delta_of_rank_four() {
        let m = catalog::rank_four_mixed();
        assert!(is_mhs(&m));
        let s = deligne_splitting(&m).unwrap();
        assert!(!is_r_split(&s));
        let (delta, r) = delta_splitting(&m).unwrap();
        assert!(delta.is_real() && !delta.is_zero());
        assert!(is_r_split(&deligne_splitting(&r).unwrap()));
    }

    #[test]
    fn legendre_limit_splitting() {
        let m = catalog::legendre_limit();
        assert!(is_mhs(&m));
        let s = deligne_splitting(&m).unwrap();
        assert_eq!(s.hodge_numbers(), [((0, 0), 1), ((1, 1), 1)].into_iter().collect());
        let y = grading_element(&s, 1).unwrap();
        assert_eq!(y, ExactMatrix::from_ints(&[[-1, 0], [0, 1]]));
        assert_eq!(hodge_filtration_of(&s).unwrap(), *m.f());
    }

    #[test]
    fn splitting_json_round_trip() {
        let s = deligne_splitting(&catalog::rank_four_mixed()).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        let back: DeligneSplitting = serde_json::from_str(&text).unwrap();
        assert_eq!(s, back);
    }
}
