use std::collections::BTreeMap;

use serde::Serialize;

use super::MhsError;
use crate::exactlin::{ExactMatrix, ExactScalar, ExactVector, Subspace};

/// `(N⁻, Y, N⁺)` with `[Y, N⁻] = -2N⁻`, `[Y, N⁺] = 2N⁺`, `[N⁺, N⁻] = Y`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sl2Triple {
    pub lower: ExactMatrix,
    pub grading: ExactMatrix,
    pub upper: ExactMatrix,
}

impl Sl2Triple {
    pub fn brackets_hold(&self) -> bool {
        let two = ExactScalar::from_int(2);
        self.grading.bracket(&self.lower) == self.lower.scale(&-&two)
            && self.grading.bracket(&self.upper) == self.upper.scale(&two)
            && self.upper.bracket(&self.lower) == self.grading
    }
}

/// The unique `N⁺` completing `(N⁻, Y)` to an sl2-triple, obtained from the
/// linear system `[N⁺, N⁻] = Y`, `[Y, N⁺] = 2N⁺` with a full-rank check.
pub fn jacobson_morozov_completion(lower: &ExactMatrix, grading: &ExactMatrix) -> Result<Sl2Triple, MhsError> {
    let n = lower.rows();
    if !lower.is_square() || !grading.is_square() || grading.rows() != n {
        return Err(MhsError::Precondition("operators must be square of equal size".into()));
    }
    if lower.nilpotency_index().is_none() {
        return Err(MhsError::Precondition("lower element is not nilpotent".into()));
    }
    let two = ExactScalar::from_int(2);
    if grading.bracket(lower) != lower.scale(&-&two) {
        return Err(MhsError::Precondition("[Y, N⁻] != -2N⁻".into()));
    }
    let mut cols = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let e = ExactMatrix::unit(n, i, j);
            let mut col = e.bracket(lower).flatten();
            col.extend((&grading.bracket(&e) - &e.scale(&two)).flatten());
            cols.push(col);
        }
    }
    let sys = ExactMatrix::from_columns(2 * n * n, &cols);
    let mut rhs = grading.flatten();
    rhs.extend(vec![ExactScalar::zero(); n * n]);
    let x = sys.solve(&rhs).ok_or(MhsError::Inconsistent)?;
    if sys.rank() < n * n {
        return Err(MhsError::NotUnique);
    }
    let triple = Sl2Triple {
        lower: lower.clone(),
        grading: grading.clone(),
        upper: ExactMatrix::unflatten(n, &x),
    };
    debug_assert!(triple.brackets_hold());
    Ok(triple)
}

/// Joint eigenspace decomposition `V = ⊕ V_{l_1..l_r}` of commuting gradings,
/// where `Y_(s)` acts on `V_{l_1..l_r}` by `l_s - center`.
#[derive(Clone, Debug, PartialEq)]
pub struct Multigrading {
    dim: usize,
    center: i64,
    pieces: BTreeMap<Vec<i64>, Subspace>,
}

impl Multigrading {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn center(&self) -> i64 {
        self.center
    }

    pub fn pieces(&self) -> &BTreeMap<Vec<i64>, Subspace> {
        &self.pieces
    }

    pub fn get(&self, index: &[i64]) -> Subspace {
        self.pieces.get(index).cloned().unwrap_or_else(|| Subspace::zero(self.dim))
    }

    /// Projections onto each summand along the others.
    pub fn projectors(&self) -> BTreeMap<Vec<i64>, ExactMatrix> {
        let cols: Vec<ExactVector> = self.pieces.values().flat_map(|s| s.basis().iter().cloned()).collect();
        let p = ExactMatrix::from_columns(self.dim, &cols);
        let inv = p.inverse().expect("summands span V");
        let mut out = BTreeMap::new();
        let mut offset = 0;
        for (k, s) in &self.pieces {
            let d: Vec<ExactScalar> = (0..self.dim)
                .map(|c| if c >= offset && c < offset + s.dim() { ExactScalar::one() } else { ExactScalar::zero() })
                .collect();
            out.insert(k.clone(), &(&p * &ExactMatrix::diag(&d)) * &inv);
            offset += s.dim();
        }
        out
    }
}

impl Serialize for Multigrading {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Piece<'a> {
            index: &'a [i64],
            basis: &'a [ExactVector],
        }
        let pieces: Vec<Piece> = self
            .pieces
            .iter()
            .map(|(k, v)| Piece { index: k, basis: v.basis() })
            .collect();
        pieces.serialize(s)
    }
}

/// Integer eigenspaces of a semisimple operator with integer spectrum.
fn integer_eigenspaces(y: &ExactMatrix) -> Result<BTreeMap<i64, Subspace>, MhsError> {
    let n = y.rows();
    let bound = (0..n)
        .map(|i| {
            y.row(i)
                .iter()
                .map(|x| {
                    let (a, b) = x.to_f64_pair();
                    a.hypot(b)
                })
                .sum::<f64>()
        })
        .fold(0.0, f64::max)
        .ceil() as i64
        + 1;
    let mut out = BTreeMap::new();
    let mut total = 0;
    for e in -bound..=bound {
        let shifted = y - &ExactMatrix::identity(n).scale(&ExactScalar::from_int(e));
        let k = shifted.kernel();
        if !k.is_empty() {
            total += k.len();
            out.insert(e, Subspace::span(n, &k));
        }
    }
    if total != n {
        return Err(MhsError::NonIntegerEigenvalue);
    }
    Ok(out)
}

/// Joint eigenspaces of pairwise commuting semisimple gradings, indexed by
/// `(eigenvalue + center)` for each grading in order.
pub fn commuting_multigrading(gradings: &[ExactMatrix], center: i64) -> Result<Multigrading, MhsError> {
    let n = gradings.first().map_or(0, ExactMatrix::rows);
    for (a, ya) in gradings.iter().enumerate() {
        if !ya.is_square() || ya.rows() != n {
            return Err(MhsError::Precondition("gradings must be square of equal size".into()));
        }
        for yb in &gradings[a + 1..] {
            if !ya.bracket(yb).is_zero() {
                return Err(MhsError::NotCommuting);
            }
        }
    }
    let mut pieces: BTreeMap<Vec<i64>, Subspace> = BTreeMap::from([(Vec::new(), Subspace::full(n))]);
    for y in gradings {
        let eig = integer_eigenspaces(y)?;
        let mut next = BTreeMap::new();
        for (k, s) in &pieces {
            for (e, es) in &eig {
                let meet = s.intersect(es)?;
                if !meet.is_zero() {
                    let mut key = k.clone();
                    key.push(e + center);
                    next.insert(key, meet);
                }
            }
        }
        pieces = next;
    }
    Ok(Multigrading { dim: n, center, pieces })
}

/// `Ŷ_j = Ŷ_(j) - Ŷ_(j-1)` (with `Ŷ_(0) = 0`).
pub fn yhat_increments(cumulative: &[ExactMatrix]) -> Vec<ExactMatrix> {
    cumulative
        .iter()
        .enumerate()
        .map(|(j, y)| if j == 0 { y.clone() } else { y - &cumulative[j - 1] })
        .collect()
}

/// Decomposition of `op` into joint ad-eigencomponents, keyed by the vector
/// of ad-eigenvalues. The components sum to `op`.
pub fn ad_weight_components(op: &ExactMatrix, gradings: &[ExactMatrix]) -> Result<BTreeMap<Vec<i64>, ExactMatrix>, MhsError> {
    let mg = commuting_multigrading(gradings, 0)?;
    if op.rows() != mg.dim() || !op.is_square() {
        return Err(MhsError::Precondition("operator size differs from gradings".into()));
    }
    let proj = mg.projectors();
    let mut out: BTreeMap<Vec<i64>, ExactMatrix> = BTreeMap::new();
    for (ka, pa) in &proj {
        let left = pa * op;
        for (kb, pb) in &proj {
            let piece = &left * pb;
            if piece.is_zero() {
                continue;
            }
            let key: Vec<i64> = ka.iter().zip(kb).map(|(a, b)| a - b).collect();
            let entry = out.entry(key).or_insert_with(|| ExactMatrix::zeros(op.rows(), op.rows()));
            *entry = &*entry + &piece;
        }
    }
    Ok(out)
}

/// Component of `op` in `∩_r ker ad Ŷ_(r)`.
pub fn project_to_joint_kernel(op: &ExactMatrix, gradings: &[ExactMatrix]) -> Result<ExactMatrix, MhsError> {
    if gradings.is_empty() {
        return Ok(op.clone());
    }
    let key = vec![0; gradings.len()];
    let comps = ad_weight_components(op, gradings)?;
    Ok(comps.get(&key).cloned().unwrap_or_else(|| ExactMatrix::zeros(op.rows(), op.cols())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_ints(rows)
    }

    #[test]
    fn standard_sl2() {
        let t = jacobson_morozov_completion(&m(&[&[0, 0], &[1, 0]]), &m(&[&[1, 0], &[0, -1]])).unwrap();
        assert_eq!(t.upper, m(&[&[0, 1], &[0, 0]]));
        assert!(t.brackets_hold());
    }

    #[test]
    fn block_diagonal_completion() {
        let lower = ExactMatrix::block_diag(&[m(&[&[0, 0], &[1, 0]]), m(&[&[0, 0], &[3, 0]])]);
        let y = ExactMatrix::block_diag(&[m(&[&[1, 0], &[0, -1]]), m(&[&[1, 0], &[0, -1]])]);
        let t = jacobson_morozov_completion(&lower, &y).unwrap();
        let expected = ExactMatrix::block_diag(&[
            m(&[&[0, 1], &[0, 0]]),
            ExactMatrix::from_rows(vec![
                vec![ExactScalar::zero(), ExactScalar::from_frac(1, 3)],
                vec![ExactScalar::zero(), ExactScalar::zero()],
            ])
            .unwrap(),
        ]);
        assert_eq!(t.upper, expected);
    }

    #[test]
    fn zero_grading_is_rejected() {
        let err = jacobson_morozov_completion(&m(&[&[0, 0], &[1, 0]]), &ExactMatrix::zeros(2, 2)).unwrap_err();
        assert!(matches!(err, MhsError::Precondition(_)));
    }

    #[test]
    fn diagonal_multigrading() {
        let a = ExactMatrix::diag(&[ExactScalar::from_int(1), ExactScalar::from_int(-1), ExactScalar::from_int(1)]);
        let b = ExactMatrix::diag(&[ExactScalar::from_int(0), ExactScalar::from_int(0), ExactScalar::from_int(2)]);
        let g = commuting_multigrading(&[a, b], 1).unwrap();
        assert_eq!(g.pieces().len(), 3);
        assert_eq!(g.get(&[2, 1]).dim(), 1);
        assert_eq!(g.get(&[0, 1]).dim(), 1);
        assert_eq!(g.get(&[2, 3]).dim(), 1);
    }

    #[test]
    fn non_commuting_rejected() {
        let a = m(&[&[1, 0], &[0, -1]]);
        let b = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(commuting_multigrading(&[a, b], 0).unwrap_err(), MhsError::NotCommuting);
    }

    #[test]
    fn non_integer_spectrum_rejected() {
        let a = m(&[&[0, 1], &[0, 0]]);
        assert_eq!(commuting_multigrading(&[a], 0).unwrap_err(), MhsError::NonIntegerEigenvalue);
    }

    #[test]
    fn increments() {
        let a = m(&[&[1, 0], &[0, -1]]);
        let inc = yhat_increments(&[a.clone(), a.clone()]);
        assert_eq!(inc[0], a);
        assert!(inc[1].is_zero());
    }

    #[test]
    fn joint_kernel_projection() {
        let y = m(&[&[1, 0], &[0, -1]]);
        let lower = m(&[&[0, 0], &[1, 0]]);
        assert!(project_to_joint_kernel(&lower, &[y.clone()]).unwrap().is_zero());
        let op = m(&[&[3, 5], &[7, 11]]);
        let p = project_to_joint_kernel(&op, &[y.clone()]).unwrap();
        assert_eq!(p, m(&[&[3, 0], &[0, 11]]));
        assert_eq!(project_to_joint_kernel(&p, &[y.clone()]).unwrap(), p);
        let comps = ad_weight_components(&op, &[y]).unwrap();
        let total = comps.values().fold(ExactMatrix::zeros(2, 2), |acc, c| &acc + c);
        assert_eq!(total, op);
        assert_eq!(comps.get(&vec![2]).unwrap(), &m(&[&[0, 5], &[0, 0]]));
    }
}
