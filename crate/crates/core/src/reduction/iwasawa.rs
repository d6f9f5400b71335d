use nalgebra::DMatrix;
use serde::Serialize;

use super::{GroupElement, ReductionError};

/// `g = n · a · m` with `n` upper unipotent, `a` positive diagonal and `m`
/// orthogonal, block by block.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HorosphericalCoords {
    #[serde(serialize_with = "ser_matrix")]
    pub n_part: DMatrix<f64>,
    pub a_part: Vec<f64>,
    #[serde(serialize_with = "ser_matrix")]
    pub m_part: DMatrix<f64>,
    pub blocks: Vec<usize>,
}

fn ser_matrix<S: serde::Serializer>(m: &DMatrix<f64>, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.nrows()))?;
    for r in 0..m.nrows() {
        let row: Vec<f64> = (0..m.ncols()).map(|c| m[(r, c)]).collect();
        seq.serialize_element(&row)?;
    }
    seq.end()
}

impl HorosphericalCoords {
    pub fn reconstruct(&self) -> DMatrix<f64> {
        &self.n_part * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.a_part.clone())) * &self.m_part
    }

    /// Simple-root values `a_i / a_{i+1}` within each block.
    pub fn simple_roots(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut off = 0;
        for &b in &self.blocks {
            for i in off..off + b - 1 {
                out.push(self.a_part[i] / self.a_part[i + 1]);
            }
            off += b;
        }
        out
    }

    /// Largest `|n_ij|` above the diagonal.
    pub fn max_unipotent_entry(&self) -> f64 {
        let n = self.n_part.nrows();
        let mut best: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                best = best.max(self.n_part[(i, j)].abs());
            }
        }
        best
    }
}

/// Iwasawa decomposition relative to the upper-triangular minimal parabolic,
/// by Gram–Schmidt on the rows starting from the last one.
pub fn iwasawa(g: &GroupElement) -> Result<HorosphericalCoords, ReductionError> {
    let n = g.dim();
    let mut n_part = DMatrix::<f64>::identity(n, n);
    let mut a_part = vec![0.0; n];
    let mut m_part = DMatrix::<f64>::zeros(n, n);
    let mut off = 0;
    for &size in g.blocks() {
        let m = g.matrix();
        for i in (off..off + size).rev() {
            let mut r = m.row(i).clone_owned();
            for j in i + 1..off + size {
                let c = r.dot(&m_part.row(j));
                n_part[(i, j)] = c;
                r -= m_part.row(j) * c;
            }
            let norm = r.norm();
            if norm < 1e-12 {
                return Err(ReductionError::NearSingular);
            }
            a_part[i] = norm;
            m_part.set_row(i, &(r / norm));
        }
        // n_ij currently holds n_ij * a_j
        for i in off..off + size {
            for j in i + 1..off + size {
                n_part[(i, j)] /= a_part[j];
            }
        }
        off += size;
    }
    Ok(HorosphericalCoords {
        n_part,
        a_part,
        m_part,
        blocks: g.blocks().to_vec(),
    })
}

/// Chart coordinates `a^{-α_i} = a_{i+1}/a_i` over the simple roots; they tend
/// to 0 as `a` goes to infinity in the positive chamber.
pub fn ep_chart(a_part: &[f64], blocks: &[usize]) -> Result<Vec<f64>, ReductionError> {
    if a_part.iter().any(|&a| !(a > 0.0)) {
        return Err(ReductionError::NonPositiveHeight);
    }
    if blocks.iter().sum::<usize>() != a_part.len() {
        return Err(ReductionError::BlockMismatch);
    }
    let mut out = Vec::new();
    let mut off = 0;
    for &b in blocks {
        for i in off..off + b - 1 {
            out.push(a_part[i + 1] / a_part[i]);
        }
        off += b;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn el(n: usize, v: &[f64]) -> GroupElement {
        GroupElement::new(DMatrix::from_row_slice(n, n, v)).unwrap()
    }

    #[test]
    fn identity_and_diagonal() {
        let h = iwasawa(&el(2, &[1.0, 0.0, 0.0, 1.0])).unwrap();
        assert_eq!(h.a_part, vec![1.0, 1.0]);
        assert_eq!(h.n_part, DMatrix::identity(2, 2));
        let h = iwasawa(&el(2, &[2.0, 0.0, 0.0, 0.5])).unwrap();
        assert_eq!(h.a_part, vec![2.0, 0.5]);
        assert_eq!(h.m_part, DMatrix::identity(2, 2));
    }

    #[test]
    fn matches_qr_of_inverse() {
        // g = n a m  ⇔  g⁻¹ = mᵀ (a⁻¹ n⁻¹): a QR factorisation with upper-triangular factor
        let g = el(2, &[1.0, 1.0, 1.0, 2.0]);
        let h = iwasawa(&g).unwrap();
        let inv = g.matrix().clone().try_inverse().unwrap();
        let qr = inv.qr();
        let r = qr.r();
        for i in 0..2 {
            assert_abs_diff_eq!(r[(i, i)].abs(), 1.0 / h.a_part[i], epsilon = 1e-12);
        }
        assert_abs_diff_eq!(h.a_part[1], 5f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(h.a_part[0], 1.0 / 5f64.sqrt(), epsilon = 1e-12);
        assert!((h.reconstruct() - g.matrix()).amax() < 1e-12);
    }

    #[test]
    fn chart_values() {
        assert_eq!(ep_chart(&[2.0, 0.5], &[2]).unwrap(), vec![0.25]);
        assert_eq!(ep_chart(&[1.0, 1.0], &[2]).unwrap(), vec![1.0]);
        assert_eq!(ep_chart(&[4.0, 1.0, 0.25], &[3]).unwrap(), vec![0.25, 0.25]);
        assert!(ep_chart(&[0.0, 1.0], &[2]).is_err());
    }
}
