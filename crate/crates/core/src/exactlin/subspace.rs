use super::matrix::{conj_vector, dot, is_zero_vector};
use super::{ExactError, ExactMatrix, ExactScalar, ExactVector};

/// A linear subspace of `K^n` (`K = Q(i)`), stored as the nonzero rows of a
/// reduced row echelon matrix. The representation is canonical, so derived
/// equality is subspace equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<ExactVector>,
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(dim {}/{}; ", self.dim(), self.ambient)?;
        for (k, b) in self.basis.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{b:?}")?;
        }
        write!(f, ")")
    }
}

/// Column span of `m`: its rank and canonical echelon basis.
pub fn echelonize(m: &ExactMatrix) -> (usize, Subspace) {
    let s = Subspace::span(m.rows(), &m.columns());
    (s.dim(), s)
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self {
            ambient,
            basis: (0..ambient).map(|i| super::unit_vector(ambient, i)).collect(),
        }
    }

    pub fn span(ambient: usize, vectors: &[ExactVector]) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        for v in vectors {
            assert_eq!(v.len(), ambient, "vector length does not match ambient dimension");
        }
        let m = ExactMatrix::from_rows(vectors.to_vec()).expect("rows of equal length");
        let rr = m.rref();
        let basis = (0..rr.pivots.len()).map(|r| rr.matrix.row(r)).collect();
        Self { ambient, basis }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[ExactVector] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    fn check(&self, other: &Self) -> Result<(), ExactError> {
        if self.ambient != other.ambient {
            return Err(ExactError::DimensionMismatch {
                expected: self.ambient,
                found: other.ambient,
            });
        }
        Ok(())
    }

    /// Rows `w` with `w·v = 0` for all `v` in the subspace; `v ∈ S` iff `A v = 0`.
    pub fn annihilator(&self) -> ExactMatrix {
        let n = self.ambient;
        if self.basis.is_empty() {
            return ExactMatrix::identity(n);
        }
        let r = ExactMatrix::from_rows(self.basis.clone()).expect("basis rows");
        let ann = r.kernel();
        if ann.is_empty() {
            return ExactMatrix::zeros(0, n);
        }
        ExactMatrix::from_rows(ann).expect("kernel rows")
    }

    pub fn contains(&self, v: &[ExactScalar]) -> bool {
        assert_eq!(v.len(), self.ambient);
        if is_zero_vector(v) {
            return true;
        }
        if self.is_full() {
            return true;
        }
        let ann = self.annihilator();
        is_zero_vector(&ann.apply(v))
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        if self.ambient != other.ambient {
            return false;
        }
        if self.is_full() || other.is_zero() {
            return true;
        }
        let ann = self.annihilator();
        other.basis.iter().all(|b| is_zero_vector(&ann.apply(b)))
    }

    pub fn sum(&self, other: &Self) -> Result<Self, ExactError> {
        self.check(other)?;
        if other.is_zero() || self.is_full() {
            return Ok(self.clone());
        }
        if self.is_zero() || other.is_full() {
            return Ok(other.clone());
        }
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Ok(Self::span(self.ambient, &all))
    }

    pub fn intersect(&self, other: &Self) -> Result<Self, ExactError> {
        self.check(other)?;
        if self.is_zero() || other.is_full() {
            return Ok(self.clone());
        }
        if other.is_zero() || self.is_full() {
            return Ok(other.clone());
        }
        // v = Σ c_k s_k with A_other v = 0
        let ann = other.annihilator();
        let images: Vec<ExactVector> = self.basis.iter().map(|b| ann.apply(b)).collect();
        let sys = ExactMatrix::from_columns(ann.rows(), &images);
        let coeffs = sys.kernel();
        let vectors: Vec<ExactVector> = coeffs.iter().map(|c| self.combine(c)).collect();
        Ok(Self::span(self.ambient, &vectors))
    }

    /// Linear combination of the basis with the given coefficients.
    pub fn combine(&self, coeffs: &[ExactScalar]) -> ExactVector {
        let mut v = vec![ExactScalar::zero(); self.ambient];
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(b) {
                *x += &(c * y);
            }
        }
        v
    }

    /// Image `M·S`.
    pub fn image(&self, m: &ExactMatrix) -> Self {
        assert_eq!(m.cols(), self.ambient);
        let imgs: Vec<ExactVector> = self.basis.iter().map(|b| m.apply(b)).collect();
        Self::span(m.rows(), &imgs)
    }

    /// Preimage `{v : M v ∈ S}`.
    pub fn preimage(&self, m: &ExactMatrix) -> Self {
        assert_eq!(m.rows(), self.ambient);
        if self.is_full() {
            return Self::full(m.cols());
        }
        let ann = self.annihilator();
        let k = (&ann * m).kernel();
        Self::span(m.cols(), &k)
    }

    pub fn conj(&self) -> Self {
        let v: Vec<ExactVector> = self.basis.iter().map(|b| conj_vector(b)).collect();
        Self::span(self.ambient, &v)
    }

    /// Whether the subspace is stable under complex conjugation.
    pub fn is_real(&self) -> bool {
        self.basis.iter().all(|b| b.iter().all(ExactScalar::is_real))
    }

    /// Vectors of `sup` completing this subspace's basis to a basis of `sup`.
    /// Requires `self ⊂ sup`.
    pub fn complement_in(&self, sup: &Self) -> Vec<ExactVector> {
        let mut acc = self.clone();
        let mut out = Vec::new();
        for b in &sup.basis {
            if !acc.contains(b) {
                out.push(b.clone());
                acc = acc.sum(&Self::span(self.ambient, &[b.clone()])).expect("same ambient");
            }
        }
        out
    }

    /// Coordinates of `v` in the given (independent) family, if `v` lies in its span.
    pub fn coordinates(family: &[ExactVector], v: &[ExactScalar]) -> Option<ExactVector> {
        let n = v.len();
        if family.is_empty() {
            return if is_zero_vector(v) { Some(Vec::new()) } else { None };
        }
        ExactMatrix::from_columns(n, family).solve(v)
    }

    pub fn dot_all_zero(&self, other: &Self) -> bool {
        self.basis
            .iter()
            .all(|a| other.basis.iter().all(|b| dot(a, b).is_zero()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> ExactVector {
        xs.iter().map(|&x| ExactScalar::from_int(x)).collect()
    }

    #[test]
    fn echelonize_examples() {
        let (r, s) = echelonize(&ExactMatrix::identity(3));
        assert_eq!(r, 3);
        assert_eq!(s, Subspace::full(3));
        let (r, s) = echelonize(&ExactMatrix::zeros(2, 2));
        assert_eq!(r, 0);
        assert!(s.is_zero());
        let (r, s) = echelonize(&ExactMatrix::from_ints(&[[1, 2], [2, 4]]));
        assert_eq!(r, 1);
        assert_eq!(s.basis(), &[v(&[1, 2])]);
    }

    #[test]
    fn canonical_representation() {
        let a = Subspace::span(3, &[v(&[1, 1, 0]), v(&[0, 1, 1])]);
        let b = Subspace::span(3, &[v(&[1, 2, 1]), v(&[2, 1, -1])]);
        assert_eq!(a, b);
    }

    #[test]
    fn intersections() {
        let a = Subspace::span(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::span(3, &[v(&[0, 1, 0]), v(&[0, 0, 1])]);
        assert_eq!(a.intersect(&b).unwrap(), Subspace::span(3, &[v(&[0, 1, 0])]));
        assert_eq!(a.intersect(&a).unwrap(), a);
        let l1 = Subspace::span(2, &[v(&[1, 1])]);
        let l2 = Subspace::span(2, &[v(&[1, -1])]);
        assert!(l1.intersect(&l2).unwrap().is_zero());
        assert!(a.intersect(&Subspace::zero(2)).is_err());
    }

    #[test]
    fn image_preimage() {
        let n = ExactMatrix::from_ints(&[[0, 1], [0, 0]]);
        let line = Subspace::span(2, &[v(&[1, 0])]);
        assert_eq!(Subspace::full(2).image(&n), line);
        assert_eq!(Subspace::zero(2).preimage(&n), line);
        assert_eq!(line.preimage(&n), Subspace::full(2));
    }
}
