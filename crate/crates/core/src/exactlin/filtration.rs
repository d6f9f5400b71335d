use super::{ExactError, ExactMatrix, ExactScalar, ExactVector, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `W_l ⊂ W_{l+1}` (weight filtrations).
    Increasing,
    /// `F^p ⊃ F^{p+1}` (Hodge filtrations).
    Decreasing,
}

/// A finite filtration of `K^n` by subspaces, indexed by integers.
///
/// Only the range where the filtration actually moves is stored:
/// for increasing filtrations `spaces[0] = W_lo ≠ 0` and the last entry is
/// the first index with `W = V`; for decreasing filtrations `spaces[0] = F^lo = V`
/// is the last index equal to `V` and the last entry is the last nonzero one.
/// The stored form is canonical, so derived equality is filtration equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Filtration {
    dim: usize,
    direction: Direction,
    lo: i64,
    spaces: Vec<Subspace>,
}

impl std::fmt::Debug for Filtration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = match self.direction {
            Direction::Increasing => "W",
            Direction::Decreasing => "F",
        };
        write!(f, "{tag}[")?;
        for (k, s) in self.spaces.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}: {:?}", self.lo + k as i64, s)?;
        }
        write!(f, "]")
    }
}

impl Filtration {
    /// Filtration with a single jump at `weight`.
    pub fn trivial(dim: usize, weight: i64, direction: Direction) -> Self {
        Self::from_steps(dim, direction, vec![(weight, Subspace::full(dim))]).expect("trivial filtration")
    }

    /// Builds a filtration from listed steps.
    ///
    /// Increasing: `W_l` is the listed subspace of the largest weight `≤ l`
    /// (zero below the first), and the last step must be the full space.
    /// Decreasing: `F^p` is the listed subspace of the smallest weight `≥ p`
    /// (zero above the last), and the first step must be the full space.
    pub fn from_steps(
        dim: usize,
        direction: Direction,
        mut steps: Vec<(i64, Subspace)>,
    ) -> Result<Self, ExactError> {
        steps.sort_by_key(|(w, _)| *w);
        if steps.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(ExactError::InvalidFiltration("repeated weight".into()));
        }
        if steps.iter().any(|(_, s)| s.ambient() != dim) {
            return Err(ExactError::InvalidFiltration("ambient dimension mismatch".into()));
        }
        if dim == 0 {
            return Ok(Self {
                dim,
                direction,
                lo: 0,
                spaces: Vec::new(),
            });
        }
        if steps.is_empty() {
            return Err(ExactError::InvalidFiltration("no steps".into()));
        }
        for w in steps.windows(2) {
            let nested = match direction {
                Direction::Increasing => w[1].1.contains_subspace(&w[0].1),
                Direction::Decreasing => w[0].1.contains_subspace(&w[1].1),
            };
            if !nested {
                return Err(ExactError::InvalidFiltration(format!(
                    "steps at weights {} and {} are not nested",
                    w[0].0, w[1].0
                )));
            }
        }
        let (first, last) = (&steps[0], &steps[steps.len() - 1]);
        match direction {
            Direction::Increasing if !last.1.is_full() => {
                return Err(ExactError::InvalidFiltration("top step is not the full space".into()))
            }
            Direction::Decreasing if !first.1.is_full() => {
                return Err(ExactError::InvalidFiltration("bottom step is not the full space".into()))
            }
            _ => {}
        }
        let lookup = |l: i64| -> Subspace {
            match direction {
                Direction::Increasing => steps
                    .iter()
                    .rev()
                    .find(|(w, _)| *w <= l)
                    .map(|(_, s)| s.clone())
                    .unwrap_or_else(|| Subspace::zero(dim)),
                Direction::Decreasing => steps
                    .iter()
                    .find(|(w, _)| *w >= l)
                    .map(|(_, s)| s.clone())
                    .unwrap_or_else(|| Subspace::zero(dim)),
            }
        };
        let (a, b) = (first.0, last.0);
        let (lo, hi) = match direction {
            Direction::Increasing => {
                let lo = (a..=b).find(|&l| !lookup(l).is_zero()).expect("top is full");
                let hi = (a..=b).find(|&l| lookup(l).is_full()).expect("top is full");
                (lo, hi)
            }
            Direction::Decreasing => {
                let lo = (a..=b).rev().find(|&l| lookup(l).is_full()).expect("bottom is full");
                let hi = (a..=b).rev().find(|&l| !lookup(l).is_zero()).expect("bottom is full");
                (lo, hi)
            }
        };
        Ok(Self {
            dim,
            direction,
            lo,
            spaces: (lo..=hi).map(lookup).collect(),
        })
    }

    /// Increasing filtration `W_l = Σ_{l' ≤ l} G_{l'}` from a grading.
    pub fn from_grading(dim: usize, pieces: &[(i64, Subspace)]) -> Result<Self, ExactError> {
        Self::graded(dim, pieces, Direction::Increasing)
    }

    /// Builds an increasing (`Σ_{l' ≤ l}`) or decreasing (`Σ_{l' ≥ l}`)
    /// filtration out of graded pieces.
    pub fn graded(dim: usize, pieces: &[(i64, Subspace)], direction: Direction) -> Result<Self, ExactError> {
        let mut weights: Vec<i64> = pieces.iter().map(|(w, _)| *w).collect();
        weights.sort_unstable();
        weights.dedup();
        let mut steps = Vec::new();
        for &w in &weights {
            let mut s = Subspace::zero(dim);
            for (l, p) in pieces {
                let take = match direction {
                    Direction::Increasing => *l <= w,
                    Direction::Decreasing => *l >= w,
                };
                if take {
                    s = s.sum(p)?;
                }
            }
            steps.push((w, s));
        }
        if dim > 0 && weights.is_empty() {
            return Err(ExactError::InvalidFiltration("no graded pieces".into()));
        }
        Self::from_steps(dim, direction, steps)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Stored index range `[lo, hi]`; outside of it the filtration is constant.
    pub fn range(&self) -> (i64, i64) {
        (self.lo, self.lo + self.spaces.len() as i64 - 1)
    }

    pub fn get(&self, l: i64) -> Subspace {
        let (lo, hi) = self.range();
        if self.dim == 0 {
            return Subspace::zero(0);
        }
        match self.direction {
            Direction::Increasing if l < lo => Subspace::zero(self.dim),
            Direction::Increasing if l > hi => Subspace::full(self.dim),
            Direction::Decreasing if l < lo => Subspace::full(self.dim),
            Direction::Decreasing if l > hi => Subspace::zero(self.dim),
            _ => self.spaces[(l - lo) as usize].clone(),
        }
    }

    /// `(weight, subspace)` pairs over the stored range.
    pub fn steps(&self) -> Vec<(i64, Subspace)> {
        self.spaces
            .iter()
            .enumerate()
            .map(|(k, s)| (self.lo + k as i64, s.clone()))
            .collect()
    }

    /// `dim Gr_l`: `W_l / W_{l-1}` or `F^l / F^{l+1}`.
    pub fn graded_dim(&self, l: i64) -> usize {
        match self.direction {
            Direction::Increasing => self.get(l).dim() - self.get(l - 1).dim(),
            Direction::Decreasing => self.get(l).dim() - self.get(l + 1).dim(),
        }
    }

    /// Indices with nonzero graded piece.
    pub fn jumps(&self) -> Vec<i64> {
        let (lo, hi) = self.range();
        (lo..=hi).filter(|&l| self.graded_dim(l) > 0).collect()
    }

    /// `W[k]_l = W_{l+k}` (increasing) or `F[k]^p = F^{p+k}` (decreasing).
    pub fn shifted(&self, k: i64) -> Self {
        Self {
            lo: self.lo - k,
            ..self.clone()
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            spaces: self.spaces.iter().map(Subspace::conj).collect(),
            ..self.clone()
        }
    }

    pub fn is_real(&self) -> bool {
        self.spaces.iter().all(Subspace::is_real)
    }

    /// Image of every step under an invertible map.
    pub fn transform(&self, g: &ExactMatrix) -> Self {
        Self {
            spaces: self.spaces.iter().map(|s| s.image(g)).collect(),
            ..self.clone()
        }
    }

    /// Whether `X·S_l ⊂ S_{l+shift}` for every index `l`.
    pub fn shifted_by(&self, x: &ExactMatrix, shift: i64) -> bool {
        let (lo, hi) = self.range();
        (lo - 1..=hi + 1).all(|l| self.get(l + shift).contains_subspace(&self.get(l).image(x)))
    }

    /// Induced filtration `(S ∩ A + B) / B` on a subquotient `A / B`,
    /// returned as subspaces of the ambient space containing `B`.
    pub fn induced_on(&self, a: &Subspace, b: &Subspace, l: i64) -> Subspace {
        self.get(l).intersect(a).and_then(|s| s.sum(b)).expect("same ambient")
    }
}

/// `W_m(End V) = {X : X·W_l ⊂ W_{l+m} ∀ l}` as a filtration of the
/// `n²`-dimensional space of row-major flattened matrices.
pub fn induced_filtration_on_end(w: &Filtration) -> Filtration {
    assert_eq!(w.direction(), Direction::Increasing, "induced filtration needs an increasing filtration");
    let n = w.dim();
    if n == 0 {
        return Filtration::trivial(0, 0, Direction::Increasing);
    }
    let (lo, hi) = w.range();
    let span = hi - lo;
    let steps = (-span - 1..=span).map(|m| (m, end_step(w, m, n))).collect();
    Filtration::from_steps(n * n, Direction::Increasing, steps).expect("nested by construction")
}

fn end_step(w: &Filtration, m: i64, n: usize) -> Subspace {
    let (lo, hi) = w.range();
    let mut rows: Vec<ExactVector> = Vec::new();
    for l in lo..=hi {
        let target = w.get(l + m);
        if target.is_full() {
            continue;
        }
        let ann = target.annihilator();
        for b in w.get(l).basis() {
            for r in 0..ann.rows() {
                // coefficient of X_{ij} in (A X b)_r is A_{ri} b_j
                let mut row = vec![ExactScalar::zero(); n * n];
                for i in 0..n {
                    let a = ann.get(r, i);
                    if a.is_zero() {
                        continue;
                    }
                    for (j, bj) in b.iter().enumerate() {
                        if !bj.is_zero() {
                            row[i * n + j] = a * bj;
                        }
                    }
                }
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return Subspace::full(n * n);
    }
    let k = ExactMatrix::from_rows(rows).expect("constraint rows").kernel();
    Subspace::span(n * n, &k)
}

/// Weight of a single operator in `W(End V)`: the least `m` with `X ∈ W_m`.
pub fn operator_weight(w: &Filtration, x: &ExactMatrix) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let (lo, hi) = w.range();
    let span = hi - lo;
    (-span..=span).find(|&m| w.shifted_by(x, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> ExactVector {
        xs.iter().map(|&x| ExactScalar::from_int(x)).collect()
    }

    #[test]
    fn canonical_trimming() {
        let a = Filtration::from_steps(
            2,
            Direction::Increasing,
            vec![(-5, Subspace::zero(2)), (0, Subspace::span(2, &[v(&[1, 0])])), (3, Subspace::full(2)), (7, Subspace::full(2))],
        )
        .unwrap();
        assert_eq!(a.range(), (0, 3));
        assert_eq!(a.jumps(), vec![0, 3]);
        assert_eq!(a.get(2), Subspace::span(2, &[v(&[1, 0])]));
        assert_eq!(a.get(100), Subspace::full(2));
        let f = Filtration::from_steps(
            2,
            Direction::Decreasing,
            vec![(0, Subspace::full(2)), (1, Subspace::span(2, &[v(&[0, 1])]))],
        )
        .unwrap();
        assert_eq!(f.get(-3), Subspace::full(2));
        assert_eq!(f.get(2), Subspace::zero(2));
        assert_eq!(f.jumps(), vec![0, 1]);
    }

    #[test]
    fn rejects_non_nested() {
        let r = Filtration::from_steps(
            2,
            Direction::Increasing,
            vec![(0, Subspace::span(2, &[v(&[1, 0])])), (1, Subspace::span(2, &[v(&[0, 1])])), (2, Subspace::full(2))],
        );
        assert!(r.is_err());
    }

    #[test]
    fn end_filtration_trivial() {
        let w = Filtration::trivial(3, 4, Direction::Increasing);
        let e = induced_filtration_on_end(&w);
        assert_eq!(e, Filtration::trivial(9, 0, Direction::Increasing));
    }

    #[test]
    fn end_filtration_two_step() {
        // W_{-1} = span(e1) ⊂ W_1 = V
        let w = Filtration::from_steps(
            2,
            Direction::Increasing,
            vec![(-1, Subspace::span(2, &[v(&[1, 0])])), (1, Subspace::full(2))],
        )
        .unwrap();
        let e = induced_filtration_on_end(&w);
        let nil = ExactMatrix::unit(2, 0, 1); // e2 -> e1
        assert!(e.get(-2).contains(&nil.flatten()));
        assert!(!e.get(-3).contains(&nil.flatten()));
        assert_eq!(operator_weight(&w, &nil), Some(-2));
        let id = ExactMatrix::identity(2);
        assert!(e.get(0).contains(&id.flatten()));
        assert!(!e.get(-1).contains(&id.flatten()));
        assert_eq!(operator_weight(&w, &id), Some(0));
        assert_eq!(operator_weight(&w, &ExactMatrix::unit(2, 1, 0)), Some(2));
    }
}
