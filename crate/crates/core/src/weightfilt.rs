//! Monodromy weight filtrations of nilpotent operators, relative weight
//! filtrations, and cone-constancy validation.
//!
//! Convention: "centered at `k`" means the filtration jumps symmetrically
//! about `k`, i.e. `N^l : Gr_{k+l} → Gr_{k-l}` is an isomorphism. Shifted
//! notations like `W(C)[-k]` are expressed through this center parameter.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactlin::{Direction, ExactError, ExactMatrix, ExactScalar, ExactVector, Filtration, Subspace};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WeightError {
    #[error("operator is not nilpotent")]
    NotNilpotent,
    #[error("operator is not square")]
    NotSquare,
    #[error("operator does not preserve the given filtration")]
    NotPreserved,
    #[error("constructed filtration violates its defining axioms: {0}")]
    AxiomViolation(String),
    #[error("cone has no generators")]
    EmptyCone,
    #[error("cone coefficients must be strictly positive rationals")]
    NonPositiveCoefficient,
    #[error("cone sample {0} is not nilpotent")]
    SampleNotNilpotent(usize),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// A nilpotent endomorphism together with its nilpotency index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotentOperator {
    matrix: ExactMatrix,
    index: u32,
}

impl NilpotentOperator {
    pub fn new(matrix: ExactMatrix) -> Result<Self, WeightError> {
        if !matrix.is_square() {
            return Err(WeightError::NotSquare);
        }
        let index = matrix.nilpotency_index().ok_or(WeightError::NotNilpotent)?;
        Ok(Self { matrix, index })
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.matrix
    }

    /// Smallest `m` with `N^m = 0`.
    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn scaled(&self, s: &ExactScalar) -> Self {
        let matrix = self.matrix.scale(s);
        let index = if s.is_zero() { u32::from(self.dim() > 0) } else { self.index };
        Self { matrix, index }
    }
}

/// The monodromy weight filtration `W(N)` centered at `center`, from
/// `W_{k+l} = Σ_{i ≥ max(0,-l)} ker N^{l+i+1} ∩ im N^i`, with both
/// defining axioms checked on the result.
pub fn monodromy_filtration(n: &NilpotentOperator, center: i64) -> Result<Filtration, WeightError> {
    let dim = n.dim();
    let m = n.index() as i64;
    if dim == 0 {
        return Ok(Filtration::trivial(0, center, Direction::Increasing));
    }
    if m <= 1 {
        return Ok(Filtration::trivial(dim, center, Direction::Increasing));
    }
    let powers: Vec<ExactMatrix> = (0..=2 * m as u32).map(|e| n.matrix().pow(e)).collect();
    let kernels: Vec<Subspace> = powers.iter().map(|p| Subspace::span(dim, &p.kernel())).collect();
    let images: Vec<Subspace> = powers.iter().map(|p| Subspace::full(dim).image(p)).collect();
    let mut steps = Vec::new();
    for l in -m..m {
        let mut w = Subspace::zero(dim);
        for i in 0.max(-l)..m {
            let k = (l + i + 1) as usize;
            let piece = kernels[k.min(kernels.len() - 1)].intersect(&images[i as usize])?;
            w = w.sum(&piece)?;
        }
        steps.push((center + l, w));
    }
    let w = Filtration::from_steps(dim, Direction::Increasing, steps)?;
    if let Err(why) = monodromy_axioms(n.matrix(), &w, center) {
        return Err(WeightError::AxiomViolation(why));
    }
    Ok(w)
}

/// Checks `N W_l ⊂ W_{l-2}` and that `N^l : Gr_{k+l} → Gr_{k-l}` is an
/// isomorphism for every `l ≥ 1`.
pub fn monodromy_axioms(n: &ExactMatrix, w: &Filtration, center: i64) -> Result<(), String> {
    if !w.shifted_by(n, -2) {
        return Err("N does not lower the filtration by 2".into());
    }
    graded_isomorphisms(n, w, &Subspace::full(w.dim()), &Subspace::zero(w.dim()), center)
}

/// On the subquotient `A/B` (with `N A ⊂ A`, `N B ⊂ B`), checks that
/// `N^l` induces isomorphisms `Gr^M_{k+l} → Gr^M_{k-l}` of the induced
/// filtration `M_j ∩ A + B`.
fn graded_isomorphisms(n: &ExactMatrix, w: &Filtration, a: &Subspace, b: &Subspace, center: i64) -> Result<(), String> {
    let (lo, hi) = w.range();
    let reach = (hi - center).max(center - lo) + 1;
    let induced = |j: i64| w.induced_on(a, b, j);
    let gr = |j: i64| induced(j).dim() - induced(j - 1).dim();
    let mut np = ExactMatrix::identity(w.dim());
    for l in 1..=reach {
        np = &np * n;
        let top = induced(center + l);
        let below = induced(center - l - 1);
        let img = top.image(&np).sum(&below).map_err(|e| e.to_string())?;
        let rank = img.dim() - below.dim();
        if gr(center + l) != gr(center - l) {
            return Err(format!("dim Gr_{} != dim Gr_{}", center + l, center - l));
        }
        if rank != gr(center + l) {
            return Err(format!("N^{l} is not an isomorphism Gr_{} -> Gr_{}", center + l, center - l));
        }
        if !induced(center - l).contains_subspace(&top.image(&np)) {
            return Err(format!("N^{l} does not map W_{} into W_{}", center + l, center - l));
        }
    }
    Ok(())
}

/// Outcome of the relative weight filtration construction.
#[derive(Clone, Debug, PartialEq)]
pub enum Relative {
    Exists(Filtration),
    NotExists(String),
}

impl Relative {
    pub fn filtration(&self) -> Option<&Filtration> {
        match self {
            Relative::Exists(f) => Some(f),
            Relative::NotExists(_) => None,
        }
    }
}

/// Jordan strings of a nilpotent matrix: `(top, length)` pairs such that
/// `{A^i top : i < length}` over all strings is a basis.
pub fn jordan_strings(a: &ExactMatrix) -> Result<Vec<(ExactVector, u32)>, WeightError> {
    let d = a.rows();
    let index = a.nilpotency_index().ok_or(WeightError::NotNilpotent)?;
    let kernels: Vec<Subspace> = (0..=index + 1)
        .map(|e| Subspace::span(d, &a.pow(e).kernel()))
        .collect();
    let mut out = Vec::new();
    for len in (1..=index).rev() {
        let l = len as usize;
        let lower = kernels[l - 1].sum(&kernels[l + 1].image(a))?;
        for top in lower.complement_in(&kernels[l]) {
            out.push((top, len));
        }
    }
    Ok(out)
}

/// Relative weight filtration `M` of `N` with respect to `w`: `N M_j ⊂ M_{j-2}`
/// and `M` induces on each `Gr^w_l` the monodromy filtration of `N` centered at `l`.
///
/// Built bottom-up along the jumps of `w`: each graded piece is split into
/// Jordan strings of the induced operator, and each string top is lifted so
/// that `N^{len}` of the lift lands in the already-constructed filtration at
/// the right weight. When no such lift exists the filtration does not exist.
pub fn relative_weight_filtration(n: &NilpotentOperator, w: &Filtration) -> Result<Relative, WeightError> {
    let dim = n.dim();
    if w.direction() != Direction::Increasing || w.dim() != dim {
        return Err(WeightError::NotPreserved);
    }
    if !w.shifted_by(n.matrix(), 0) {
        return Err(WeightError::NotPreserved);
    }
    if dim == 0 {
        return Ok(Relative::Exists(Filtration::trivial(0, 0, Direction::Increasing)));
    }
    let nm = n.matrix();
    let mut adapted: Vec<(ExactVector, i64)> = Vec::new();
    let mut lower = Subspace::zero(dim);
    for l in w.jumps() {
        let upper = w.get(l);
        let comp = lower.complement_in(&upper);
        let frame: Vec<ExactVector> = lower.basis().iter().cloned().chain(comp.iter().cloned()).collect();
        let k0 = lower.dim();
        let d = comp.len();
        // induced operator on upper/lower in complement coordinates
        let mut bar = ExactMatrix::zeros(d, d);
        for (j, c) in comp.iter().enumerate() {
            let coords = Subspace::coordinates(&frame, &nm.apply(c)).ok_or(WeightError::NotPreserved)?;
            for i in 0..d {
                bar.set(i, j, coords[k0 + i].clone());
            }
        }
        for (top, len) in jordan_strings(&bar)? {
            let mut lift = vec![ExactScalar::zero(); dim];
            for (t, c) in top.iter().zip(&comp) {
                if t.is_zero() {
                    continue;
                }
                for (x, y) in lift.iter_mut().zip(c) {
                    *x += &(t * y);
                }
            }
            let target_weight = l - len as i64 - 1;
            let target = span_upto(dim, &adapted, target_weight);
            let np = nm.pow(len);
            let lifted = match correct_lift(&lift, &np, lower.basis(), &target) {
                Some(v) => v,
                None => {
                    return Ok(Relative::NotExists(format!(
                        "no lift of a length-{len} string of Gr_{l} with N^{len} in M_{target_weight}"
                    )))
                }
            };
            let mut v = lifted;
            for i in 0..len {
                adapted.push((v.clone(), l + len as i64 - 1 - 2 * i as i64));
                v = nm.apply(&v);
            }
        }
        lower = upper;
    }
    let pieces: Vec<(i64, Subspace)> = {
        let mut weights: Vec<i64> = adapted.iter().map(|(_, w)| *w).collect();
        weights.sort_unstable();
        weights.dedup();
        weights
            .into_iter()
            .map(|wt| {
                let vs: Vec<ExactVector> = adapted.iter().filter(|(_, x)| *x == wt).map(|(v, _)| v.clone()).collect();
                (wt, Subspace::span(dim, &vs))
            })
            .collect()
    };
    let m = Filtration::from_grading(dim, &pieces)?;
    match relative_axioms(nm, w, &m) {
        Ok(()) => Ok(Relative::Exists(m)),
        Err(why) => Ok(Relative::NotExists(why)),
    }
}

fn span_upto(dim: usize, adapted: &[(ExactVector, i64)], weight: i64) -> Subspace {
    let vs: Vec<ExactVector> = adapted.iter().filter(|(_, w)| *w <= weight).map(|(v, _)| v.clone()).collect();
    Subspace::span(dim, &vs)
}

/// Finds `u ∈ span(lower)` with `P (v + u) ∈ target`.
fn correct_lift(v: &[ExactScalar], p: &ExactMatrix, lower: &[ExactVector], target: &Subspace) -> Option<ExactVector> {
    let ann = target.annihilator();
    let rhs: ExactVector = ann.apply(&p.apply(v)).iter().map(|x| -x).collect();
    if ann.rows() == 0 {
        return Some(v.to_vec());
    }
    if lower.is_empty() {
        return rhs.iter().all(ExactScalar::is_zero).then(|| v.to_vec());
    }
    let cols: Vec<ExactVector> = lower.iter().map(|u| ann.apply(&p.apply(u))).collect();
    let sys = ExactMatrix::from_columns(ann.rows(), &cols);
    let c = sys.solve(&rhs)?;
    let mut out = v.to_vec();
    for (ck, u) in c.iter().zip(lower) {
        if ck.is_zero() {
            continue;
        }
        for (x, y) in out.iter_mut().zip(u) {
            *x += &(ck * y);
        }
    }
    Some(out)
}

/// Checks the two defining properties of the relative weight filtration.
pub fn relative_axioms(n: &ExactMatrix, w: &Filtration, m: &Filtration) -> Result<(), String> {
    if !m.shifted_by(n, -2) {
        return Err("N does not lower M by 2".into());
    }
    let dim = w.dim();
    for l in w.jumps() {
        graded_isomorphisms(n, m, &w.get(l), &w.get(l - 1), l)?;
    }
    let _ = dim;
    Ok(())
}

/// Generators of a cone `{Σ λ_j N_j : λ_j > 0}` with the positive
/// coefficient tuples at which it is sampled.
#[derive(Clone, Debug)]
pub struct ConeSpec {
    generators: Vec<NilpotentOperator>,
    samples: Vec<Vec<ExactScalar>>,
}

impl ConeSpec {
    pub fn new(generators: Vec<NilpotentOperator>, samples: Vec<Vec<ExactScalar>>) -> Result<Self, WeightError> {
        if generators.is_empty() {
            return Err(WeightError::EmptyCone);
        }
        for s in &samples {
            if s.len() != generators.len() || s.iter().any(|c| c.real_sign() != Some(1)) {
                return Err(WeightError::NonPositiveCoefficient);
            }
        }
        Ok(Self { generators, samples })
    }

    /// `count` random tuples with entries `p/q`, `1 ≤ p, q ≤ 9`, always
    /// preceded by the all-ones tuple.
    pub fn with_random_samples(generators: Vec<NilpotentOperator>, count: usize, seed: u64) -> Result<Self, WeightError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = generators.len();
        let mut samples = vec![vec![ExactScalar::one(); k]];
        for _ in 0..count {
            samples.push((0..k).map(|_| ExactScalar::from_frac(rng.gen_range(1..=9), rng.gen_range(1..=9))).collect());
        }
        Self::new(generators, samples)
    }

    pub fn generators(&self) -> &[NilpotentOperator] {
        &self.generators
    }

    pub fn samples(&self) -> &[Vec<ExactScalar>] {
        &self.samples
    }

    /// Sub-cone spanned by the listed generators, keeping the matching
    /// coordinates of every sample.
    pub fn face(&self, indices: &[usize]) -> Result<Self, WeightError> {
        let generators = indices.iter().map(|&i| self.generators[i].clone()).collect();
        let samples = self
            .samples
            .iter()
            .map(|s| indices.iter().map(|&i| s[i].clone()).collect())
            .collect();
        Self::new(generators, samples)
    }

    pub fn combination(&self, coeffs: &[ExactScalar]) -> ExactMatrix {
        let n = self.generators[0].dim();
        let mut acc = ExactMatrix::zeros(n, n);
        for (c, g) in coeffs.iter().zip(&self.generators) {
            acc = &acc + &g.matrix().scale(c);
        }
        acc
    }
}

#[derive(Clone, Debug)]
pub enum ConeVerdict {
    /// Every sampled element has this weight filtration.
    Constant(Filtration),
    /// Two sampled coefficient tuples with different weight filtrations.
    Varies {
        first: (Vec<ExactScalar>, Filtration),
        second: (Vec<ExactScalar>, Filtration),
    },
}

impl ConeVerdict {
    pub fn is_constant(&self) -> bool {
        matches!(self, ConeVerdict::Constant(_))
    }
}

/// Computes `W(N)` at every sampled point of the cone (and at the plain
/// sum when no samples were given) and compares them.
pub fn cone_constancy_check(c: &ConeSpec, center: i64) -> Result<ConeVerdict, WeightError> {
    let default = [vec![ExactScalar::one(); c.generators.len()]];
    let samples: &[Vec<ExactScalar>] = if c.samples.is_empty() { &default } else { &c.samples };
    let mut first: Option<(Vec<ExactScalar>, Filtration)> = None;
    for (k, s) in samples.iter().enumerate() {
        let op = NilpotentOperator::new(c.combination(s)).map_err(|_| WeightError::SampleNotNilpotent(k))?;
        let w = monodromy_filtration(&op, center)?;
        match &first {
            None => first = Some((s.clone(), w)),
            Some((_, w0)) if *w0 == w => {}
            Some(f) => {
                return Ok(ConeVerdict::Varies {
                    first: f.clone(),
                    second: (s.clone(), w),
                })
            }
        }
    }
    Ok(ConeVerdict::Constant(first.expect("at least one sample").1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::unit_vector;

    fn nil(rows: &[&[i64]]) -> NilpotentOperator {
        NilpotentOperator::new(ExactMatrix::from_ints(rows)).unwrap()
    }

    fn span(n: usize, idx: &[usize]) -> Subspace {
        let v: Vec<ExactVector> = idx.iter().map(|&i| unit_vector(n, i)).collect();
        Subspace::span(n, &v)
    }

    #[test]
    fn zero_operator_is_single_jump() {
        let n = nil(&[&[0, 0], &[0, 0]]);
        let w = monodromy_filtration(&n, 3).unwrap();
        assert_eq!(w, Filtration::trivial(2, 3, Direction::Increasing));
    }

    #[test]
    fn jordan_two_block() {
        let n = nil(&[&[0, 1], &[0, 0]]);
        let w = monodromy_filtration(&n, 0).unwrap();
        assert_eq!(w.get(1), Subspace::full(2));
        assert_eq!(w.get(0), span(2, &[0]));
        assert_eq!(w.get(-1), span(2, &[0]));
        assert!(w.get(-2).is_zero());
    }

    #[test]
    fn jordan_three_block() {
        let n = nil(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let w = monodromy_filtration(&n, 0).unwrap();
        assert_eq!(w.get(2), Subspace::full(3));
        assert_eq!(w.get(1), span(3, &[0, 1]));
        assert_eq!(w.get(0), span(3, &[0, 1]));
        assert_eq!(w.get(-1), span(3, &[0]));
        assert_eq!(w.get(-2), span(3, &[0]));
        assert!(w.get(-3).is_zero());
    }

    #[test]
    fn rejects_non_nilpotent() {
        assert_eq!(
            NilpotentOperator::new(ExactMatrix::from_ints(&[[1, 0], [0, 0]])).unwrap_err(),
            WeightError::NotNilpotent
        );
    }

    #[test]
    fn relative_with_trivial_w_is_monodromy() {
        let n = nil(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let w = Filtration::trivial(3, 2, Direction::Increasing);
        let m = relative_weight_filtration(&n, &w).unwrap();
        assert_eq!(m.filtration(), Some(&monodromy_filtration(&n, 2).unwrap()));
    }

    #[test]
    fn relative_of_zero_is_w() {
        let n = nil(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]]);
        let w = Filtration::from_steps(3, Direction::Increasing, vec![(0, span(3, &[0])), (2, Subspace::full(3))]).unwrap();
        let m = relative_weight_filtration(&n, &w).unwrap();
        assert_eq!(m.filtration(), Some(&w));
    }

    #[test]
    fn relative_requires_preserved_w() {
        let n = nil(&[&[0, 0], &[1, 0]]);
        let w = Filtration::from_steps(2, Direction::Increasing, vec![(0, span(2, &[0])), (1, Subspace::full(2))]).unwrap();
        assert_eq!(relative_weight_filtration(&n, &w).unwrap_err(), WeightError::NotPreserved);
    }

    #[test]
    fn relative_nonexistence() {
        // w: W_0 = span(e1) ⊂ W_1 = V with N e2 = e1; on each graded piece N is 0,
        // so M would have to equal w, but then N W_1 = W_0 is not in W_{-1}.
        let n = nil(&[&[0, 1], &[0, 0]]);
        let w = Filtration::from_steps(2, Direction::Increasing, vec![(0, span(2, &[0])), (1, Subspace::full(2))]).unwrap();
        assert!(matches!(relative_weight_filtration(&n, &w).unwrap(), Relative::NotExists(_)));
    }

    #[test]
    fn cone_scaling_is_constant() {
        let a = nil(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let b = a.scaled(&ExactScalar::from_int(2));
        let cone = ConeSpec::with_random_samples(vec![a.clone(), b], 5, 1).unwrap();
        match cone_constancy_check(&cone, 0).unwrap() {
            ConeVerdict::Constant(w) => assert_eq!(w, monodromy_filtration(&a, 0).unwrap()),
            other => panic!("expected constant, got {other:?}"),
        }
    }

    #[test]
    fn cone_with_moving_image_varies() {
        // λ1 E13 + λ2 E23 has image span(λ1 e1 + λ2 e2)
        let a = nil(&[&[0, 0, 1], &[0, 0, 0], &[0, 0, 0]]);
        let b = nil(&[&[0, 0, 0], &[0, 0, 1], &[0, 0, 0]]);
        let cone = ConeSpec::new(
            vec![a, b],
            vec![
                vec![ExactScalar::one(), ExactScalar::one()],
                vec![ExactScalar::one(), ExactScalar::from_int(2)],
            ],
        )
        .unwrap();
        assert!(!cone_constancy_check(&cone, 0).unwrap().is_constant());
    }

    #[test]
    fn cone_rejects_bad_coefficients() {
        let a = nil(&[&[0, 1], &[0, 0]]);
        assert!(ConeSpec::new(vec![a.clone()], vec![vec![ExactScalar::from_int(-1)]]).is_err());
        assert!(ConeSpec::new(vec![], vec![]).is_err());
    }
}
