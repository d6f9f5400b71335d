//! Seeded random instances for property checks and the verification suite.

use rand::Rng;

use crate::exactlin::{unit_vector, Direction, ExactMatrix, ExactScalar, Filtration, Subspace};
use crate::mhs::MixedHodge;

/// Random composition of `n` into positive parts.
pub fn random_partition<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut parts = Vec::new();
    let mut left = n;
    while left > 0 {
        let p = rng.gen_range(1..=left);
        parts.push(p);
        left -= p;
    }
    parts
}

/// Block diagonal sum of upper shift matrices (`J e_{j+1} = e_j` inside a block).
pub fn jordan_nilpotent(blocks: &[usize]) -> ExactMatrix {
    let n: usize = blocks.iter().sum();
    let mut m = ExactMatrix::zeros(n, n);
    let mut start = 0;
    for &b in blocks {
        for j in 1..b {
            m.set(start + j - 1, start + j, ExactScalar::one());
        }
        start += b;
    }
    m
}

/// Integer matrix with determinant ±1, a product of `steps` random
/// elementary operations and a random permutation with signs.
pub fn random_unimodular<R: Rng>(n: usize, steps: usize, rng: &mut R) -> ExactMatrix {
    let mut p = ExactMatrix::identity(n);
    if n < 2 {
        return p;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let k = rng.gen_range(-2i64..=2);
        let mut e = ExactMatrix::identity(n);
        e.set(i, j, ExactScalar::from_int(k));
        p = &e * &p;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let mut s = ExactMatrix::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        s.set(i, j, ExactScalar::from_int(if rng.gen_bool(0.5) { 1 } else { -1 }));
    }
    &s * &p
}

/// A random nilpotent `P J P⁻¹` together with its Jordan type and `P`.
#[derive(Clone, Debug)]
pub struct NilpotentSample {
    pub blocks: Vec<usize>,
    pub conjugator: ExactMatrix,
    pub matrix: ExactMatrix,
}

pub fn random_nilpotent<R: Rng>(n: usize, rng: &mut R) -> NilpotentSample {
    let blocks = random_partition(n, rng);
    let conjugator = random_unimodular(n, 2 * n, rng);
    let inv = conjugator.inverse().expect("unimodular");
    let matrix = &(&conjugator * &jordan_nilpotent(&blocks)) * &inv;
    NilpotentSample { blocks, conjugator, matrix }
}

fn small_gaussian<R: Rng>(rng: &mut R) -> ExactScalar {
    let re = ExactScalar::from_frac(rng.gen_range(-4..=4), rng.gen_range(1..=3));
    let im = ExactScalar::from_frac(rng.gen_range(-4..=4), rng.gen_range(1..=3));
    &re + &(&im * &ExactScalar::i())
}

/// A Hodge–Tate structure `W_0 ⊂ W_2 = V` with `dim W_0 = a`,
/// `dim Gr_2 = b` (`a, b ∈ {1, 2}`) and a random complex `F¹` transverse to
/// `W_0`, moved by a random real unimodular change of basis.
pub fn random_hodge_tate<R: Rng>(rng: &mut R) -> MixedHodge {
    let a = rng.gen_range(1..=2);
    let b = rng.gen_range(1..=2);
    let n = a + b;
    let w0: Vec<_> = (0..a).map(|i| unit_vector(n, i)).collect();
    let w = Filtration::from_steps(n, Direction::Increasing, vec![(0, Subspace::span(n, &w0)), (2, Subspace::full(n))])
        .expect("nested");
    let f1: Vec<_> = (0..b)
        .map(|j| {
            let mut v: Vec<ExactScalar> = (0..a).map(|_| small_gaussian(rng)).collect();
            v.extend((0..b).map(|k| if k == j { ExactScalar::one() } else { ExactScalar::zero() }));
            v
        })
        .collect();
    let f = Filtration::from_steps(n, Direction::Decreasing, vec![(0, Subspace::full(n)), (1, Subspace::span(n, &f1))])
        .expect("nested");
    let g = random_unimodular(n, n + 1, rng);
    MixedHodge::new(w.transform(&g), f.transform(&g)).expect("same dimension")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unimodular_has_unit_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=6 {
            let d = random_unimodular(n, 12, &mut rng).det();
            assert!(d == ExactScalar::one() || d == ExactScalar::from_int(-1));
        }
    }

    #[test]
    fn nilpotent_has_requested_jordan_type() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let s = random_nilpotent(5, &mut rng);
            let longest = *s.blocks.iter().max().unwrap() as u32;
            assert_eq!(s.matrix.nilpotency_index(), Some(longest));
            assert_eq!(s.blocks.iter().sum::<usize>(), 5);
        }
    }

    #[test]
    fn hodge_tate_samples_are_mixed_hodge() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            assert!(crate::mhs::is_mhs(&random_hodge_tate(&mut rng)));
        }
    }
}
