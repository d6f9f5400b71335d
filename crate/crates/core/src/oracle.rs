//! Independent reference computations used to cross-check the main
//! algorithms: weight filtrations read off from a Jordan basis, and an
//! exhaustive search over all filtrations of `F_p^n`.

use std::collections::{HashSet, VecDeque};

use num_traits::ToPrimitive;

use crate::exactlin::{Direction, ExactMatrix, Filtration, Subspace};
use crate::samples::NilpotentSample;

/// `W(P J P⁻¹) = P · W(J)`, where a vector `e_j` (1-based) of a Jordan block of
/// size `m` has weight `center + 2j − m − 1`.
pub fn jordan_weight_filtration(sample: &NilpotentSample, center: i64) -> Filtration {
    let n: usize = sample.blocks.iter().sum();
    let cols = sample.conjugator.columns();
    let weights: Vec<i64> = jordan_weights(&sample.blocks).into_iter().map(|w| w + center).collect();
    let (lo, hi) = (*weights.iter().min().expect("n ≥ 1"), *weights.iter().max().expect("n ≥ 1"));
    let steps = (lo..=hi)
        .map(|l| {
            let basis: Vec<_> = weights.iter().zip(&cols).filter(|(&w, _)| w <= l).map(|(_, c)| c.clone()).collect();
            (l, Subspace::span(n, &basis))
        })
        .collect();
    Filtration::from_steps(n, Direction::Increasing, steps).expect("nested by construction")
}

/// Vectors of `F_p^n` are encoded as `Σ v_i p^i`; a subspace is the bit set of
/// its members, so `p^n ≤ 128` is required.
struct FiniteSpace {
    p: usize,
    n: usize,
    size: usize,
}

impl FiniteSpace {
    fn new(p: usize, n: usize) -> Option<Self> {
        let size = p.checked_pow(n as u32)?;
        (size <= 128).then_some(Self { p, n, size })
    }

    fn decode(&self, mut v: usize) -> Vec<usize> {
        (0..self.n)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    fn encode(&self, v: &[usize]) -> usize {
        v.iter().rev().fold(0, |acc, &d| acc * self.p + d % self.p)
    }

    fn add_scaled(&self, a: usize, b: usize, c: usize) -> usize {
        let (x, y) = (self.decode(a), self.decode(b));
        self.encode(&x.iter().zip(&y).map(|(s, t)| s + c * t).collect::<Vec<_>>())
    }

    fn span(&self, mut set: u128, v: usize) -> u128 {
        if set >> v & 1 == 1 {
            return set;
        }
        let members: Vec<usize> = (0..self.size).filter(|&i| set >> i & 1 == 1).collect();
        for c in 1..self.p {
            for &s in &members {
                set |= 1 << self.add_scaled(s, v, c);
            }
        }
        set
    }

    fn all_subspaces(&self) -> Vec<u128> {
        let mut seen = HashSet::from([1u128]);
        let mut queue = VecDeque::from([1u128]);
        while let Some(s) = queue.pop_front() {
            for v in 0..self.size {
                let t = self.span(s, v);
                if seen.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        let mut out: Vec<u128> = seen.into_iter().collect();
        out.sort_by_key(|s| (s.count_ones(), *s));
        out
    }

    fn dim(&self, s: u128) -> u32 {
        let mut k = 0;
        let mut size = 1u32;
        while size < s.count_ones() {
            size *= self.p as u32;
            k += 1;
        }
        k
    }

    fn full(&self) -> u128 {
        if self.size == 128 { u128::MAX } else { (1u128 << self.size) - 1 }
    }
}

fn image(map: &[usize], s: u128) -> u128 {
    map.iter().enumerate().filter(|(v, _)| s >> v & 1 == 1).fold(0, |acc, (_, &w)| acc | 1 << w)
}

fn subset(a: u128, b: u128) -> bool {
    a & !b == 0
}

/// Every increasing filtration of `F_p^n` that satisfies the monodromy
/// axioms for `N mod p` (integral `N`) centered at `c`, listed as
/// `W_{c-n}, …, W_{c+n-1}`. The axioms force `W_{c-n} = 0` and
/// `W_{c+n-1} = V` since `N^n = 0`.
/// Returns `None` if `N` is not integral or `p^n > 128`.
pub fn brute_force_weight_filtrations(n_op: &ExactMatrix, p: usize) -> Option<Vec<Vec<u128>>> {
    let n = n_op.rows();
    let space = FiniteSpace::new(p, n)?;
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let x = n_op.get(i, j);
            if !x.is_real() || !x.re().is_integer() {
                return None;
            }
            entries.push(x.re().to_integer().to_i64()?.rem_euclid(p as i64) as usize);
        }
    }
    let map: Vec<usize> = (0..space.size)
        .map(|v| {
            let x = space.decode(v);
            space.encode(&(0..n).map(|i| (0..n).map(|j| entries[i * n + j] * x[j]).sum()).collect::<Vec<_>>())
        })
        .collect();
    let mut powers = vec![(0..space.size).collect::<Vec<_>>()];
    for _ in 0..n {
        let last = powers.last().expect("non-empty");
        powers.push(last.iter().map(|&v| map[v]).collect());
    }
    let subspaces = space.all_subspaces();
    let levels = 2 * n;
    let mut found = Vec::new();
    let mut chain = vec![1u128];
    fn dfs(
        chain: &mut Vec<u128>,
        levels: usize,
        subspaces: &[u128],
        map: &[usize],
        space: &FiniteSpace,
        powers: &[Vec<usize>],
        found: &mut Vec<Vec<u128>>,
    ) {
        let k = chain.len();
        if k == levels {
            if graded_isomorphisms(chain, space, powers) {
                found.push(chain.clone());
            }
            return;
        }
        let prev = chain[k - 1];
        let candidates: Vec<u128> = if k == levels - 1 { vec![space.full()] } else { subspaces.to_vec() };
        for s in candidates {
            if !subset(prev, s) {
                continue;
            }
            let target = if k >= 2 { chain[k - 2] } else { 1 };
            if !subset(image(map, s), target) {
                continue;
            }
            chain.push(s);
            dfs(chain, levels, subspaces, map, space, powers, found);
            chain.pop();
        }
    }
    dfs(&mut chain, levels, &subspaces, &map, &space, &powers, &mut found);
    Some(found)
}

/// `chain[i] = W_{c-n+i}`; checks `N^l : Gr_{c+l} → Gr_{c-l}` is bijective.
fn graded_isomorphisms(chain: &[u128], space: &FiniteSpace, powers: &[Vec<usize>]) -> bool {
    let n = space.n;
    let at = |offset: i64| -> u128 {
        let i = offset + n as i64;
        if i < 0 {
            1
        } else {
            chain[(i as usize).min(chain.len() - 1)]
        }
    };
    let gr = |offset: i64| space.dim(at(offset)) as i64 - space.dim(at(offset - 1)) as i64;
    for l in 1..n as i64 {
        if gr(l) != gr(-l) {
            return false;
        }
        let (top, below_top, floor) = (at(l), at(l - 1), at(-l - 1));
        for v in 0..space.size {
            if top >> v & 1 == 1 && below_top >> v & 1 == 0 && floor >> powers[l as usize][v] & 1 == 1 {
                return false;
            }
        }
    }
    true
}

fn jordan_weights(blocks: &[usize]) -> Vec<i64> {
    blocks.iter().flat_map(|&m| (1..=m).map(move |j| 2 * j as i64 - m as i64 - 1)).collect()
}

/// Exhaustive uniqueness check over `F_p`: exactly one filtration satisfies
/// the axioms for `N mod p`, and it is the reduction of `P · W(J)` taken
/// through the integral columns of `P`.
pub fn weight_filtration_unique_mod_p(sample: &NilpotentSample, p: usize) -> Option<bool> {
    let all = brute_force_weight_filtrations(&sample.matrix, p)?;
    let n = sample.matrix.rows();
    let space = FiniteSpace::new(p, n)?;
    let weights = jordan_weights(&sample.blocks);
    let mut cols = Vec::with_capacity(n);
    for c in sample.conjugator.columns() {
        let mut digits = Vec::with_capacity(n);
        for x in &c {
            digits.push(x.re().to_integer().to_i64()?.rem_euclid(p as i64) as usize);
        }
        cols.push(space.encode(&digits));
    }
    let expected: Vec<u128> = (-(n as i64)..n as i64)
        .map(|l| weights.iter().zip(&cols).filter(|(&w, _)| w <= l).fold(1u128, |s, (_, &v)| space.span(s, v)))
        .collect();
    Some(all.len() == 1 && all[0] == expected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::{jordan_nilpotent, random_nilpotent};
    use crate::weightfilt::{monodromy_filtration, NilpotentOperator};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn counts_subspaces_of_small_spaces() {
        assert_eq!(FiniteSpace::new(2, 3).unwrap().all_subspaces().len(), 16);
        assert_eq!(FiniteSpace::new(3, 2).unwrap().all_subspaces().len(), 6);
        assert_eq!(FiniteSpace::new(2, 4).unwrap().all_subspaces().len(), 67);
    }

    #[test]
    fn single_block_has_one_filtration() {
        let j = jordan_nilpotent(&[3]);
        let all = brute_force_weight_filtrations(&j, 3).unwrap();
        assert_eq!(all.len(), 1);
    }

    #[test]
    fn jordan_reference_matches_main_algorithm() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 1..=5 {
            let s = random_nilpotent(n, &mut rng);
            let w = monodromy_filtration(&NilpotentOperator::new(s.matrix.clone()).unwrap(), 1).unwrap();
            assert_eq!(w, jordan_weight_filtration(&s, 1));
        }
    }

    #[test]
    fn uniqueness_mod_small_primes() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for n in 1..=4 {
            let s = random_nilpotent(n, &mut rng);
            let p = if n == 4 { 2 } else { 3 };
            assert_eq!(weight_filtration_unique_mod_p(&s, p), Some(true), "{:?}", s.blocks);
        }
    }
}
