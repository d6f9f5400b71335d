use std::str::FromStr;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{iwasawa, GroupElement, ReductionError, SiegelSet};

/// Built-in embeddings `SL(2) → G`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Embedding {
    /// `g ↦ (g, g)` into `SL(2) × SL(2)`.
    Diagonal,
    /// Symmetric square into `SL(3)`, in the basis `x², √2·xy, y²` so that
    /// `SO(2)` lands in `SO(3)`.
    Sym2,
}

impl FromStr for Embedding {
    type Err = ReductionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "diagonal" => Ok(Self::Diagonal),
            "sym2" => Ok(Self::Sym2),
            other => Err(ReductionError::UnsupportedEmbedding(other.to_string())),
        }
    }
}

impl Embedding {
    pub fn blocks(&self) -> Vec<usize> {
        match self {
            Self::Diagonal => vec![2, 2],
            Self::Sym2 => vec![3],
        }
    }

    pub fn apply(&self, h: &DMatrix<f64>) -> GroupElement {
        let (a, b, c, d) = (h[(0, 0)], h[(0, 1)], h[(1, 0)], h[(1, 1)]);
        match self {
            Self::Diagonal => {
                let f = GroupElement::new(h.clone()).expect("SL(2) element");
                GroupElement::product(&[f.clone(), f])
            }
            Self::Sym2 => {
                let s = std::f64::consts::SQRT_2;
                #[rustfmt::skip]
                let m = DMatrix::from_row_slice(3, 3, &[
                    a * a,         s * a * b,     b * b,
                    s * a * c,     a * d + b * c, s * b * d,
                    c * c,         s * c * d,     d * d,
                ]);
                GroupElement::new(m).expect("image of SL(2) has determinant 1")
            }
        }
    }

    /// Signed permutation matrices of determinant one in each block.
    fn weyl_pool(&self) -> Vec<GroupElement> {
        let per_block: Vec<Vec<DMatrix<f64>>> = self.blocks().iter().map(|&n| signed_permutations(n)).collect();
        let mut out: Vec<Vec<DMatrix<f64>>> = vec![Vec::new()];
        for options in &per_block {
            out = out
                .iter()
                .flat_map(|prefix| {
                    options.iter().map(move |m| {
                        let mut v = prefix.clone();
                        v.push(m.clone());
                        v
                    })
                })
                .collect();
        }
        out.into_iter()
            .map(|ms| GroupElement::product(&ms.into_iter().map(|m| GroupElement::new(m).unwrap()).collect::<Vec<_>>()))
            .collect()
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Identity first, then the rest in a fixed order.
fn signed_permutations(n: usize) -> Vec<DMatrix<f64>> {
    let mut out = Vec::new();
    for p in permutations(n) {
        for signs in 0..(1u32 << n) {
            let mut m = DMatrix::<f64>::zeros(n, n);
            for (i, &j) in p.iter().enumerate() {
                m[(i, j)] = if signs >> i & 1 == 1 { -1.0 } else { 1.0 };
            }
            if (m.determinant() - 1.0).abs() < 1e-9 {
                out.push(m);
            }
        }
    }
    let id = DMatrix::identity(n, n);
    out.sort_by_key(|m| m != &id);
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrrReport {
    pub embedding: Embedding,
    /// Elements of the finite set `C`, as integer matrices.
    pub c_set: Vec<Vec<Vec<i64>>>,
    /// Fitted Siegel set of `G`.
    pub t: f64,
    pub u: f64,
    pub covered_fraction: f64,
    pub samples: usize,
}

/// Points `n(x) a(y) k(θ)` of the Siegel set, starting with its corners.
fn sample_siegel(s: &SiegelSet, count: usize, rng: &mut ChaCha8Rng) -> Vec<DMatrix<f64>> {
    let y_floor = s.t * (1.0 + 1e-9);
    let mut pts: Vec<(f64, f64, f64)> = vec![(-s.u, y_floor, 0.0), (s.u, y_floor, 0.0)];
    while pts.len() < count {
        let x = rng.gen_range(-s.u..=s.u);
        let y = y_floor * rng.gen_range(0.0f64..(50.0f64).ln()).exp();
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        pts.push((x, y, theta));
    }
    pts.truncate(count);
    pts.into_iter()
        .map(|(x, y, th)| {
            let r = y.sqrt();
            let na = DMatrix::from_row_slice(2, 2, &[r, x / r, 0.0, 1.0 / r]);
            let k = DMatrix::from_row_slice(2, 2, &[th.cos(), -th.sin(), th.sin(), th.cos()]);
            na * k
        })
        .collect()
}

fn min_root_and_entry(g: &GroupElement) -> (f64, f64) {
    let h = iwasawa(g).expect("invertible");
    let roots = h.simple_roots();
    (roots.iter().copied().fold(f64::INFINITY, f64::min), h.max_unipotent_entry())
}

/// Covering experiment for `ρ(𝔖_H) ⊂ C·𝔖_G`: fits `C` from a Weyl pool and
/// `𝔖_G` on calibration samples (drawn from `calibration`, defaulting to
/// `h_siegel`), then reports the fraction of fresh samples of `h_siegel`
/// whose image is covered.
pub fn orr_cover_check(
    embedding: Embedding,
    h_siegel: &SiegelSet,
    samples: usize,
    seed: u64,
    calibration: Option<&SiegelSet>,
) -> Result<OrrReport, ReductionError> {
    if samples < 2 {
        return Err(ReductionError::TooFewSamples);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = embedding.weyl_pool();
    let calib_set = calibration.unwrap_or(h_siegel);
    let calib = sample_siegel(calib_set, samples, &mut rng);
    // stats[k][i]: (min simple root, max unipotent entry) of c_i⁻¹ ρ(h_k)
    let stats: Vec<Vec<(f64, f64)>> = calib
        .iter()
        .map(|h| {
            let image = embedding.apply(h);
            pool.iter().map(|c| min_root_and_entry(&c.inverse().mul(&image))).collect()
        })
        .collect();
    // Every simple root of G restricts to the simple root of SL(2) for the
    // built-in embeddings, so the calibration height caps the floor; then a
    // greedy cover in pool order.
    let floor = stats
        .iter()
        .map(|row| row.iter().map(|s| s.0).fold(f64::NEG_INFINITY, f64::max))
        .fold(calib_set.t, f64::min);
    let reaches = |row: &Vec<(f64, f64)>, i: usize| row[i].0 >= floor;
    let mut chosen: Vec<usize> = Vec::new();
    let mut uncovered: Vec<&Vec<(f64, f64)>> = stats.iter().collect();
    while !uncovered.is_empty() {
        let i = (0..pool.len())
            .max_by_key(|&i| (uncovered.iter().filter(|row| reaches(row, i)).count(), std::cmp::Reverse(i)))
            .expect("pool is non-empty");
        chosen.push(i);
        uncovered.retain(|row| !reaches(row, i));
    }
    chosen.sort_unstable();
    let mut t_min = f64::INFINITY;
    let mut u_max: f64 = 0.0;
    for row in &stats {
        let i = *chosen.iter().find(|&&i| reaches(row, i)).expect("covered");
        t_min = t_min.min(row[i].0);
        u_max = u_max.max(row[i].1);
    }
    let fitted = SiegelSet::new(0.9 * t_min, 1.1 * u_max.max(1e-12))?;
    let c_set: Vec<&GroupElement> = chosen.iter().map(|&i| &pool[i]).collect();
    let eval = sample_siegel(h_siegel, samples, &mut rng);
    let covered = eval
        .iter()
        .filter(|h| {
            let image = embedding.apply(h);
            c_set.iter().any(|c| {
                let (root, entry) = min_root_and_entry(&c.inverse().mul(&image));
                root > fitted.t && entry <= fitted.u
            })
        })
        .count();
    Ok(OrrReport {
        embedding,
        c_set: c_set
            .iter()
            .map(|c| {
                let m = c.matrix();
                (0..m.nrows()).map(|r| (0..m.ncols()).map(|k| m[(r, k)].round() as i64).collect()).collect()
            })
            .collect(),
        t: fitted.t,
        u: fitted.u,
        covered_fraction: covered as f64 / samples as f64,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sym2_is_a_homomorphism_preserving_orthogonality() {
        let g = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 3.0, 2.0]);
        let h = DMatrix::from_row_slice(2, 2, &[1.0, -4.0, 0.5, -1.0]);
        let e = Embedding::Sym2;
        let lhs = e.apply(&(&g * &h));
        let rhs = e.apply(&g).mul(&e.apply(&h));
        assert!((lhs.matrix() - rhs.matrix()).amax() < 1e-12);
        let th: f64 = 0.7;
        let k = DMatrix::from_row_slice(2, 2, &[th.cos(), -th.sin(), th.sin(), th.cos()]);
        let rk = e.apply(&k);
        let gram = rk.matrix().transpose() * rk.matrix();
        assert!((gram - DMatrix::identity(3, 3)).amax() < 1e-12);
    }

    #[test]
    fn weyl_pool_sizes() {
        assert_eq!(signed_permutations(2).len(), 4);
        assert_eq!(signed_permutations(3).len(), 24);
        assert_eq!(Embedding::Diagonal.weyl_pool().len(), 16);
        assert!(Embedding::Sym2.weyl_pool()[0].matrix() == &DMatrix::identity(3, 3));
    }

    #[test]
    fn diagonal_needs_only_identity() {
        let s = SiegelSet::standard(0.8).unwrap();
        let r = orr_cover_check(Embedding::Diagonal, &s, 200, 1, None).unwrap();
        assert_eq!(r.covered_fraction, 1.0);
        assert_eq!(r.c_set, vec![vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]]]);
    }

    #[test]
    fn sym2_is_covered() {
        let s = SiegelSet::standard(0.8).unwrap();
        let r = orr_cover_check(Embedding::Sym2, &s, 1000, 2, None).unwrap();
        assert_eq!(r.covered_fraction, 1.0);
        assert!(!r.c_set.is_empty());
    }

    #[test]
    fn undersized_calibration_leaks() {
        let calib = SiegelSet::standard(1.0).unwrap();
        let s = SiegelSet::standard(0.3).unwrap();
        let r = orr_cover_check(Embedding::Sym2, &s, 500, 3, Some(&calib)).unwrap();
        assert!(r.covered_fraction < 1.0);
        assert!("cubic".parse::<Embedding>().is_err());
    }
}
