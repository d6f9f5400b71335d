use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{legendre_tau, legendre_tau_agm, PeriodError};

const TOLERANCE: f64 = 1e-6;
const MAX_ENTRY: i64 = 20;
const WEIGHT: f64 = 1e8;

/// A relation `τ₂ = (aτ₁ + b)/(cτ₁ + d)` stored as `[a, b, c, d]`.
pub type Relation = [i64; 4];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlaggedPoint {
    pub lambda1: f64,
    pub lambda2: f64,
    pub relation: Relation,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocusComponent {
    pub relation: Relation,
    /// Grid cells `(i, j)` with `λ₁ = (i + ½)/N`, `λ₂ = (j + ½)/N`.
    pub cells: Vec<(usize, usize)>,
    pub is_diagonal: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HodgeLocusReport {
    pub grid: usize,
    pub bound: i64,
    pub flagged: Vec<FlaggedPoint>,
    pub components: Vec<LocusComponent>,
    pub diagonal_detected: bool,
    pub generic_samples: usize,
    pub generic_flagged: usize,
    pub generic_clean_fraction: f64,
}

/// LLL reduction (`δ = 3/4`) of the rows of `b`, in floating point.
fn lll(mut b: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let n = b.len();
    let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
    let gram_schmidt = |b: &[Vec<f64>]| {
        let mut star: Vec<Vec<f64>> = Vec::with_capacity(n);
        let mut mu = vec![vec![0.0; n]; n];
        for i in 0..n {
            let mut v = b[i].clone();
            for j in 0..i {
                mu[i][j] = dot(&b[i], &star[j]) / dot(&star[j], &star[j]);
                for (vk, sk) in v.iter_mut().zip(&star[j]) {
                    *vk -= mu[i][j] * sk;
                }
            }
            star.push(v);
        }
        (star, mu)
    };
    let mut k = 1;
    let mut guard = 0;
    while k < n && guard < 10_000 {
        guard += 1;
        for j in (0..k).rev() {
            let (_, mu) = gram_schmidt(&b);
            let q = mu[k][j].round();
            if q != 0.0 {
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= q * y;
                }
            }
        }
        let (star, mu) = gram_schmidt(&b);
        let lhs = dot(&star[k], &star[k]);
        let rhs = (0.75 - mu[k][k - 1] * mu[k][k - 1]) * dot(&star[k - 1], &star[k - 1]);
        if lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    b
}

fn normalize(r: Relation) -> Relation {
    match r.iter().find(|&&x| x != 0) {
        Some(&x) if x < 0 => r.map(|v| -v),
        _ => r,
    }
}

fn residual(r: &Relation, t1: Complex64, t2: Complex64) -> f64 {
    let [a, b, c, d] = r.map(|v| v as f64);
    (t2 - (t1 * a + b) / (t1 * c + d)).norm()
}

/// Integer relation `c τ₁τ₂ + d τ₂ − a τ₁ − b = 0` found by lattice reduction
/// on the first route and confirmed on the second.
fn find_relation(t1: [Complex64; 2], t2: [Complex64; 2], bound: i64) -> Option<Relation> {
    let v = [t1[0] * t2[0], t2[0], t1[0], Complex64::new(1.0, 0.0)];
    let rows: Vec<Vec<f64>> = (0..4)
        .map(|i| {
            let mut row = vec![0.0; 6];
            row[i] = 1.0;
            row[4] = WEIGHT * v[i].re;
            row[5] = WEIGHT * v[i].im;
            row
        })
        .collect();
    lll(rows).into_iter().find_map(|row| {
        let x: Vec<i64> = row[..4].iter().map(|v| v.round() as i64).collect();
        let (c, d, a, b) = (x[0], x[1], -x[2], -x[3]);
        let det = (a * d - b * c).abs();
        if x.iter().any(|v| v.abs() > MAX_ENTRY) || det < 1 || det > bound {
            return None;
        }
        let rel = normalize([a, b, c, d]);
        let ok = (0..2).all(|k| residual(&rel, t1[k], t2[k]) < TOLERANCE);
        ok.then_some(rel)
    })
}

fn taus(l: f64) -> Result<[Complex64; 2], PeriodError> {
    let z = Complex64::new(l, 0.0);
    Ok([legendre_tau(z)?, legendre_tau_agm(z)?])
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Scans the grid `λ_k = (k + ½)/N` on `(0, 1)²` for pairs of Legendre
/// curves whose periods are related by an integral Möbius map of
/// determinant at most `bound`, clusters flagged cells into components, and
/// measures the false-flag rate on random off-grid points.
pub fn hodge_locus_demo(grid: usize, bound: i64, generic_samples: usize, seed: u64) -> Result<HodgeLocusReport, PeriodError> {
    if grid < 2 || bound < 1 {
        return Err(PeriodError::Invalid("need grid ≥ 2 and bound ≥ 1".into()));
    }
    let lambdas: Vec<f64> = (0..grid).map(|k| (k as f64 + 0.5) / grid as f64).collect();
    let tau_axis: Vec<[Complex64; 2]> = lambdas.iter().map(|&l| taus(l)).collect::<Result<_, _>>()?;
    let relations: Vec<Option<Relation>> = (0..grid * grid)
        .into_par_iter()
        .map(|idx| find_relation(tau_axis[idx / grid], tau_axis[idx % grid], bound))
        .collect();
    let mut parent: Vec<usize> = (0..grid * grid).collect();
    for idx in 0..grid * grid {
        let Some(rel) = relations[idx] else { continue };
        let (i, j) = (idx / grid, idx % grid);
        for (di, dj) in [(0i64, 1i64), (1, -1), (1, 0), (1, 1)] {
            let (ni, nj) = (i as i64 + di, j as i64 + dj);
            if ni < 0 || nj < 0 || ni >= grid as i64 || nj >= grid as i64 {
                continue;
            }
            let nidx = ni as usize * grid + nj as usize;
            if relations[nidx] == Some(rel) {
                let (a, b) = (find(&mut parent, idx), find(&mut parent, nidx));
                parent[a] = b;
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    let mut flagged = Vec::new();
    for idx in 0..grid * grid {
        if let Some(rel) = relations[idx] {
            let (i, j) = (idx / grid, idx % grid);
            groups.entry(find(&mut parent, idx)).or_default().push((i, j));
            flagged.push(FlaggedPoint { lambda1: lambdas[i], lambda2: lambdas[j], relation: rel });
        }
    }
    let mut components: Vec<LocusComponent> = groups
        .into_values()
        .map(|cells| {
            let (i, j) = cells[0];
            let relation = relations[i * grid + j].expect("flagged");
            LocusComponent { relation, is_diagonal: relation == [1, 0, 0, 1], cells }
        })
        .collect();
    components.sort_by(|a, b| b.cells.len().cmp(&a.cells.len()).then(a.relation.cmp(&b.relation)));
    let diagonal_detected = components.iter().any(|c| c.is_diagonal && c.cells.len() == grid);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(f64, f64)> =
        (0..generic_samples).map(|_| (rng.gen_range(0.01..0.99), rng.gen_range(0.01..0.99))).collect();
    let generic_flagged = pairs
        .par_iter()
        .map(|&(a, b)| Ok(find_relation(taus(a)?, taus(b)?, bound).is_some()))
        .collect::<Result<Vec<bool>, PeriodError>>()?
        .into_iter()
        .filter(|&f| f)
        .count();
    let generic_clean_fraction =
        if generic_samples == 0 { 1.0 } else { 1.0 - generic_flagged as f64 / generic_samples as f64 };
    Ok(HodgeLocusReport {
        grid,
        bound,
        flagged,
        components,
        diagonal_detected,
        generic_samples,
        generic_flagged,
        generic_clean_fraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lll_finds_short_vector() {
        let b = lll(vec![vec![1.0, 1.0, 1.0], vec![-1.0, 0.0, 2.0], vec![3.0, 5.0, 6.0]]);
        let shortest = b.iter().map(|r| r.iter().map(|x| x * x).sum::<f64>()).fold(f64::INFINITY, f64::min);
        assert!(shortest <= 3.0 + 1e-9);
    }

    #[test]
    fn equal_periods_give_identity() {
        let t = taus(0.3).unwrap();
        assert_eq!(find_relation(t, t, 4), Some([1, 0, 0, 1]));
        let s = taus(0.7).unwrap();
        assert_eq!(find_relation(t, s, 4), Some([0, 1, -1, 0]));
    }

    #[test]
    fn generic_pair_is_not_flagged() {
        assert_eq!(find_relation(taus(0.123).unwrap(), taus(0.456).unwrap(), 4), None);
    }

    #[test]
    fn small_grid_components() {
        let r = hodge_locus_demo(20, 4, 50, 1).unwrap();
        assert!(r.diagonal_detected);
        assert!(r.generic_clean_fraction >= 0.95);
        let anti = r.components.iter().find(|c| c.relation == [0, 1, -1, 0]).expect("antidiagonal");
        assert_eq!(anti.cells.len(), 20);
    }
}
