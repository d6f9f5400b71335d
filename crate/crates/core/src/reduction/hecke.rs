use std::collections::VecDeque;

use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::{ReductionError, Sl2Z};
use crate::exactlin::ExactMatrix;

const MAX_INDEX: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeckeResult {
    /// Primitive integral multiple of the input.
    pub g: [[i64; 2]; 2],
    pub level: i64,
    /// `[Γ : Γ ∩ g⁻¹Γg]` for `Γ = Γ0(level)`.
    pub degree: usize,
    /// Left coset representatives of `Γ ∩ g⁻¹Γg` in `Γ`.
    pub cosets: Vec<Sl2Z>,
}

/// `[SL(2,Z) : Γ0(N)] = N ∏_{p | N} (1 + 1/p)`.
pub fn gamma0_index(n: i64) -> usize {
    let mut m = n;
    let mut num = n;
    let mut den = 1;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            num *= p + 1;
            den *= p;
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        num *= m + 1;
        den *= m;
    }
    (num / den) as usize
}

fn integral_primitive(g: &ExactMatrix) -> Result<[[i64; 2]; 2], ReductionError> {
    if g.rows() != 2 || g.cols() != 2 {
        return Err(ReductionError::NotSquare);
    }
    if !g.is_real() {
        return Err(ReductionError::NonRational);
    }
    let entries: Vec<_> = g.entries().iter().map(|e| e.re().clone()).collect();
    let lcm = entries.iter().fold(num_bigint::BigInt::from(1), |acc, e| acc.lcm(e.denom()));
    let ints: Vec<num_bigint::BigInt> = entries.iter().map(|e| (e * &lcm).to_integer()).collect();
    let gcd = ints.iter().fold(num_bigint::BigInt::from(0), |acc, e| acc.gcd(e));
    if gcd == num_bigint::BigInt::from(0) {
        return Err(ReductionError::NearSingular);
    }
    let small: Option<Vec<i64>> = ints.iter().map(|e| (e / &gcd).to_i64()).collect();
    let v = small.ok_or(ReductionError::NonRational)?;
    if v.iter().any(|x| x.abs() > 1 << 20) {
        return Err(ReductionError::NonRational);
    }
    let det = v[0] * v[3] - v[1] * v[2];
    if det <= 0 {
        return Err(ReductionError::NonPositiveDeterminant);
    }
    Ok([[v[0], v[1]], [v[2], v[3]]])
}

/// Coset decomposition realising the Hecke correspondence attached to `g`
/// on `Γ0(level)\H`, by breadth-first search over `SL(2, Z)` with
/// generators `S`, `T`, `T⁻¹`.
pub fn hecke_correspondence(g: &ExactMatrix, level: i64) -> Result<HeckeResult, ReductionError> {
    if level < 1 {
        return Err(ReductionError::NonPositiveHeight);
    }
    let m = integral_primitive(g)?;
    let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) as i128;
    let in_gamma0 = |x: &Sl2Z| x.c % level == 0;
    let in_conjugate = |x: &Sl2Z| {
        // g x adj(g) = det(g) · g x g⁻¹
        let (ga, gb, gc, gd) = (m[0][0] as i128, m[0][1] as i128, m[1][0] as i128, m[1][1] as i128);
        let (xa, xb, xc, xd) = (x.a as i128, x.b as i128, x.c as i128, x.d as i128);
        let (pa, pb, pc, pd) = (ga * xa + gb * xc, ga * xb + gb * xd, gc * xa + gd * xc, gc * xb + gd * xd);
        let y = [pa * gd - pb * gc, -pa * gb + pb * ga, pc * gd - pd * gc, -pc * gb + pd * ga];
        y.iter().all(|e| e % det == 0) && (y[2] / det) % level as i128 == 0
    };
    let in_h = |x: &Sl2Z| in_gamma0(x) && in_conjugate(x);
    let mut reps = vec![Sl2Z::IDENTITY];
    let mut queue = VecDeque::from([Sl2Z::IDENTITY]);
    while let Some(r) = queue.pop_front() {
        for s in [Sl2Z::S, Sl2Z::T, Sl2Z::translation(-1)] {
            let cand = s.mul(&r);
            if reps.iter().any(|q| in_h(&q.inverse().mul(&cand))) {
                continue;
            }
            reps.push(cand);
            queue.push_back(cand);
            if reps.len() > MAX_INDEX {
                return Err(ReductionError::NonRational);
            }
        }
    }
    let cosets: Vec<Sl2Z> = reps.into_iter().filter(|r| in_gamma0(r)).collect();
    Ok(HeckeResult {
        g: m,
        level,
        degree: cosets.len(),
        cosets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(a: i64, b: i64) -> ExactMatrix {
        ExactMatrix::from_ints(&[[a, 0], [0, b]])
    }

    #[test]
    fn identity_has_degree_one() {
        assert_eq!(hecke_correspondence(&ExactMatrix::identity(2), 1).unwrap().degree, 1);
    }

    #[test]
    fn prime_degrees() {
        for p in [2, 3, 5, 7] {
            let r = hecke_correspondence(&diag(1, p), 1).unwrap();
            assert_eq!(r.degree, p as usize + 1);
            assert_eq!(gamma0_index(p), p as usize + 1);
        }
    }

    #[test]
    fn multiplicative_on_coprime() {
        let d2 = hecke_correspondence(&diag(1, 2), 1).unwrap().degree;
        let d3 = hecke_correspondence(&diag(1, 3), 1).unwrap().degree;
        let d6 = hecke_correspondence(&diag(1, 6), 1).unwrap().degree;
        assert_eq!(d2 * d3, d6);
        assert_eq!(d6, 12);
    }

    #[test]
    fn scaling_and_rational_input() {
        let half = ExactMatrix::from_rows(vec![
            vec!["1/2".parse().unwrap(), "0".parse().unwrap()],
            vec!["0".parse().unwrap(), "1".parse().unwrap()],
        ])
        .unwrap();
        let r = hecke_correspondence(&half, 1).unwrap();
        assert_eq!(r.g, [[1, 0], [0, 2]]);
        assert_eq!(r.degree, 3);
        let complex = ExactMatrix::from_rows(vec![
            vec!["i".parse().unwrap(), "0".parse().unwrap()],
            vec!["0".parse().unwrap(), "1".parse().unwrap()],
        ])
        .unwrap();
        assert_eq!(hecke_correspondence(&complex, 1).unwrap_err(), ReductionError::NonRational);
    }

    #[test]
    fn cosets_are_distinct_and_inside_level() {
        let r = hecke_correspondence(&diag(1, 3), 2).unwrap();
        assert_eq!(r.degree, 4);
        assert!(r.cosets.iter().all(|c| c.c % 2 == 0));
        assert_eq!(gamma0_index(6), 12);
    }
}
