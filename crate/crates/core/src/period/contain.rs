use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{nilpotent_orbit_eval, period_section, sector_decompose, Family, HodgeFrame, PeriodError};
use crate::reduction::{iwasawa, siegel_membership, GroupElement, SiegelSet, UpperHalfPoint};

/// Upper end of the sampled `Im z` window.
const Y_MAX: f64 = 50.0;
/// Multiplicative margin applied to the fitted `t` and `u`.
const MARGIN: f64 = 1.1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub ordering: Vec<usize>,
    pub siegel: SiegelSet,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContainmentReport {
    pub family: Family,
    pub witnesses: Vec<Witness>,
    pub uncovered: Vec<Vec<UpperHalfPoint>>,
    pub points_tested: usize,
    pub validity_threshold: f64,
}

fn axis(n: usize, lo: f64, hi: f64, geometric: bool) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|k| {
            let s = k as f64 / (n - 1) as f64;
            if geometric {
                lo * (hi / lo).powf(s)
            } else {
                lo + (hi - lo) * s
            }
        })
        .collect()
}

/// Fits one Siegel set per sector ordering to the Iwasawa coordinates of
/// `h(z)` (with `h(z)·θ(i, …, i) = Φ̃(z)`) over a grid with `|Re z_j| ≤ r`,
/// `Im z_j ∈ [η, 50]`, `grid × grid` points per factor, then re-tests every
/// grid point against its witness.
pub fn siegel_containment_check(family: Family, r: f64, eta: f64, grid: usize) -> Result<ContainmentReport, PeriodError> {
    if grid < 2 {
        return Err(PeriodError::TooFewSamples);
    }
    if !(r >= 0.0) || !(eta > 0.0) || eta >= Y_MAX {
        return Err(PeriodError::Invalid("need R ≥ 0 and 0 < η < 50".into()));
    }
    let threshold = family.validity_threshold();
    if eta < threshold {
        return Err(PeriodError::BelowThreshold { y: eta, threshold });
    }
    let data = family.orbit_data();
    let base = nilpotent_orbit_eval(&data, &vec![Complex64::i(); family.factors()])?;
    let xs = axis(grid, -r, r, false);
    let ys = axis(grid, eta, Y_MAX, true);
    let factor_points: Vec<Complex64> =
        xs.iter().flat_map(|&x| ys.iter().map(move |&y| Complex64::new(x, y))).collect();
    let n = family.factors();
    let mut points: Vec<Vec<Complex64>> = vec![Vec::new()];
    for _ in 0..n {
        points = points
            .iter()
            .flat_map(|p| {
                factor_points.iter().map(move |&w| {
                    let mut q = p.clone();
                    q.push(w);
                    q
                })
            })
            .collect();
    }
    let sectors = sector_decompose(&points, eta)?;
    let images: Vec<GroupElement> = points
        .par_iter()
        .map(|z| {
            let (phi, _) = family.lift_with_correction(z)?;
            period_section(&HodgeFrame::from_taus(&phi), &base)
        })
        .collect::<Result<_, PeriodError>>()?;
    let mut fits: BTreeMap<Vec<usize>, (f64, f64, usize)> = BTreeMap::new();
    for (s, h) in sectors.iter().zip(&images) {
        let c = iwasawa(h)?;
        let root = c.simple_roots().into_iter().fold(f64::INFINITY, f64::min);
        let entry = c.max_unipotent_entry();
        let e = fits.entry(s.ordering.clone()).or_insert((f64::INFINITY, 0.0, 0));
        e.0 = e.0.min(root);
        e.1 = e.1.max(entry);
        e.2 += 1;
    }
    let mut witnesses = Vec::new();
    let mut by_ordering = BTreeMap::new();
    for (ordering, (root, entry, count)) in fits {
        let siegel = SiegelSet::new(root / MARGIN, entry * MARGIN)?;
        by_ordering.insert(ordering.clone(), siegel);
        witnesses.push(Witness { ordering, siegel, points: count });
    }
    let flags: Vec<bool> = sectors
        .par_iter()
        .zip(&images)
        .map(|(s, h)| siegel_membership(h, &by_ordering[&s.ordering]))
        .collect::<Result<_, _>>()?;
    let uncovered = points
        .iter()
        .zip(&flags)
        .filter(|(_, &ok)| !ok)
        .map(|(z, _)| z.iter().map(|w| UpperHalfPoint { x: w.re, y: w.im }).collect())
        .collect();
    Ok(ContainmentReport { family, witnesses, uncovered, points_tested: points.len(), validity_threshold: threshold })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_single_witness() {
        let r = siegel_containment_check(Family::Legendre, 0.5, 2.0, 30).unwrap();
        assert_eq!(r.witnesses.len(), 1);
        assert!(r.uncovered.is_empty());
        assert_eq!(r.points_tested, 900);
        let t = r.witnesses[0].siegel.t;
        assert!(t > 1.0 && t < 2.0, "{t}");
    }

    #[test]
    fn product_two_witnesses() {
        let r = siegel_containment_check(Family::Product, 0.5, 2.0, 5).unwrap();
        assert!(r.witnesses.len() <= 2);
        assert!(r.uncovered.is_empty());
    }

    #[test]
    fn below_threshold_is_an_error() {
        assert!(matches!(
            siegel_containment_check(Family::Legendre, 0.5, 0.5, 10),
            Err(PeriodError::BelowThreshold { .. })
        ));
    }
}
