use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::{build_limit_parabolic, nilpotent_orbit_eval, period_section, sector_decompose, Family, HodgeFrame, PeriodError};
use crate::mhs::commuting_multigrading;
use crate::reduction::{iwasawa, HorosphericalCoords};

/// Horospherical coordinates of `Φ̃` along a path, with the limits the
/// coordinates are expected to approach.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrackReport {
    pub ordering: Vec<usize>,
    pub coords: Vec<HorosphericalCoords>,
    /// Diagonal of `a(s) · exp(½ Σ_j log s_j Ŷ_(j))` at each point.
    pub normalized_a: Vec<Vec<f64>>,
    /// `max |n·a·m − h|` over the path.
    pub reconstruction_error: f64,
    /// At the far end: `|a(s) exp(½ Σ log s_j Ŷ_(j)) − 1|`.
    pub a_limit_error: f64,
    /// At the far end: change of `n` over the last step.
    pub n_drift: f64,
    /// At the far end: `|m − 1|`.
    pub m_error: f64,
}

impl TrackReport {
    pub fn converged(&self, tol: f64) -> bool {
        self.a_limit_error <= tol && self.n_drift <= tol && self.m_error <= tol && self.reconstruction_error <= 1e-10
    }
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, &x| a.max(x.abs()))
}

/// Iwasawa coordinates of `h(z)` with `h(z)·θ(i, …, i) = Φ̃(z)` along `path`.
/// All points must lie in one sector; the Ŷ-normalisation uses its ordering.
pub fn horospherical_factorization_track(family: Family, path: &[Vec<Complex64>]) -> Result<TrackReport, PeriodError> {
    if path.len() < 2 {
        return Err(PeriodError::TooFewSamples);
    }
    let threshold = family.validity_threshold();
    let sectors = sector_decompose(path, threshold.max(f64::MIN_POSITIVE))?;
    let ordering = sectors[0].ordering.clone();
    if sectors.iter().any(|s| s.ordering != ordering) {
        return Err(PeriodError::Invalid("path leaves the sector of its first point".into()));
    }
    let data = family.orbit_data();
    let parab = build_limit_parabolic(&data, &ordering, &family.lie_algebra())?;
    let mg = commuting_multigrading(&parab.gradings, 0)?;
    let projectors: Vec<(Vec<i64>, DMatrix<f64>)> =
        mg.projectors().into_iter().map(|(k, p)| (k, p.to_f64())).collect();
    let base = nilpotent_orbit_eval(&data, &vec![Complex64::i(); family.factors()])?;
    let dim = data.dim();
    let mut coords = Vec::with_capacity(path.len());
    let mut normalized_a: Vec<Vec<f64>> = Vec::with_capacity(path.len());
    let mut reconstruction_error: f64 = 0.0;
    for z in path {
        let (phi, _) = family.lift_with_correction(z)?;
        let h = period_section(&HodgeFrame::from_taus(&phi), &base)?;
        let c = iwasawa(&h)?;
        reconstruction_error = reconstruction_error.max(max_abs(&(c.reconstruct() - h.matrix())));
        // s_j = y_σ(j) / y_σ(j+1), s_n = y_σ(n)
        let ys: Vec<f64> = ordering.iter().map(|&j| z[j].im).collect();
        let logs: Vec<f64> = (0..ys.len())
            .map(|j| if j + 1 < ys.len() { (ys[j] / ys[j + 1]).ln() } else { ys[j].ln() })
            .collect();
        let mut e = DMatrix::<f64>::zeros(dim, dim);
        for (key, p) in &projectors {
            let exponent: f64 = key.iter().zip(&logs).map(|(&k, &l)| 0.5 * k as f64 * l).sum();
            e += p * exponent.exp();
        }
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(c.a_part.clone()));
        let na = a * e;
        normalized_a.push((0..dim).map(|i| na[(i, i)]).collect());
        coords.push(c);
    }
    let last = coords.last().expect("non-empty");
    let prev = &coords[coords.len() - 2];
    let a_limit_error = normalized_a.last().expect("non-empty").iter().fold(0.0f64, |m, &x| m.max((x - 1.0).abs()));
    let n_drift = max_abs(&(&last.n_part - &prev.n_part));
    let m_error = max_abs(&(&last.m_part - DMatrix::identity(dim, dim)));
    Ok(TrackReport { ordering, coords, normalized_a, reconstruction_error, a_limit_error, n_drift, m_error })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vertical(n: usize, x: f64, ys: impl Iterator<Item = f64>) -> Vec<Vec<Complex64>> {
        ys.map(|y| vec![Complex64::new(x, y); n]).collect()
    }

    #[test]
    fn legendre_a_part_scales_like_sqrt_y() {
        let path = vertical(1, 0.2, (5..=50).map(f64::from));
        let r = horospherical_factorization_track(Family::Legendre, &path).unwrap();
        assert!(r.converged(1e-3), "{r:?}");
        let a = &r.coords[10].a_part;
        assert!((a[0] / 15f64.sqrt() - 1.0).abs() < 1e-3);
        assert!((r.coords.last().unwrap().n_part[(0, 1)] - 0.4).abs() < 1e-9);
    }

    #[test]
    fn constant_family_is_trivial() {
        let path = vertical(1, 0.0, (2..=6).map(f64::from));
        let r = horospherical_factorization_track(Family::Constant, &path).unwrap();
        for c in &r.coords {
            assert!((c.reconstruct() - DMatrix::identity(2, 2)).amax() < 1e-12);
        }
    }

    #[test]
    fn product_diagonal_path() {
        let path = vertical(2, -0.1, (5..=50).map(f64::from));
        let r = horospherical_factorization_track(Family::Product, &path).unwrap();
        assert_eq!(r.ordering, vec![0, 1]);
        assert!(r.converged(1e-3));
        assert_eq!(r.coords[0].blocks, vec![2, 2]);
    }
}
