use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::family::distance_from_delta;
use super::{nilpotent_orbit_eval, Family, PeriodError};

/// Fit of `log d ≈ log K̂ + β̂ log y − rate·y`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayFit {
    pub k_hat: f64,
    pub beta_hat: f64,
    pub rate: f64,
    /// Root mean square residual of the log-linear fit.
    pub residual: f64,
    /// Distances strictly decrease along the ray `Re z = 0`.
    pub monotone: bool,
    /// Every sampled distance is exactly zero (no fit performed).
    pub all_zero: bool,
    /// Separate fits per factor, each against its own `y`.
    pub factor_rates: Vec<f64>,
    /// `(y, d)` pairs used for the overall fit.
    pub points: Vec<(f64, f64)>,
}

fn fit(points: &[(f64, f64)]) -> (f64, f64, f64, f64) {
    let a = DMatrix::from_fn(points.len(), 3, |r, c| match c {
        0 => 1.0,
        1 => points[r].0.ln(),
        _ => -points[r].0,
    });
    let b = DVector::from_iterator(points.len(), points.iter().map(|p| p.1.ln()));
    let sol = a.clone().svd(true, true).solve(&b, 1e-14).expect("full SVD");
    let res = &a * &sol - &b;
    let rms = (res.norm_squared() / points.len() as f64).sqrt();
    (sol[0].exp(), sol[1], sol[2], rms)
}

/// Samples `z` with `|Re z_j| ≤ x_window` and a common `Im z_j = y` drawn
/// uniformly from `y_range`, and fits the decay of `d(Φ̃(z), θ(z))`.
pub fn schmid_decay_check(
    family: Family,
    x_window: f64,
    y_range: (f64, f64),
    samples: usize,
    seed: u64,
) -> Result<DecayFit, PeriodError> {
    if samples < 4 {
        return Err(PeriodError::TooFewSamples);
    }
    let (y0, y1) = y_range;
    if !(y0 > 0.0 && y1 > y0) || !(x_window >= 0.0) {
        return Err(PeriodError::Invalid("need 0 < y_min < y_max and a non-negative x window".into()));
    }
    let threshold = family.validity_threshold();
    if y0 < threshold {
        return Err(PeriodError::BelowThreshold { y: y0, threshold });
    }
    let n = family.factors();
    let data = family.orbit_data();
    let orbit_of = |z: &[Complex64]| -> Result<Vec<Complex64>, PeriodError> { Ok(nilpotent_orbit_eval(&data, z)?.taus()) };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut overall = Vec::with_capacity(samples);
    let mut per_factor: Vec<Vec<(f64, f64)>> = vec![Vec::new(); n];
    for _ in 0..samples {
        let y = rng.gen_range(y0..=y1);
        let z: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.gen_range(-x_window..=x_window), y)).collect();
        let (_, delta) = family.lift_with_correction(&z)?;
        let orbit = orbit_of(&z)?;
        let ds: Vec<f64> = orbit.iter().zip(&delta).map(|(&o, &dl)| distance_from_delta(o, dl)).collect();
        for (j, &d) in ds.iter().enumerate() {
            per_factor[j].push((y, d));
        }
        overall.push((y, ds.iter().copied().fold(0.0, f64::max)));
    }
    let ray: Vec<f64> = (0..50)
        .map(|k| {
            let y = y0 + (y1 - y0) * k as f64 / 49.0;
            let z = vec![Complex64::new(0.0, y); n];
            let (_, delta) = family.lift_with_correction(&z)?;
            Ok(orbit_of(&z)?.iter().zip(&delta).map(|(&o, &dl)| distance_from_delta(o, dl)).fold(0.0, f64::max))
        })
        .collect::<Result<_, PeriodError>>()?;
    let all_zero = overall.iter().all(|p| p.1 == 0.0);
    let monotone = all_zero || ray.windows(2).all(|w| w[1] < w[0]);
    if all_zero {
        return Ok(DecayFit {
            k_hat: 0.0,
            beta_hat: 0.0,
            rate: 0.0,
            residual: 0.0,
            monotone,
            all_zero,
            factor_rates: vec![0.0; n],
            points: overall,
        });
    }
    if overall.iter().any(|p| !(p.1 > 0.0)) {
        return Err(PeriodError::Invalid("some distances vanish; log fit impossible".into()));
    }
    let (k_hat, beta_hat, rate, residual) = fit(&overall);
    let factor_rates = per_factor.iter().map(|pts| fit(pts).2).collect();
    Ok(DecayFit { k_hat, beta_hat, rate, residual, monotone, all_zero, factor_rates, points: overall })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn legendre_rate_is_two_pi() {
        let f = schmid_decay_check(Family::Legendre, 0.5, (2.0, 8.0), 300, 1).unwrap();
        assert!((f.rate - TAU).abs() < 0.05 * TAU, "{f:?}");
        assert!(f.residual < 0.1);
        assert!(f.monotone);
        assert!((f.beta_hat + 1.0).abs() < 0.2);
    }

    #[test]
    fn constant_family_has_zero_distance() {
        let f = schmid_decay_check(Family::Constant, 0.5, (2.0, 8.0), 50, 1).unwrap();
        assert!(f.all_zero && f.rate == 0.0);
    }

    #[test]
    fn product_rates_per_factor() {
        let f = schmid_decay_check(Family::Product, 0.5, (2.0, 8.0), 200, 2).unwrap();
        assert_eq!(f.factor_rates.len(), 2);
        for r in &f.factor_rates {
            assert!((r - TAU).abs() < 0.05 * TAU);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(schmid_decay_check(Family::Legendre, 0.5, (2.0, 8.0), 2, 1).unwrap_err(), PeriodError::TooFewSamples);
        assert!(matches!(
            schmid_decay_check(Family::Legendre, 0.5, (0.3, 8.0), 20, 1),
            Err(PeriodError::BelowThreshold { .. })
        ));
    }
}
