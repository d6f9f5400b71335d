use num_complex::Complex64;
use serde::Serialize;

use super::PeriodError;

/// The region `y_{σ(1)} ≥ ε y_{σ(2)} ≥ … ≥ ε^{n−1} y_{σ(n)}`, `y_{σ(n)} ≥ η`.
/// `ordering` holds zero-based factor indices.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectorSpec {
    pub ordering: Vec<usize>,
    pub eta: f64,
    pub epsilon: f64,
}

impl SectorSpec {
    pub fn new(ordering: Vec<usize>, eta: f64, epsilon: f64) -> Result<Self, PeriodError> {
        let mut sorted = ordering.clone();
        sorted.sort_unstable();
        if sorted != (0..ordering.len()).collect::<Vec<_>>() {
            return Err(PeriodError::Invalid("ordering is not a permutation".into()));
        }
        if !(eta > 0.0) || !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(PeriodError::Invalid("need η > 0 and ε ∈ (0, 1]".into()));
        }
        Ok(Self { ordering, eta, epsilon })
    }

    pub fn contains(&self, z: &[Complex64]) -> bool {
        if z.len() != self.ordering.len() {
            return false;
        }
        let ys: Vec<f64> = self.ordering.iter().map(|&j| z[j].im).collect();
        let chain = ys
            .windows(2)
            .enumerate()
            .all(|(k, w)| self.epsilon.powi(k as i32) * w[0] >= self.epsilon.powi(k as i32 + 1) * w[1]);
        chain && ys.last().is_some_and(|&y| y >= self.eta)
    }
}

/// Assigns each point the ordering by decreasing `Im z_j` (ties by index)
/// with `ε = 1`.
pub fn sector_decompose(points: &[Vec<Complex64>], eta: f64) -> Result<Vec<SectorSpec>, PeriodError> {
    points
        .iter()
        .map(|z| {
            if let Some(w) = z.iter().find(|w| w.im < eta) {
                return Err(PeriodError::BelowEta { y: w.im, eta });
            }
            let mut ordering: Vec<usize> = (0..z.len()).collect();
            ordering.sort_by(|&a, &b| z[b].im.total_cmp(&z[a].im).then(a.cmp(&b)));
            let spec = SectorSpec::new(ordering, eta, 1.0)?;
            debug_assert!(spec.contains(z));
            Ok(spec)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn examples() {
        let one = sector_decompose(&[vec![cx(0.0, 3.0)]], 1.0).unwrap();
        assert_eq!(one[0].ordering, vec![0]);
        let two = sector_decompose(&[vec![cx(0.0, 5.0), cx(0.3, 2.0)], vec![cx(0.0, 2.0), cx(0.0, 5.0)]], 1.0).unwrap();
        assert_eq!(two[0].ordering, vec![0, 1]);
        assert_eq!(two[1].ordering, vec![1, 0]);
        assert!(sector_decompose(&[vec![cx(0.0, 0.5)]], 1.0).is_err());
    }

    #[test]
    fn grid_is_covered() {
        let mut pts = Vec::new();
        for a in 0..10 {
            for b in 0..10 {
                for c in 0..10 {
                    pts.push(vec![cx(0.0, 1.0 + a as f64), cx(0.1, 1.0 + b as f64 * 0.7), cx(-0.2, 1.0 + c as f64 * 1.3)]);
                }
            }
        }
        let specs = sector_decompose(&pts, 1.0).unwrap();
        assert_eq!(specs.len(), 1000);
        assert!(specs.iter().zip(&pts).all(|(s, z)| s.contains(z)));
    }

    #[test]
    fn epsilon_relaxes_the_chain() {
        let s = SectorSpec::new(vec![0, 1], 1.0, 0.5).unwrap();
        assert!(s.contains(&[cx(0.0, 3.0), cx(0.0, 5.0)]));
        assert!(!s.contains(&[cx(0.0, 2.0), cx(0.0, 5.0)]));
    }
}
