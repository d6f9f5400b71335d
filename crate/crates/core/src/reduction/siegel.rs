use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{iwasawa, GroupElement, ReductionError};

/// A point `x + iy` of the upper half plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpperHalfPoint {
    pub x: f64,
    pub y: f64,
}

impl UpperHalfPoint {
    pub fn new(x: f64, y: f64) -> Result<Self, ReductionError> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(ReductionError::NotInUpperHalfPlane);
        }
        Ok(Self { x, y })
    }

    pub fn from_complex(z: Complex64) -> Result<Self, ReductionError> {
        Self::new(z.re, z.im)
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }
}

/// Siegel set `U × A_t × K` for the standard minimal parabolic: unipotent
/// coordinates bounded by `u` in absolute value, every simple root above `t`.
/// For the upper half plane this is `{|x| ≤ u, y > t}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SiegelSet {
    pub t: f64,
    pub u: f64,
}

impl SiegelSet {
    pub fn new(t: f64, u: f64) -> Result<Self, ReductionError> {
        if !(t > 0.0) || !t.is_finite() || !(u >= 0.0) || !u.is_finite() {
            return Err(ReductionError::InvalidSiegelSet);
        }
        Ok(Self { t, u })
    }

    /// The standard set `{|x| ≤ 1/2, y > t}`.
    pub fn standard(t: f64) -> Result<Self, ReductionError> {
        Self::new(t, 0.5)
    }
}

pub fn siegel_membership_point(z: &UpperHalfPoint, s: &SiegelSet) -> bool {
    z.x.abs() <= s.u && z.y > s.t
}

pub fn siegel_membership(g: &GroupElement, s: &SiegelSet) -> Result<bool, ReductionError> {
    let h = iwasawa(g)?;
    Ok(h.simple_roots().iter().all(|&r| r > s.t) && h.max_unipotent_entry() <= s.u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    #[test]
    fn half_plane_examples() {
        let s = SiegelSet::standard(1.0).unwrap();
        assert!(siegel_membership_point(&UpperHalfPoint::new(0.0, 2.0).unwrap(), &s));
        assert!(!siegel_membership_point(&UpperHalfPoint::new(0.4, 0.5).unwrap(), &s));
        assert!(SiegelSet::new(0.0, 1.0).is_err());
    }

    #[test]
    fn group_and_point_agree() {
        let s = SiegelSet::new(1.5, 0.7).unwrap();
        for &(x, y) in &[(0.1, 2.0), (0.69, 1.6), (0.71, 3.0), (-0.3, 1.4), (0.0, 1.5001)] {
            let z = UpperHalfPoint::new(x, y).unwrap();
            let g = GroupElement::from_upper_half(z.to_complex()).unwrap();
            assert_eq!(siegel_membership(&g, &s).unwrap(), siegel_membership_point(&z, &s), "{z:?}");
        }
    }

    #[test]
    fn sl3_membership_matches_coordinates() {
        let g = GroupElement::normalized(DMatrix::from_row_slice(3, 3, &[3.0, 0.2, 0.1, 0.0, 1.0, 0.3, 0.0, 0.0, 0.4]))
            .unwrap();
        let h = iwasawa(&g).unwrap();
        let roots = h.simple_roots();
        let s = SiegelSet::new(roots[0].min(roots[1]) * 0.99, h.max_unipotent_entry() * 1.01).unwrap();
        assert!(siegel_membership(&g, &s).unwrap());
        let tight = SiegelSet::new(roots[0].max(roots[1]) * 1.01, 10.0).unwrap();
        assert!(!siegel_membership(&g, &tight).unwrap());
    }
}
