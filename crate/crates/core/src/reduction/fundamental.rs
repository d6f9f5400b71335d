use num_complex::Complex64;

use super::{ReductionError, Sl2Z, UpperHalfPoint};

/// Points this close to the unit circle are treated as lying on it.
const CIRCLE_TOL: f64 = 1e-14;

/// Closed fundamental domain with the tie-breaking used by [`reduce_sl2z`]:
/// `x ∈ [-1/2, 1/2)`, `|z| ≥ 1`, and `x ≤ 0` when `|z| = 1`.
pub fn in_fundamental_domain(z: &UpperHalfPoint) -> bool {
    let r2 = z.x * z.x + z.y * z.y;
    (-0.5..0.5).contains(&z.x) && r2 >= 1.0 - CIRCLE_TOL && (r2 > 1.0 + CIRCLE_TOL || z.x <= 0.0)
}

/// Reduces `z` into the fundamental domain, returning `z0 = γ·z` and `γ`
/// (normalized so that `c > 0`, or `c = 0` and `d > 0`).
pub fn reduce_sl2z(z: &UpperHalfPoint) -> Result<(UpperHalfPoint, Sl2Z), ReductionError> {
    if !(z.y > 0.0) {
        return Err(ReductionError::NotInUpperHalfPlane);
    }
    let mut w = z.to_complex();
    let mut g = Sl2Z::IDENTITY;
    for _ in 0..10_000 {
        let m = (w.re + 0.5).floor();
        if m != 0.0 {
            w.re -= m;
            g = Sl2Z::translation(-(m as i64)).mul(&g);
        }
        if w.norm_sqr() < 1.0 - CIRCLE_TOL {
            w = -Complex64::new(1.0, 0.0) / w;
            g = Sl2Z::S.mul(&g);
            continue;
        }
        if w.re > 0.0 && (w.norm_sqr() - 1.0).abs() <= CIRCLE_TOL {
            w = Complex64::new(-w.re, w.im);
            g = Sl2Z::S.mul(&g);
        }
        break;
    }
    Ok((UpperHalfPoint::from_complex(w)?, g.normalized()))
}

/// `exp(2πi x) · exp(-2π/t)`.
pub fn bs_to_bb_chart(x: f64, t: f64) -> Result<Complex64, ReductionError> {
    if !(t > 0.0) {
        return Err(ReductionError::NonPositiveHeight);
    }
    Ok(Complex64::from_polar((-2.0 * std::f64::consts::PI / t).exp(), 2.0 * std::f64::consts::PI * x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> UpperHalfPoint {
        UpperHalfPoint::new(x, y).unwrap()
    }

    #[test]
    fn translation_only() {
        let (z0, g) = reduce_sl2z(&p(5.0, 1.0)).unwrap();
        assert_eq!((z0.x, z0.y), (0.0, 1.0));
        assert_eq!(g, Sl2Z::translation(-5));
    }

    #[test]
    fn already_reduced() {
        let (z0, g) = reduce_sl2z(&p(0.25, 2.0)).unwrap();
        assert_eq!(z0, p(0.25, 2.0));
        assert_eq!(g, Sl2Z::IDENTITY);
    }

    #[test]
    fn small_point_matches_exhaustive_search() {
        let z = p(0.1, 0.1);
        let (z0, g) = reduce_sl2z(&z).unwrap();
        assert!(in_fundamental_domain(&z0));
        assert!((g.act(z.to_complex()) - z0.to_complex()).norm() < 1e-12);
        let mut found = Vec::new();
        for a in -10i64..=10 {
            for b in -10i64..=10 {
                for c in 0i64..=10 {
                    for d in -10i64..=10 {
                        if let Some(h) = Sl2Z::new(a, b, c, d) {
                            if h.normalized() != h {
                                continue;
                            }
                            let w = h.act(z.to_complex());
                            if in_fundamental_domain(&p(w.re, w.im)) {
                                found.push(h);
                            }
                        }
                    }
                }
            }
        }
        assert_eq!(found, vec![g]);
    }

    #[test]
    fn unit_circle_tie_break() {
        let (z0, g) = reduce_sl2z(&p(0.28, 0.96)).unwrap();
        assert!((z0.x + 0.28).abs() < 1e-12 && (z0.y - 0.96).abs() < 1e-12);
        assert_eq!(g, Sl2Z::S);
    }

    #[test]
    fn chart_values() {
        let v = bs_to_bb_chart(0.0, 1.0).unwrap();
        assert!((v.re - 0.001_867_442_731_707_988_4).abs() < 1e-15 && v.im == 0.0);
        let w = bs_to_bb_chart(0.25, 0.5).unwrap();
        let e = (-4.0 * std::f64::consts::PI).exp();
        assert!(w.re.abs() < 1e-20 && (w.im - e).abs() < 1e-18);
        assert!(bs_to_bb_chart(0.1, 1e-3).unwrap().norm() < 1e-300);
        assert!(bs_to_bb_chart(0.0, 0.0).is_err());
    }
}
