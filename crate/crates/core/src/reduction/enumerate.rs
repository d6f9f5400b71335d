use rayon::prelude::*;
use serde::Serialize;

use super::{Interval, ReductionError, SiegelSet, Sl2Z, UpperHalfPoint};

/// Boxes narrower than this that remain undecided count as intersecting.
const TOUCH_WIDTH: f64 = 1e-9;
const MAX_BOXES: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntersectionHit {
    pub gamma: Sl2Z,
    /// A point `z` of the first Siegel set with `γ z` (approximately) in the second.
    pub witness: UpperHalfPoint,
    /// False when the intersection was only established up to touching
    /// (the closures meet but interval arithmetic cannot separate them).
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnumerationReport {
    pub hits: Vec<IntersectionHit>,
    /// No `γ` of larger height can satisfy the necessary analytic bounds.
    pub analytic_cutoff: i64,
    pub height_bound: i64,
    /// Whether `height_bound` reaches the analytic cutoff.
    pub complete: bool,
    pub candidates_tested: usize,
}

impl EnumerationReport {
    pub fn gammas(&self) -> Vec<Sl2Z> {
        self.hits.iter().map(|h| h.gamma).collect()
    }
}

struct Bounds {
    cutoff: i64,
}

fn analytic_bounds(s1: &SiegelSet, s2: &SiegelSet) -> Bounds {
    let slack = 1.0 + 1e-12;
    let c_max = ((1.0 / (s1.t * s2.t)) * slack).sqrt().floor() as i64;
    let mut cutoff = 1 + (s1.u + s2.u).floor() as i64;
    for c in 1..=c_max {
        let cf = c as f64;
        let d = (cf * s1.u + 1.0 / (2.0 * cf * s2.t)) * slack;
        let a = (cf * s2.u + 1.0 / (2.0 * cf * s1.t)) * slack;
        let b = ((a * d + 1.0) / cf).floor();
        cutoff = cutoff.max(c).max(d.floor() as i64).max(a.floor() as i64).max(b as i64);
    }
    Bounds { cutoff }
}

/// Necessary conditions for `γ · cl(S1) ∩ cl(S2) ≠ ∅`.
fn prefilter(g: &Sl2Z, s1: &SiegelSet, s2: &SiegelSet) -> bool {
    let slack = 1.0 + 1e-12;
    if g.c == 0 {
        return (g.b as f64).abs() <= (s1.u + s2.u) * slack;
    }
    let c = (g.c as f64).abs();
    c * c <= slack / (s1.t * s2.t)
        && (g.d as f64).abs() <= (c * s1.u + 1.0 / (2.0 * c * s2.t)) * slack
        && (g.a as f64).abs() <= (c * s2.u + 1.0 / (2.0 * c * s1.t)) * slack
}

/// Searches `cl(S1)` for `z` with `γ z ∈ cl(S2)` by interval branch and bound.
fn decide(g: &Sl2Z, s1: &SiegelSet, s2: &SiegelSet) -> Option<(UpperHalfPoint, bool)> {
    let (a, b, c, d) = (g.a as f64, g.b as f64, g.c as f64, g.d as f64);
    let y_max = if g.c == 0 { s1.t.max(s2.t) + 1.0 } else { 1.0 / (c * c * s2.t) };
    if y_max < s1.t {
        return None;
    }
    let eval = |x: Interval, y: Interval| -> [Interval; 3] {
        let lin = x.scale(c) + Interval::point(d);
        let den = lin.sqr() + y.sqr().scale(c * c);
        let re = (x.scale(a) + Interval::point(b)) * lin + y.sqr().scale(a * c);
        let su = den.scale(s2.u);
        [y - den.scale(s2.t), su - re, su + re]
    };
    let mut stack = vec![(Interval::new(-s1.u, s1.u), Interval::new(s1.t, y_max))];
    let mut boxes = 0;
    while let Some((x, y)) = stack.pop() {
        boxes += 1;
        let g = eval(x, y);
        if g.iter().any(|v| v.hi < 0.0) {
            continue;
        }
        let (xm, ym) = (x.mid(), y.mid());
        let witness = UpperHalfPoint { x: xm, y: ym };
        if eval(Interval::point(xm), Interval::point(ym)).iter().all(|v| v.lo >= 0.0) {
            return Some((witness, true));
        }
        if (x.width() < TOUCH_WIDTH && y.width() < TOUCH_WIDTH) || boxes > MAX_BOXES {
            return Some((witness, false));
        }
        if x.width() >= y.width() {
            let (l, r) = x.split();
            stack.push((l, y));
            stack.push((r, y));
        } else {
            let (l, r) = y.split();
            stack.push((x, l));
            stack.push((x, r));
        }
    }
    None
}

/// All `γ ∈ SL(2, Z)` of height at most `height_bound` with `γ·S1 ∩ S2 ≠ ∅`
/// (closures; touching counts as intersecting). The result is symmetric:
/// `γ` is listed for `(S1, S2)` iff `γ⁻¹` is listed for `(S2, S1)`.
pub fn siegel_intersection_enumerate(
    s1: &SiegelSet,
    s2: &SiegelSet,
    height_bound: i64,
) -> Result<EnumerationReport, ReductionError> {
    if height_bound < 1 {
        return Err(ReductionError::InvalidSiegelSet);
    }
    let bounds = analytic_bounds(s1, s2);
    let bound = height_bound;
    let results: Vec<(usize, Vec<IntersectionHit>)> = (-bound..=bound)
        .into_par_iter()
        .map(|c| {
            let mut tested = 0;
            let mut hits = Vec::new();
            for a in -bound..=bound {
                for d in -bound..=bound {
                    let bs: Vec<i64> = if c == 0 {
                        if a * d == 1 { (-bound..=bound).collect() } else { Vec::new() }
                    } else if (a * d - 1) % c == 0 {
                        let b = (a * d - 1) / c;
                        if b.abs() <= bound { vec![b] } else { Vec::new() }
                    } else {
                        Vec::new()
                    };
                    for b in bs {
                        let g = Sl2Z { a, b, c, d };
                        tested += 1;
                        if !prefilter(&g, s1, s2) {
                            continue;
                        }
                        let hit = decide(&g, s1, s2).or_else(|| {
                            let inv = g.inverse();
                            decide(&inv, s2, s1).map(|(w, cert)| {
                                let z = inv.act(w.to_complex());
                                (UpperHalfPoint { x: z.re, y: z.im }, cert)
                            })
                        });
                        if let Some((witness, certified)) = hit {
                            hits.push(IntersectionHit { gamma: g, witness, certified });
                        }
                    }
                }
            }
            (tested, hits)
        })
        .collect();
    let candidates_tested = results.iter().map(|r| r.0).sum();
    let mut hits: Vec<IntersectionHit> = results.into_iter().flat_map(|r| r.1).collect();
    hits.sort_by_key(|h| h.gamma);
    Ok(EnumerationReport {
        hits,
        analytic_cutoff: bounds.cutoff,
        height_bound,
        complete: bounds.cutoff <= height_bound,
        candidates_tested,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn set(gs: &[Sl2Z]) -> BTreeSet<Sl2Z> {
        gs.iter().copied().collect()
    }

    fn translations() -> Vec<Sl2Z> {
        let mut v = Vec::new();
        for k in -1..=1 {
            v.push(Sl2Z::translation(k));
            v.push(Sl2Z::translation(k).neg());
        }
        v
    }

    #[test]
    fn above_one_only_translations() {
        let s = SiegelSet::standard(1.1).unwrap();
        let r = siegel_intersection_enumerate(&s, &s, 20).unwrap();
        assert_eq!(set(&r.gammas()), set(&translations()));
        assert!(r.complete);
    }

    #[test]
    fn at_one_adds_inversion() {
        let s = SiegelSet::standard(1.0).unwrap();
        let r = siegel_intersection_enumerate(&s, &s, 20).unwrap();
        let mut expected = translations();
        expected.push(Sl2Z::S);
        expected.push(Sl2Z::S.neg());
        assert_eq!(set(&r.gammas()), set(&expected));
    }

    #[test]
    fn symmetric_for_different_sets() {
        let s1 = SiegelSet::new(0.4, 0.5).unwrap();
        let s2 = SiegelSet::new(0.7, 1.0).unwrap();
        let a = siegel_intersection_enumerate(&s1, &s2, 20).unwrap();
        let b = siegel_intersection_enumerate(&s2, &s1, 20).unwrap();
        let inv: BTreeSet<Sl2Z> = b.gammas().iter().map(Sl2Z::inverse).collect();
        assert_eq!(set(&a.gammas()), inv);
        assert!(a.hits.len() > 6);
    }

    #[test]
    fn far_apart_heights_only_translations() {
        let low = SiegelSet::new(3.0, 0.5).unwrap();
        let high = SiegelSet::new(5.0, 0.5).unwrap();
        let r = siegel_intersection_enumerate(&low, &high, 20).unwrap();
        assert!(r.gammas().iter().all(|g| g.c == 0));
    }
}
