use std::ops::{Add, Mul, Neg, Sub};

/// Closed interval with outward rounding after every operation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    fn rounded(lo: f64, hi: f64) -> Self {
        Self {
            lo: lo.next_down(),
            hi: hi.next_up(),
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn split(&self) -> (Self, Self) {
        let m = self.mid();
        (Self::new(self.lo, m), Self::new(m, self.hi))
    }

    pub fn sqr(&self) -> Self {
        let (a, b) = (self.lo * self.lo, self.hi * self.hi);
        if self.lo >= 0.0 {
            Self::rounded(a, b)
        } else if self.hi <= 0.0 {
            Self::rounded(b, a)
        } else {
            Self { lo: 0.0, hi: a.max(b).next_up() }
        }
    }

    pub fn scale(&self, k: f64) -> Self {
        if k >= 0.0 {
            Self::rounded(self.lo * k, self.hi * k)
        } else {
            Self::rounded(self.hi * k, self.lo * k)
        }
    }
}

impl Add for Interval {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::rounded(self.lo + o.lo, self.hi + o.hi)
    }
}

impl Sub for Interval {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::rounded(self.lo - o.hi, self.hi - o.lo)
    }
}

impl Neg for Interval {
    type Output = Self;
    fn neg(self) -> Self {
        Self { lo: -self.hi, hi: -self.lo }
    }
}

impl Mul for Interval {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let p = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self::rounded(lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encloses_results() {
        let a = Interval::new(-1.0, 2.0);
        let b = Interval::new(0.5, 3.0);
        let p = a * b;
        assert!(p.lo <= -3.0 && p.hi >= 6.0);
        let s = a.sqr();
        assert!(s.lo == 0.0 && s.hi >= 4.0);
        let d = a - b;
        assert!(d.lo <= -4.0 && d.hi >= 1.5);
        let t = Interval::point(0.1) + Interval::point(0.2);
        assert!(t.lo <= 0.1 + 0.2 && t.hi >= 0.3);
    }
}
