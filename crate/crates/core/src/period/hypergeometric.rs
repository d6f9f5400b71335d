use num_complex::Complex64;

use super::PeriodError;

const SERIES_RADIUS: f64 = 0.5;
const MAX_TERMS: usize = 2000;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn on_upper_cut(l: Complex64) -> bool {
    l.im == 0.0 && l.re >= 1.0
}

/// `₂F₁(1/2, 1/2; 1; λ)` by its power series, together with the logarithmic
/// companion `Σ c_n (4H_n − 4H_{2n}) λ^n`.
pub(crate) fn series_pair(l: Complex64) -> (Complex64, Complex64) {
    let mut coeff = 1.0f64;
    let mut pow = c(1.0);
    let mut f = c(1.0);
    let mut e = c(0.0);
    let (mut h_n, mut h_2n) = (0.0f64, 0.0f64);
    for n in 1..MAX_TERMS {
        let nf = n as f64;
        let r = (nf - 0.5) / nf;
        coeff *= r * r;
        pow *= l;
        h_n += 1.0 / nf;
        h_2n += 1.0 / (2.0 * nf - 1.0) + 1.0 / (2.0 * nf);
        let term = pow * coeff;
        f += term;
        e += term * (4.0 * (h_n - h_2n));
        if term.norm() < 1e-18 * f.norm() {
            break;
        }
    }
    (f, e)
}

/// `1 / AGM(1, √(1 − λ))`, valid off the cut `[1, ∞)`.
pub fn agm_period(l: Complex64) -> Result<Complex64, PeriodError> {
    if on_upper_cut(l) {
        return Err(PeriodError::BranchCut);
    }
    let mut a = c(1.0);
    let mut b = (c(1.0) - l).sqrt();
    for _ in 0..100 {
        let gap = (a - b).norm();
        if gap <= 4.0 * f64::EPSILON * a.norm() {
            return Ok(2.0 / (a + b));
        }
        let an = (a + b) * 0.5;
        let mut bn = (a * b).sqrt();
        if (an - bn).norm() > (an + bn).norm() {
            bn = -bn;
        }
        a = an;
        b = bn;
    }
    Err(PeriodError::NonConvergence)
}

/// The Legendre period `F(λ) = ₂F₁(1/2, 1/2; 1; λ)` on the principal branch:
/// power series for `|λ| ≤ 1/2`, arithmetic–geometric mean elsewhere.
pub fn hypergeometric_period(l: Complex64) -> Result<Complex64, PeriodError> {
    if !l.re.is_finite() || !l.im.is_finite() {
        return Err(PeriodError::Singular);
    }
    if l.norm() <= SERIES_RADIUS {
        return Ok(series_pair(l).0);
    }
    agm_period(l)
}

/// `F'(λ) = ₂F₁(3/2, 3/2; 2; λ) / 4` by its power series (`|λ| < 1`).
pub(crate) fn period_derivative(l: Complex64) -> Complex64 {
    let mut coeff = 1.0f64;
    let mut pow = c(1.0);
    let mut s = c(1.0);
    for n in 1..MAX_TERMS {
        let nf = n as f64;
        coeff *= (nf + 0.5) * (nf + 0.5) / (nf * (nf + 1.0));
        pow *= l;
        let term = pow * coeff;
        s += term;
        if term.norm() < 1e-18 * s.norm() {
            break;
        }
    }
    s * 0.25
}

fn check_tau_domain(l: Complex64) -> Result<(), PeriodError> {
    if l.norm() < 1e-300 || (l - 1.0).norm() < 1e-300 || !l.re.is_finite() || !l.im.is_finite() {
        return Err(PeriodError::Singular);
    }
    if l.im == 0.0 && (l.re <= 0.0 || l.re >= 1.0) {
        return Err(PeriodError::BranchCut);
    }
    Ok(())
}

/// `τ = i F(1−λ)/F(λ)` on the principal branch, using the logarithmic
/// expansion near `λ = 0` and `τ(λ) = −1/τ(1−λ)` near `λ = 1`.
pub fn legendre_tau(l: Complex64) -> Result<Complex64, PeriodError> {
    check_tau_domain(l)?;
    if l.norm() <= SERIES_RADIUS {
        return Ok(tau_near_zero(l));
    }
    if (c(1.0) - l).norm() <= SERIES_RADIUS {
        return Ok(-1.0 / tau_near_zero(c(1.0) - l));
    }
    legendre_tau_agm(l)
}

/// The same branch of `τ` computed from two AGM evaluations only.
pub fn legendre_tau_agm(l: Complex64) -> Result<Complex64, PeriodError> {
    check_tau_domain(l)?;
    Ok(Complex64::i() * agm_period(c(1.0) - l)? / agm_period(l)?)
}

fn tau_near_zero(l: Complex64) -> Complex64 {
    let (f, e) = series_pair(l);
    Complex64::i() / std::f64::consts::PI * ((c(16.0) / l).ln() + e / f)
}

/// Correction `(i/π) E(λ)/F(λ)` to the leading term of `τ` near `λ = 0`.
pub(crate) fn tau_correction(l: Complex64) -> Complex64 {
    let (f, e) = series_pair(l);
    Complex64::i() / std::f64::consts::PI * e / f
}

/// Continues the solutions `(i F(1−λ), F(λ))` of the Picard–Fuchs equation
/// `λ(1−λ)F'' + (1−2λ)F' − F/4 = 0` once counterclockwise around `|λ| = 1/2`
/// with classical RK4 and returns the monodromy matrix in that basis.
pub fn legendre_monodromy(steps: usize) -> [[Complex64; 2]; 2] {
    let l0 = 0.5;
    let f = hypergeometric_period(c(l0)).expect("inside the disc");
    let fp = period_derivative(c(l0));
    // ω₂ = i F(1−λ): value i F(1/2), derivative −i F'(1/2)
    let starts = [
        [Complex64::i() * f, -Complex64::i() * fp],
        [f, fp],
    ];
    let rhs = |phi: f64, y: [Complex64; 2]| -> [Complex64; 2] {
        let l = Complex64::from_polar(l0, phi);
        let dl = Complex64::i() * l;
        let second = (y[0] * 0.25 - (c(1.0) - l * 2.0) * y[1]) / (l * (c(1.0) - l));
        [dl * y[1], dl * second]
    };
    let h = std::f64::consts::TAU / steps as f64;
    let ends: Vec<[Complex64; 2]> = starts
        .iter()
        .map(|&y0| {
            let mut y = y0;
            for k in 0..steps {
                let phi = k as f64 * h;
                let add = |a: [Complex64; 2], b: [Complex64; 2], s: f64| [a[0] + b[0] * s, a[1] + b[1] * s];
                let k1 = rhs(phi, y);
                let k2 = rhs(phi + h / 2.0, add(y, k1, h / 2.0));
                let k3 = rhs(phi + h / 2.0, add(y, k2, h / 2.0));
                let k4 = rhs(phi + h, add(y, k3, h));
                for i in 0..2 {
                    y[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0);
                }
            }
            y
        })
        .collect();
    // M · [ω₂ ω₂'; ω₁ ω₁'] = [ω₂~ ω₂~'; ω₁~ ω₁~']
    let a = [[starts[0][0], starts[0][1]], [starts[1][0], starts[1][1]]];
    let b = [[ends[0][0], ends[0][1]], [ends[1][0], ends[1][1]]];
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let inv = [[a[1][1] / det, -a[0][1] / det], [-a[1][0] / det, a[0][0] / det]];
    let mut m = [[c(0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = b[i][0] * inv[0][j] + b[i][1] * inv[1][j];
        }
    }
    m
}
