use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Serialize, Serializer};

use super::hypergeometric::{legendre_tau, tau_correction};
use super::PeriodError;
use crate::exactlin::{ExactMatrix, ExactScalar, Filtration, Subspace};
use crate::mhs::{catalog, polarized_mhs_check, MixedHodge, PolarizationForm};
use crate::reduction::{GroupElement, UpperHalfPoint};
use crate::weightfilt::NilpotentOperator;

/// Drift below which the nilpotent orbit is taken to approximate the period map.
const VALIDITY_DRIFT: f64 = 1e-3;

/// Built-in variations of Hodge structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `y² = x(x−1)(x−λ)` near `λ = 0`, in the coordinate `q = λ/16`.
    Legendre,
    /// Two independent Legendre fibers.
    Product,
    /// Constant weight 1 structure at `τ = i` with trivial monodromy.
    Constant,
}

impl FromStr for Family {
    type Err = PeriodError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "legendre" => Ok(Self::Legendre),
            "product" => Ok(Self::Product),
            "constant" => Ok(Self::Constant),
            other => Err(PeriodError::UnsupportedFamily(other.to_string())),
        }
    }
}

/// Nilpotent orbit data `(N_1, …, N_n; F)` together with the weight and the
/// polarization.
#[derive(Clone, Debug, PartialEq)]
pub struct NilpotentOrbitData {
    ns: Vec<NilpotentOperator>,
    limit: MixedHodge,
    weight: i64,
    polarization: PolarizationForm,
}

impl NilpotentOrbitData {
    /// Validates pairwise commutation and that `Σ N_j` polarizes the limit.
    pub fn new(
        ns: Vec<NilpotentOperator>,
        limit: MixedHodge,
        weight: i64,
        polarization: PolarizationForm,
    ) -> Result<Self, PeriodError> {
        let dim = limit.dim();
        if ns.is_empty() || ns.iter().any(|n| n.dim() != dim) {
            return Err(PeriodError::Invalid("need at least one operator of the limit's dimension".into()));
        }
        for (a, na) in ns.iter().enumerate() {
            for nb in &ns[a + 1..] {
                if !na.matrix().bracket(nb.matrix()).is_zero() {
                    return Err(PeriodError::Invalid("monodromy logarithms do not commute".into()));
                }
            }
        }
        let sum = ns.iter().skip(1).fold(ns[0].matrix().clone(), |acc, n| &acc + n.matrix());
        let report = polarized_mhs_check(&limit, &NilpotentOperator::new(sum)?, &polarization, weight)?;
        if !report.holds() {
            return Err(PeriodError::Invalid(format!("limit is not polarized: {report:?}")));
        }
        Ok(Self { ns, limit, weight, polarization })
    }

    /// Skips validation; used to probe deliberately wrong operators.
    pub fn unchecked(ns: Vec<NilpotentOperator>, limit: MixedHodge, weight: i64, polarization: PolarizationForm) -> Self {
        Self { ns, limit, weight, polarization }
    }

    pub fn ns(&self) -> &[NilpotentOperator] {
        &self.ns
    }

    pub fn limit(&self) -> &MixedHodge {
        &self.limit
    }

    pub fn limit_f(&self) -> &Filtration {
        self.limit.f()
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn polarization(&self) -> &PolarizationForm {
        &self.polarization
    }

    pub fn dim(&self) -> usize {
        self.limit.dim()
    }
}

/// Hodge filtration `F¹` of a weight 1 structure, as a complex basis.
#[derive(Clone, Debug, PartialEq)]
pub struct HodgeFrame {
    basis: DMatrix<Complex64>,
}

impl Serialize for HodgeFrame {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let taus: Vec<[f64; 2]> = self.taus().iter().map(|t| [t.re, t.im]).collect();
        taus.serialize(s)
    }
}

impl HodgeFrame {
    pub fn new(basis: DMatrix<Complex64>) -> Self {
        Self { basis }
    }

    /// `F¹ = ⊕_j span(τ_j e_{2j} + e_{2j+1})`.
    pub fn from_taus(taus: &[Complex64]) -> Self {
        let n = taus.len();
        let mut basis = DMatrix::zeros(2 * n, n);
        for (j, t) in taus.iter().enumerate() {
            basis[(2 * j, j)] = *t;
            basis[(2 * j + 1, j)] = Complex64::new(1.0, 0.0);
        }
        Self { basis }
    }

    pub fn basis(&self) -> &DMatrix<Complex64> {
        &self.basis
    }

    /// Period point of each `2×2` block; NaN when the block has no `F¹` line
    /// or the line is at infinity.
    pub fn taus(&self) -> Vec<Complex64> {
        (0..self.basis.nrows() / 2)
            .map(|j| {
                let col = (0..self.basis.ncols())
                    .max_by(|&a, &b| {
                        let na = self.basis[(2 * j, a)].norm() + self.basis[(2 * j + 1, a)].norm();
                        let nb = self.basis[(2 * j, b)].norm() + self.basis[(2 * j + 1, b)].norm();
                        na.total_cmp(&nb)
                    })
                    .expect("non-empty frame");
                self.basis[(2 * j, col)] / self.basis[(2 * j + 1, col)]
            })
            .collect()
    }

    pub fn in_domain(&self) -> bool {
        self.taus().iter().all(|t| t.im > 0.0 && t.re.is_finite())
    }
}

fn zero2() -> NilpotentOperator {
    NilpotentOperator::new(ExactMatrix::zeros(2, 2)).expect("zero is nilpotent")
}

/// Exact basis of `sp(Q) = {X : XᵀQ + QX = 0}`.
fn symplectic_algebra(q: &ExactMatrix) -> Vec<ExactMatrix> {
    let n = q.rows();
    let mut rows = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let mut row = vec![ExactScalar::zero(); n * n];
            // (XᵀQ + QX)_{ab} = Σ_i X_{ia} Q_{ib} + Σ_i Q_{ai} X_{ib}
            for i in 0..n {
                row[i * n + a] += q.get(i, b);
                row[i * n + b] += q.get(a, i);
            }
            rows.push(row);
        }
    }
    let constraints = ExactMatrix::from_rows(rows).expect("square constraint system");
    let basis = Subspace::span(n * n, &constraints.kernel());
    basis.basis().iter().map(|v| ExactMatrix::unflatten(n, v)).collect()
}

impl Family {
    pub fn factors(&self) -> usize {
        match self {
            Self::Legendre | Self::Constant => 1,
            Self::Product => 2,
        }
    }

    pub fn orbit_data(&self) -> NilpotentOrbitData {
        let (ns, limit, q) = match self {
            Self::Legendre => (vec![catalog::legendre_n()], catalog::legendre_limit(), catalog::symplectic_form()),
            Self::Product => (
                vec![catalog::product_n1(), catalog::product_n2()],
                catalog::product_limit(),
                catalog::product_form(),
            ),
            Self::Constant => (vec![zero2()], catalog::pure_weight_one(ExactScalar::i()), catalog::symplectic_form()),
        };
        NilpotentOrbitData::new(ns, limit, 1, q).expect("built-in data is polarized")
    }

    /// Lie algebra of the group acting on the period domain: `sp(Q)` on each
    /// two-dimensional factor.
    pub fn lie_algebra(&self) -> Vec<ExactMatrix> {
        let q = catalog::symplectic_form().matrix().clone();
        let factor = symplectic_algebra(&q);
        let k = self.factors();
        let mut out = Vec::new();
        for j in 0..k {
            for x in &factor {
                let blocks: Vec<ExactMatrix> =
                    (0..k).map(|i| if i == j { x.clone() } else { ExactMatrix::zeros(2, 2) }).collect();
                out.push(ExactMatrix::block_diag(&blocks));
            }
        }
        out
    }

    /// `(Φ̃(z), Φ̃(z) − θ(z))` per factor, the difference computed without
    /// cancellation where possible.
    pub(crate) fn lift_with_correction(&self, z: &[Complex64]) -> Result<(Vec<Complex64>, Vec<Complex64>), PeriodError> {
        if z.len() != self.factors() {
            return Err(PeriodError::FactorMismatch { expected: self.factors(), found: z.len() });
        }
        if let Some(w) = z.iter().find(|w| !(w.im > 0.0)) {
            return Err(PeriodError::BelowEta { y: w.im, eta: 0.0 });
        }
        match self {
            Self::Constant => Ok((vec![Complex64::i()], vec![Complex64::new(0.0, 0.0)])),
            Self::Legendre | Self::Product => {
                let pairs: Result<Vec<_>, _> = z.iter().map(|&w| legendre_lift(w)).collect();
                Ok(pairs?.into_iter().unzip())
            }
        }
    }

    /// Smallest sampled `y` beyond which `d(Φ̃, θ)` stays below `1e−3` on
    /// the lines `Re z ∈ {0, 1/2}`.
    pub fn validity_threshold(&self) -> f64 {
        if *self == Self::Constant {
            return 0.0;
        }
        let mut threshold = 0.0;
        for k in (1..=1000).rev() {
            let y = k as f64 * 0.01;
            let ok = [0.0, 0.5].iter().all(|&x| match legendre_lift(Complex64::new(x, y)) {
                Ok((phi, delta)) => distance_from_delta(phi - delta, delta) < VALIDITY_DRIFT,
                Err(_) => false,
            });
            if !ok {
                threshold = y + 0.01;
                break;
            }
        }
        threshold
    }
}

/// `Φ̃(z)` for one Legendre factor: `2z + (i/π)E(λ)/F(λ)` with `λ = 16 e^{2πiz}`
/// while `|λ| ≤ 1/2`, otherwise the principal branch shifted by the integer
/// translation matching `2 Re z`.
fn legendre_lift(z: Complex64) -> Result<(Complex64, Complex64), PeriodError> {
    let orbit = z * 2.0;
    let l = (Complex64::i() * std::f64::consts::TAU * z).exp() * 16.0;
    if l.norm() <= 0.5 {
        let delta = tau_correction(l);
        return Ok((orbit + delta, delta));
    }
    let t = legendre_tau(l)?;
    let m = ((orbit.re - t.re) / 2.0).round();
    let phi = t + 2.0 * m;
    Ok((phi, phi - orbit))
}

/// `2 asinh(|Δ| / (2 √(Im a · Im (a+Δ))))`.
pub(crate) fn distance_from_delta(a: Complex64, delta: Complex64) -> f64 {
    let b = a + delta;
    2.0 * (delta.norm() / (2.0 * (a.im * b.im).sqrt())).asinh()
}

/// Maximum over factors of the hyperbolic distance.
pub fn invariant_distance(a: &HodgeFrame, b: &HodgeFrame) -> Result<f64, PeriodError> {
    let (ta, tb) = (a.taus(), b.taus());
    if ta.len() != tb.len() {
        return Err(PeriodError::FactorMismatch { expected: ta.len(), found: tb.len() });
    }
    if !a.in_domain() || !b.in_domain() {
        return Err(PeriodError::NotInDomain);
    }
    Ok(ta.iter().zip(&tb).map(|(&x, &y)| distance_from_delta(x, y - x)).fold(0.0, f64::max))
}

/// `θ(z) = exp(Σ z_j N_j) F`, with `z ∈ Cⁿ` arbitrary.
pub fn nilpotent_orbit_eval(d: &NilpotentOrbitData, z: &[Complex64]) -> Result<HodgeFrame, PeriodError> {
    if z.len() != d.ns.len() {
        return Err(PeriodError::FactorMismatch { expected: d.ns.len(), found: z.len() });
    }
    let dim = d.dim();
    let mut x = DMatrix::<Complex64>::zeros(dim, dim);
    for (zj, n) in z.iter().zip(&d.ns) {
        x += n.matrix().to_complex() * *zj;
    }
    let mut g = DMatrix::<Complex64>::identity(dim, dim);
    let mut term = DMatrix::<Complex64>::identity(dim, dim);
    for k in 1..=dim {
        term = &term * &x / Complex64::new(k as f64, 0.0);
        g += &term;
    }
    let f1 = d.limit_f().get(1);
    let basis = DMatrix::from_fn(dim, f1.dim(), |i, j| f1.basis()[j][i].to_complex());
    Ok(HodgeFrame::new(g * basis))
}

/// `θ(z)` in exact arithmetic for Gaussian rational `z`.
pub fn nilpotent_orbit_exact(d: &NilpotentOrbitData, z: &[ExactScalar]) -> Result<Filtration, PeriodError> {
    if z.len() != d.ns.len() {
        return Err(PeriodError::FactorMismatch { expected: d.ns.len(), found: z.len() });
    }
    let dim = d.dim();
    let x = z
        .iter()
        .zip(&d.ns)
        .fold(ExactMatrix::zeros(dim, dim), |acc, (zj, n)| &acc + &n.matrix().scale(zj));
    let g = x.exp_nilpotent().ok_or_else(|| PeriodError::Invalid("Σ z_j N_j is not nilpotent".into()))?;
    Ok(d.limit_f().transform(&g))
}

/// One evaluation of the lifted period map next to its nilpotent orbit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeriodSample {
    pub z: Vec<UpperHalfPoint>,
    /// `exp(2πi z_j)` as `[re, im]`.
    pub q: Vec<[f64; 2]>,
    pub phi: HodgeFrame,
    pub orbit: HodgeFrame,
    pub distance: f64,
}

/// `Φ̃(z)` together with `θ(z)` and their distance.
pub fn local_lift(z: &[Complex64], family: Family) -> Result<PeriodSample, PeriodError> {
    let threshold = family.validity_threshold();
    if let Some(w) = z.iter().find(|w| w.im < threshold) {
        return Err(PeriodError::BelowThreshold { y: w.im, threshold });
    }
    let (phi, delta) = family.lift_with_correction(z)?;
    let data = family.orbit_data();
    let orbit = nilpotent_orbit_eval(&data, z)?;
    let orbit_taus = orbit.taus();
    let distance = orbit_taus.iter().zip(&delta).map(|(&o, &dl)| distance_from_delta(o, dl)).fold(0.0, f64::max);
    Ok(PeriodSample {
        z: z.iter().map(|w| UpperHalfPoint { x: w.re, y: w.im }).collect(),
        q: z.iter()
            .map(|w| {
                let q = (Complex64::i() * std::f64::consts::TAU * w).exp();
                [q.re, q.im]
            })
            .collect(),
        phi: HodgeFrame::from_taus(&phi),
        orbit,
        distance,
    })
}

/// Group element `h` with `h·o = frame`, where `o = θ(i, …, i)`, as a product
/// of the standard sections `n(x)a(y)`.
pub fn period_section(frame: &HodgeFrame, base: &HodgeFrame) -> Result<GroupElement, PeriodError> {
    let section = |t: Complex64| GroupElement::from_upper_half(t);
    let factors: Result<Vec<GroupElement>, _> = frame
        .taus()
        .iter()
        .zip(base.taus())
        .map(|(&t, b)| Ok(section(t)?.mul(&section(b)?.inverse())))
        .collect();
    Ok(GroupElement::product(&factors.map_err(PeriodError::Reduction)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn orbit_at_zero_is_limit() {
        let d = Family::Legendre.orbit_data();
        let f = nilpotent_orbit_eval(&d, &[cx(0.0, 0.0)]).unwrap();
        assert_eq!(f.taus()[0], cx(0.0, 0.0));
        let g = nilpotent_orbit_eval(&d, &[cx(0.0, 3.0)]).unwrap();
        assert!((g.taus()[0] - cx(0.0, 6.0)).norm() < 1e-14);
        let p = nilpotent_orbit_eval(&Family::Product.orbit_data(), &[cx(0.1, 2.0), cx(-0.2, 5.0)]).unwrap();
        let t = p.taus();
        assert!((t[0] - cx(0.2, 4.0)).norm() < 1e-14 && (t[1] - cx(-0.4, 10.0)).norm() < 1e-14);
    }

    #[test]
    fn exact_orbit_is_equivariant() {
        let d = Family::Product.orbit_data();
        let z = [ExactScalar::gaussian(1, 3), ExactScalar::from_frac(1, 2)];
        let shifted = [&z[0] + &ExactScalar::one(), z[1].clone()];
        let a = nilpotent_orbit_exact(&d, &shifted).unwrap();
        let t1 = d.ns()[0].matrix().exp_nilpotent().unwrap();
        let b = nilpotent_orbit_exact(&d, &z).unwrap().transform(&t1);
        assert_eq!(a, b);
    }

    #[test]
    fn distance_examples_and_invariance() {
        let i = HodgeFrame::from_taus(&[cx(0.0, 1.0)]);
        let two_i = HodgeFrame::from_taus(&[cx(0.0, 2.0)]);
        assert_eq!(invariant_distance(&i, &i).unwrap(), 0.0);
        assert!((invariant_distance(&i, &two_i).unwrap() - 2f64.ln()).abs() < 1e-15);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let (a, b) = (cx(0.3, 0.7), cx(-1.2, 2.5));
        let d0 = invariant_distance(&HodgeFrame::from_taus(&[a]), &HodgeFrame::from_taus(&[b])).unwrap();
        for _ in 0..50 {
            let (p, q, r) = (rng.gen_range(0.2..3.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            // [[p, q], [r, (1 + q r)/p]]
            let s = (1.0 + q * r) / p;
            let act = |w: Complex64| (w * p + q) / (w * r + s);
            let d1 = invariant_distance(&HodgeFrame::from_taus(&[act(a)]), &HodgeFrame::from_taus(&[act(b)])).unwrap();
            assert!((d1 - d0).abs() < 1e-10);
        }
    }

    #[test]
    fn lift_is_equivariant_and_routes_agree() {
        for &(x, y) in &[(0.1, 1.5), (0.45, 3.0), (-0.3, 0.8), (0.2, 0.6)] {
            let (a, _) = legendre_lift(cx(x, y)).unwrap();
            let (b, _) = legendre_lift(cx(x + 1.0, y)).unwrap();
            assert!((b - a - 2.0).norm() < 1e-8, "{x} {y}");
        }
        // |λ| ≈ 0.36: series branch vs principal branch
        let z = cx(0.2, 0.6);
        let l = (Complex64::i() * std::f64::consts::TAU * z).exp() * 16.0;
        let (phi, _) = legendre_lift(z).unwrap();
        let t = super::super::legendre_tau_agm(l).unwrap();
        assert!((phi - t - 2.0 * ((phi.re - t.re) / 2.0).round()).norm() < 1e-12);
    }

    #[test]
    fn threshold_and_samples() {
        let t = Family::Legendre.validity_threshold();
        assert!(t > 0.8 && t < 1.5, "{t}");
        assert!(matches!(local_lift(&[cx(0.0, 0.5)], Family::Legendre), Err(PeriodError::BelowThreshold { .. })));
        let s = local_lift(&[cx(0.25, 3.0)], Family::Legendre).unwrap();
        assert!((s.q[0][0].hypot(s.q[0][1]) - (-std::f64::consts::TAU * 3.0).exp()).abs() < 1e-20);
        assert!(s.distance > 0.0 && s.distance < 1e-6);
        let c = local_lift(&[cx(0.25, 0.3)], Family::Constant).unwrap();
        assert_eq!(c.distance, 0.0);
    }

    #[test]
    fn lie_algebras() {
        assert_eq!(Family::Legendre.lie_algebra().len(), 3);
        assert_eq!(Family::Product.lie_algebra().len(), 6);
        let q = catalog::symplectic_form().matrix().clone();
        for x in Family::Legendre.lie_algebra() {
            assert!((&(&x.transpose() * &q) + &(&q * &x)).is_zero());
        }
    }
}
