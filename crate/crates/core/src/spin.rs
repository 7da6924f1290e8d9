//! The spinor manifold of normalized Dirac spinors, the spin group it
//! parametrizes, the covering map onto the restricted Lorentz group and the
//! null momenta carried by each spinor.

use std::f64::consts::SQRT_2;

use nalgebra::{Matrix2, Matrix4, Vector2};
use rand::Rng;

use crate::clifford::{
    bar_matrix, conjugate_by_quaternionic, gamma5, gamma_unchecked, gamma_vec, max_abs, metric,
    pauli, pauli_vec, projector_pi, ComplexMatrix2, ComplexMatrix4, DiracSpinor, HalfSpinor,
    MinkowskiVector, ProjectorSign, C64, ONE,
};
use crate::error::{GqError, Result};
use crate::rng::half_spinor_normal;

/// Below this `|zp^H zs|` a spinor pair is not normalized.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;
pub const SPIN_TOLERANCE: f64 = 1e-12;
pub const LORENTZ_TOLERANCE: f64 = 1e-10;
const MAX_SAMPLE_ATTEMPTS: usize = 100;

/// A Dirac spinor with `bar(z) z = 1` and `bar(z) gamma_5 z = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaPoint(DiracSpinor);

impl SigmaPoint {
    /// Wraps a spinor known to satisfy the constraints, e.g. the image of a
    /// member under a spin-group element.
    pub(crate) fn new_unchecked(zeta: DiracSpinor) -> Self {
        Self(zeta)
    }

    /// Accepts `zeta` when `|zeta'^H zeta'' - 1| <= tol`.
    pub fn try_new(zeta: DiracSpinor, tol: f64) -> Result<Self> {
        let c = zeta.zeta_prime().dotc(&zeta.zeta_second());
        let dev = (c - ONE).norm();
        if dev <= tol {
            Ok(Self(zeta))
        } else {
            Err(GqError::DegenerateSpinor(c.norm()))
        }
    }

    pub fn zeta(&self) -> &DiracSpinor {
        &self.0
    }

    pub fn zeta_prime(&self) -> HalfSpinor {
        self.0.zeta_prime()
    }

    pub fn zeta_second(&self) -> HalfSpinor {
        self.0.zeta_second()
    }

    /// `e^{i theta} zeta`, the circle action whose quotient is the
    /// evolution space.
    pub fn phase(&self, theta: f64) -> SigmaPoint {
        SigmaPoint(self.0.scale(C64::from_polar(1.0, theta)))
    }
}

/// Residuals of the two forms of the constraints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintResidual {
    /// `|bar(z) z - 1|`
    pub norm: f64,
    /// `|bar(z) gamma_5 z|`
    pub chirality: f64,
    /// `|zeta'^H zeta'' - 1|`
    pub half_spinor: f64,
}

pub fn constraint_residual(zeta: &DiracSpinor) -> ConstraintResidual {
    let g5z = DiracSpinor(gamma5() * zeta.0);
    ConstraintResidual {
        norm: (zeta.pairing(zeta) - ONE).norm(),
        chirality: zeta.pairing(&g5z).norm(),
        half_spinor: (zeta.zeta_prime().dotc(&zeta.zeta_second()) - ONE).norm(),
    }
}

/// Normalizes a pair of half-spinors onto the spinor manifold by rescaling
/// the second one.
pub fn sigma_project(zp: HalfSpinor, zs: HalfSpinor) -> Result<SigmaPoint> {
    let c = zp.dotc(&zs);
    if !(c.norm() > DEGENERACY_THRESHOLD) {
        return Err(GqError::DegenerateSpinor(c.norm()));
    }
    Ok(SigmaPoint(DiracSpinor::from_halves(zp, zs / c)))
}

/// Deterministic point for a seed.
pub fn sample_sigma(seed: u64) -> Result<SigmaPoint> {
    let mut rng = crate::rng::stream(seed, "sample_sigma", 0);
    sample_sigma_with(&mut rng)
}

/// Complex Gaussian half-spinors, projected; retries degenerate draws.
pub fn sample_sigma_with<R: Rng + ?Sized>(rng: &mut R) -> Result<SigmaPoint> {
    for _ in 0..MAX_SAMPLE_ATTEMPTS {
        let zp = half_spinor_normal(rng);
        let zs = half_spinor_normal(rng);
        if let Ok(pt) = sigma_project(zp, zs) {
            return Ok(pt);
        }
    }
    Err(GqError::SamplingExhausted(MAX_SAMPLE_ATTEMPTS))
}

/// An element of Spin(3,1) acting on Dirac spinors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinElement(ComplexMatrix4);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinDeviation {
    pub g_unitary: f64,
    pub chirality: f64,
    pub quaternionic: f64,
}

impl SpinDeviation {
    pub fn max(&self) -> f64 {
        self.g_unitary.max(self.chirality).max(self.quaternionic)
    }
}

impl SpinElement {
    pub fn identity() -> Self {
        Self(ComplexMatrix4::identity())
    }

    /// Accepts `a` if it passes all three group conditions within `tol`.
    pub fn try_new(a: ComplexMatrix4, tol: f64) -> Result<Self> {
        let candidate = Self(a);
        let dev = candidate.deviation();
        if dev.max() <= tol {
            Ok(candidate)
        } else {
            Err(GqError::NotUnimodular(dev.max()))
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix4 {
        &self.0
    }

    /// `A^{-1} = bar(A)` for a G-unitary matrix.
    pub fn inverse(&self) -> SpinElement {
        Self(bar_matrix(&self.0))
    }

    pub fn compose(&self, other: &SpinElement) -> SpinElement {
        Self(self.0 * other.0)
    }

    pub fn neg(&self) -> SpinElement {
        Self(-self.0)
    }

    pub fn apply(&self, z: &DiracSpinor) -> DiracSpinor {
        DiracSpinor(self.0 * z.0)
    }

    pub fn act(&self, pt: &SigmaPoint) -> SigmaPoint {
        SigmaPoint::new_unchecked(self.apply(pt.zeta()))
    }

    pub fn deviation(&self) -> SpinDeviation {
        let a = &self.0;
        let g5 = gamma5();
        SpinDeviation {
            g_unitary: max_abs(&(bar_matrix(a) * a - ComplexMatrix4::identity())),
            chirality: max_abs(&(a * g5 - g5 * a)),
            quaternionic: max_abs(&(conjugate_by_quaternionic(a) - a)),
        }
    }

    /// Upper-left block, the SL(2,C) matrix generating this element.
    pub fn sl2_block(&self) -> ComplexMatrix2 {
        self.0.fixed_view::<2, 2>(0, 0).into_owned()
    }
}

fn det2(a: &ComplexMatrix2) -> C64 {
    a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)]
}

/// `diag(a, conj(a^{-1})^T)` for `a` in SL(2,C).
pub fn embed_sl2(a: &ComplexMatrix2) -> Result<SpinElement> {
    let det = det2(a);
    let dev = (det - ONE).norm();
    if !(dev <= 1e-10) {
        return Err(GqError::NotUnimodular(dev));
    }
    let inv = Matrix2::new(a[(1, 1)], -a[(0, 1)], -a[(1, 0)], a[(0, 0)]) / det;
    let mut m = ComplexMatrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(&inv.adjoint());
    Ok(SpinElement(m))
}

/// Spin element with columns `(Pi z, Pi H z, Pi-bar z, Pi-bar H z)`.
///
/// This is the block-diagonal element whose SL(2,C) block is
/// `[zeta' | J conj(zeta'')]`; the first and third columns add up to `zeta`.
pub fn zeta_to_spin(pt: &SigmaPoint) -> SpinElement {
    let z = pt.zeta();
    let hz = z.quaternionic();
    let pi = projector_pi(ProjectorSign::Plus);
    let pib = projector_pi(ProjectorSign::Minus);
    let mut m = ComplexMatrix4::zeros();
    m.set_column(0, &(pi * z.0));
    m.set_column(1, &(pi * hz.0));
    m.set_column(2, &(pib * z.0));
    m.set_column(3, &(pib * hz.0));
    SpinElement(m)
}

/// `zeta = A_1 + A_3`.
pub fn spin_to_zeta(a: &SpinElement) -> SigmaPoint {
    let m = a.matrix();
    SigmaPoint::new_unchecked(DiracSpinor(m.column(0) + m.column(2)))
}

/// A restricted Lorentz transformation acting on contravariant vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzMatrix(Matrix4<f64>);

impl LorentzMatrix {
    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    pub fn from_matrix(m: Matrix4<f64>) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    /// `L^mu_nu`, both indices `1..=4`.
    pub fn entry(&self, mu: usize, nu: usize) -> f64 {
        self.0[(mu - 1, nu - 1)]
    }

    pub fn apply(&self, v: &MinkowskiVector) -> MinkowskiVector {
        let a = v.as_array();
        let out = self.0 * nalgebra::Vector4::new(a[0], a[1], a[2], a[3]);
        MinkowskiVector::new(out[0], out[1], out[2], out[3])
    }

    pub fn compose(&self, other: &LorentzMatrix) -> LorentzMatrix {
        Self(self.0 * other.0)
    }

    /// `max |L^T g L - g|`
    pub fn metric_deviation(&self) -> f64 {
        let g = Matrix4::from_diagonal(&nalgebra::Vector4::new(-1.0, -1.0, -1.0, 1.0));
        (self.0.transpose() * g * self.0 - g).abs().max()
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    pub fn is_orthochronous(&self) -> bool {
        self.0[(3, 3)] >= 1.0 - LORENTZ_TOLERANCE
    }

    pub fn max_abs_diff(&self, other: &LorentzMatrix) -> f64 {
        (self.0 - other.0).abs().max()
    }
}

/// Covering map: `A gamma(v) A^{-1} = gamma(rho(A) v)`, read off through
/// `L^mu_nu = 1/4 g^{mu mu} tr(gamma_mu A gamma_nu A^{-1})`.
pub fn rho(a: &SpinElement) -> LorentzMatrix {
    let am = a.matrix();
    let ainv = bar_matrix(am);
    let gammas: [ComplexMatrix4; 4] = std::array::from_fn(|k| gamma_unchecked(k + 1));
    let mut l = Matrix4::zeros();
    for nu in 0..4 {
        let conj = am * gammas[nu] * ainv;
        for mu in 0..4 {
            let tr = (gammas[mu] * conj).trace();
            l[(mu, nu)] = 0.25 * metric(mu + 1) * tr.re;
        }
    }
    LorentzMatrix(l)
}

/// `max |A gamma(v) A^{-1} - gamma(rho(A) v)|`
pub fn rho_defining_residual(a: &SpinElement, l: &LorentzMatrix, v: &MinkowskiVector) -> f64 {
    let lhs = a.matrix() * gamma_vec(v) * a.inverse().matrix();
    max_abs(&(lhs - gamma_vec(&l.apply(v))))
}

/// Momentum `P` defined by `P.dR = sqrt(2) bar(z) gamma(dR) Pi z`.
pub fn momentum_p(pt: &SigmaPoint) -> MinkowskiVector {
    momentum_from_projector(pt.zeta(), ProjectorSign::Plus, SQRT_2)
}

/// `Q` defined by `Q.dR = -sqrt(2) bar(z) gamma(dR) Pi-bar z`.
pub fn momentum_q(pt: &SigmaPoint) -> MinkowskiVector {
    momentum_from_projector(pt.zeta(), ProjectorSign::Minus, -SQRT_2)
}

fn momentum_from_projector(z: &DiracSpinor, sign: ProjectorSign, factor: f64) -> MinkowskiVector {
    let pz = DiracSpinor(projector_pi(sign) * z.0);
    let covariant: [f64; 4] = std::array::from_fn(|k| {
        let gz = DiracSpinor(gamma_unchecked(k + 1) * pz.0);
        factor * z.pairing(&gz).re
    });
    MinkowskiVector::new(-covariant[0], -covariant[1], -covariant[2], covariant[3])
}

/// Derivative of [`momentum_p`] along `dzeta`, by bilinearity.
pub fn momentum_p_derivative(z: &DiracSpinor, dz: &DiracSpinor) -> MinkowskiVector {
    let pi = projector_pi(ProjectorSign::Plus);
    let pz = DiracSpinor(pi * z.0);
    let pdz = DiracSpinor(pi * dz.0);
    let covariant: [f64; 4] = std::array::from_fn(|k| {
        let g = gamma_unchecked(k + 1);
        let a = dz.pairing(&DiracSpinor(g * pz.0));
        let b = z.pairing(&DiracSpinor(g * pdz.0));
        SQRT_2 * (a + b).re
    });
    MinkowskiVector::new(-covariant[0], -covariant[1], -covariant[2], covariant[3])
}

/// Spatial momentum `p = zeta'^H sigma zeta' / sqrt(2)` and energy
/// `E = |p| = |zeta'|^2 / sqrt(2)`.
pub fn momentum_3(zp: &HalfSpinor) -> Result<([f64; 3], f64)> {
    let n2 = zp.norm_squared();
    if !(n2 > 0.0) {
        return Err(GqError::ZeroMomentum);
    }
    let p = std::array::from_fn(|j| (zp.dotc(&(pauli(j + 1) * zp))).re / SQRT_2);
    Ok((p, n2 / SQRT_2))
}

/// `max |sigma(u) - (2 xi xi^H - 1)|` with `xi = zeta' / |zeta'|`.
pub fn half_spinor_direction_residual(zp: &HalfSpinor) -> Result<f64> {
    let (p, e) = momentum_3(zp)?;
    let u = [p[0] / e, p[1] / e, p[2] / e];
    let xi: Vector2<C64> = zp / C64::from(zp.norm());
    let rhs = xi * xi.adjoint() * C64::from(2.0) - ComplexMatrix2::identity();
    Ok((pauli_vec(u) - rhs).iter().map(|c| c.norm()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{ZERO, I};
    use crate::rng::stream;

    fn hs(a: f64, b: f64) -> HalfSpinor {
        Vector2::new(C64::from(a), C64::from(b))
    }

    fn rotation3(theta: f64) -> LorentzMatrix {
        let (s, c) = theta.sin_cos();
        let mut m = Matrix4::identity();
        m[(0, 0)] = c;
        m[(0, 1)] = -s;
        m[(1, 0)] = s;
        m[(1, 1)] = c;
        LorentzMatrix::from_matrix(m)
    }

    #[test]
    fn sigma_project_examples() {
        let pt = sigma_project(hs(1.0, 0.0), hs(2.0, 0.0)).unwrap();
        assert_eq!(pt.zeta_prime(), hs(1.0, 0.0));
        assert_eq!(pt.zeta_second(), hs(1.0, 0.0));
        assert!(matches!(
            sigma_project(hs(1.0, 0.0), hs(0.0, 1.0)),
            Err(GqError::DegenerateSpinor(_))
        ));
    }

    #[test]
    fn sampled_points_satisfy_constraints() {
        for k in 0..1000 {
            let pt = sample_sigma_with(&mut stream(3, "t", k)).unwrap();
            let r = constraint_residual(pt.zeta());
            let scale = pt.zeta_prime().norm() * pt.zeta_second().norm();
            assert!(r.norm <= 1e-14 * scale.max(1.0), "{r:?}");
            assert!(r.chirality <= 1e-14 * scale.max(1.0), "{r:?}");
            let (_, e) = momentum_3(&pt.zeta_prime()).unwrap();
            assert!(e > 0.0);
        }
    }

    #[test]
    fn sample_sigma_is_deterministic() {
        assert_eq!(sample_sigma(42).unwrap(), sample_sigma(42).unwrap());
    }

    #[test]
    fn embed_identity_and_rejects_non_unimodular() {
        assert_eq!(embed_sl2(&ComplexMatrix2::identity()).unwrap(), SpinElement::identity());
        let a = ComplexMatrix2::identity() * C64::from(2.0);
        assert!(matches!(embed_sl2(&a), Err(GqError::NotUnimodular(_))));
    }

    #[test]
    fn embed_rotation_matches_oracle() {
        let theta = std::f64::consts::PI / 3.0;
        let a = Matrix2::new(C64::from_polar(1.0, theta / 2.0), ZERO, ZERO, C64::from_polar(1.0, -theta / 2.0));
        let l = rho(&embed_sl2(&a).unwrap());
        // rotation of the (1,2)-plane by -theta in this representation
        assert!(l.max_abs_diff(&rotation3(-theta)) < 1e-12, "{l:?}");
    }

    #[test]
    fn embed_boost_matches_oracle() {
        let t: f64 = 0.7;
        let a = Matrix2::new(C64::from((t / 2.0).exp()), ZERO, ZERO, C64::from((-t / 2.0).exp()));
        let l = rho(&embed_sl2(&a).unwrap());
        let mut m = Matrix4::identity();
        m[(2, 2)] = t.cosh();
        m[(3, 3)] = t.cosh();
        m[(2, 3)] = t.sinh();
        m[(3, 2)] = t.sinh();
        assert!(l.max_abs_diff(&LorentzMatrix::from_matrix(m)) < 1e-12);
    }

    #[test]
    fn zeta_spin_round_trip() {
        let base = sigma_project(hs(1.0, 0.0), hs(1.0, 0.0)).unwrap();
        let a = zeta_to_spin(&base);
        assert_eq!(a, SpinElement::identity());
        assert_eq!(spin_to_zeta(&a), base);
        let neg = spin_to_zeta(&a.neg());
        assert_eq!(neg.zeta().0, -base.zeta().0);
        for k in 0..100 {
            let pt = sample_sigma_with(&mut stream(5, "rt", k)).unwrap();
            let a = zeta_to_spin(&pt);
            assert!(a.deviation().max() < 1e-12, "{:?}", a.deviation());
            let back = spin_to_zeta(&a);
            assert!((back.zeta().0 - pt.zeta().0).norm() < 1e-14);
            let block = a.sl2_block();
            assert!((det2(&block) - ONE).norm() < 1e-12);
        }
    }

    #[test]
    fn rho_kernel_and_identity() {
        assert!(rho(&SpinElement::identity()).max_abs_diff(&LorentzMatrix::identity()) == 0.0);
        let pt = sample_sigma(9).unwrap();
        let a = zeta_to_spin(&pt);
        assert_eq!(rho(&a), rho(&a.neg()));
    }

    #[test]
    fn momentum_examples() {
        let q = 2f64.powf(0.25);
        let pt = sigma_project(hs(q, 0.0), hs(1.0 / q, 0.0)).unwrap();
        let p = momentum_p(&pt);
        assert!(p.max_abs_diff(&MinkowskiVector::new(0.0, 0.0, 1.0, 1.0)) < 1e-15);
        let (p3, e) = momentum_3(&pt.zeta_prime()).unwrap();
        assert!((p3[2] - 1.0).abs() < 1e-15 && (e - 1.0).abs() < 1e-15);
        let qv = momentum_q(&pt);
        assert!(qv.dot(&qv).abs() < 1e-15);
        assert!((p.dot(&qv) + 1.0).abs() < 1e-15);
        let (p3, e) = momentum_3(&hs(q / SQRT_2, q / SQRT_2)).unwrap();
        assert!((p3[0] - 1.0).abs() < 1e-15 && p3[1].abs() < 1e-15 && (e - 1.0).abs() < 1e-15);
    }

    #[test]
    fn phase_leaves_momenta_fixed() {
        let pt = sample_sigma(11).unwrap();
        let rot = pt.phase(0.83);
        assert!(momentum_p(&pt).max_abs_diff(&momentum_p(&rot)) < 1e-13);
        assert!(momentum_q(&pt).max_abs_diff(&momentum_q(&rot)) < 1e-13);
    }

    #[test]
    fn momentum_derivative_matches_difference() {
        let pt = sample_sigma(12).unwrap();
        let dz = DiracSpinor(nalgebra::Vector4::new(C64::new(0.1, 0.3), I, C64::new(-0.4, 0.2), ZERO));
        let h = 1e-6;
        let plus = momentum_from_projector(&(*pt.zeta() + dz.scale(C64::from(h))), ProjectorSign::Plus, SQRT_2);
        let minus = momentum_from_projector(&(*pt.zeta() - dz.scale(C64::from(h))), ProjectorSign::Plus, SQRT_2);
        let fd = (plus - minus) * (0.5 / h);
        assert!(fd.max_abs_diff(&momentum_p_derivative(pt.zeta(), &dz)) < 1e-8);
    }

    #[test]
    fn direction_formula() {
        for k in 0..50 {
            let zp = half_spinor_normal(&mut stream(1, "dir", k));
            assert!(half_spinor_direction_residual(&zp).unwrap() < 1e-12);
        }
        assert_eq!(momentum_3(&hs(0.0, 0.0)), Err(GqError::ZeroMomentum));
    }
}
