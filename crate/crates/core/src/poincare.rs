//! The universal cover of the Poincare group as pairs `(A, C)` and its
//! actions on group points, momentum spinors and spacetime fields.

use rand::Rng;

use crate::clifford::{pauli_vec, ComplexMatrix2, DiracSpinor, MinkowskiVector, C64, I};
use crate::error::{GqError, Result};
use crate::lightcone::SpacetimeField;
use crate::polarization::MomentumSpinor;
use crate::rng::unit3;
use crate::spin::{embed_sl2, rho, LorentzMatrix, SpinElement};
use crate::symplectic::{GroupPoint, Helicity, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoincareElement {
    a: SpinElement,
    l: LorentzMatrix,
    c: MinkowskiVector,
}

fn unit_axis(axis: [f64; 3]) -> Result<[f64; 3]> {
    let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    if !(n > 0.0 && n.is_finite()) {
        return Err(GqError::ZeroAxis);
    }
    Ok([axis[0] / n, axis[1] / n, axis[2] / n])
}

impl PoincareElement {
    pub fn identity() -> Self {
        Self::new(SpinElement::identity(), MinkowskiVector::ZERO)
    }

    pub fn new(a: SpinElement, c: MinkowskiVector) -> Self {
        Self { l: rho(&a), a, c }
    }

    pub fn from_sl2(a: &ComplexMatrix2, c: MinkowskiVector) -> Result<Self> {
        Ok(Self::new(embed_sl2(a)?, c))
    }

    /// Rotation by `angle` about `axis` (right-handed); the SL(2,C) block
    /// is `cos(angle/2) - i sin(angle/2) sigma.n`.
    pub fn rotation(axis: [f64; 3], angle: f64) -> Result<Self> {
        let n = unit_axis(axis)?;
        let (s, c) = (0.5 * angle).sin_cos();
        let a = ComplexMatrix2::identity() * C64::from(c) - pauli_vec(n) * (I * s);
        Self::from_sl2(&a, MinkowskiVector::ZERO)
    }

    /// Boost of rapidity `rapidity` along `axis`:
    /// `cosh(eta/2) + sinh(eta/2) sigma.n`.
    pub fn boost(axis: [f64; 3], rapidity: f64) -> Result<Self> {
        let n = unit_axis(axis)?;
        let (ch, sh) = ((0.5 * rapidity).cosh(), (0.5 * rapidity).sinh());
        let a = ComplexMatrix2::identity() * C64::from(ch) + pauli_vec(n) * C64::from(sh);
        Self::from_sl2(&a, MinkowskiVector::ZERO)
    }

    pub fn translation(c: MinkowskiVector) -> Self {
        Self::new(SpinElement::identity(), c)
    }

    pub fn spin(&self) -> &SpinElement {
        &self.a
    }

    pub fn lorentz(&self) -> &LorentzMatrix {
        &self.l
    }

    pub fn shift(&self) -> MinkowskiVector {
        self.c
    }

    /// Same Lorentz part, translation replaced.
    pub fn with_shift(&self, c: MinkowskiVector) -> Self {
        Self { c, ..*self }
    }

    pub fn max_abs_diff(&self, other: &PoincareElement) -> f64 {
        let da = (self.a.matrix() - other.a.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        da.max(self.c.max_abs_diff(&other.c))
    }
}

/// `(A2 A1, rho(A2) C1 + C2)`: first `g1`, then `g2`.
pub fn compose(g2: &PoincareElement, g1: &PoincareElement) -> PoincareElement {
    let a = g2.a.compose(&g1.a);
    PoincareElement { l: g2.l.compose(&g1.l), a, c: g2.l.apply(&g1.c) + g2.c }
}

/// `(A zeta, rho(A) R + C)`
pub fn act_group(g: &PoincareElement, pt: &GroupPoint) -> GroupPoint {
    GroupPoint { zeta: g.a.act(&pt.zeta), r: g.l.apply(&pt.r) + g.c }
}

/// `P -> A^{-1} psi(rho(A) P)`, optionally times `exp(i (rho(A) P).C / hbar)`.
#[derive(Debug, Clone)]
pub struct ActedMomentum<M> {
    g: PoincareElement,
    a_inv: SpinElement,
    inner: M,
    phase_hbar: Option<f64>,
}

impl<M: MomentumSpinor> MomentumSpinor for ActedMomentum<M> {
    fn chi(&self) -> Helicity {
        self.inner.chi()
    }

    fn eval(&self, p: &MinkowskiVector) -> DiracSpinor {
        let lp = self.g.l.apply(p);
        let v = self.a_inv.apply(&self.inner.eval(&lp));
        match self.phase_hbar {
            None => v,
            Some(hbar) => v.scale(C64::from_polar(1.0, lp.dot(&self.g.c) / hbar)),
        }
    }
}

/// The momentum-space action; it ignores the translation part.
pub fn act_momentum<M: MomentumSpinor>(g: &PoincareElement, psi: M) -> ActedMomentum<M> {
    ActedMomentum { g: *g, a_inv: g.a.inverse(), inner: psi, phase_hbar: None }
}

/// The momentum-space image of [`act_spacetime`]: [`act_momentum`] times
/// the plane-wave phase of the translation.
pub fn act_momentum_translated<M: MomentumSpinor>(g: &PoincareElement, psi: M, params: &ModelParams) -> ActedMomentum<M> {
    ActedMomentum { g: *g, a_inv: g.a.inverse(), inner: psi, phase_hbar: Some(params.hbar) }
}

/// `R -> A^{-1} F(rho(A) R + C)`
#[derive(Debug, Clone)]
pub struct ActedField<F> {
    g: PoincareElement,
    a_inv: SpinElement,
    inner: F,
}

impl<F: SpacetimeField> SpacetimeField for ActedField<F> {
    fn chi(&self) -> Helicity {
        self.inner.chi()
    }

    fn eval(&self, r: &MinkowskiVector) -> DiracSpinor {
        self.a_inv.apply(&self.inner.eval(&(self.g.l.apply(r) + self.g.c)))
    }
}

pub fn act_spacetime<F: SpacetimeField>(g: &PoincareElement, field: F) -> ActedField<F> {
    ActedField { g: *g, a_inv: g.a.inverse(), inner: field }
}

/// Radial window `[e_min / k(u), e_max / k(u)]`, `k(u)` the energy of
/// `rho(A) (u, 1)`: where `e_min <= E(rho(A) P) <= e_max` along `u`.
pub fn boosted_window(g: &PoincareElement, e_min: f64, e_max: f64) -> impl Fn(&[f64; 3]) -> (f64, f64) + '_ {
    move |u| {
        let k = g.l.apply(&MinkowskiVector::from_space_time(*u, 1.0)).time();
        (e_min / k, e_max / k)
    }
}

/// Rotation, boost and translation with uniform random axes; rapidity and
/// rotation angle uniform in `[0, max_rapidity]` and `[0, 2 pi)`,
/// translation components uniform in `[-max_shift, max_shift]`.
pub fn random_element<R: Rng + ?Sized>(rng: &mut R, max_rapidity: f64, max_shift: f64) -> PoincareElement {
    let rot = PoincareElement::rotation(unit3(rng), rng.random_range(0.0..std::f64::consts::TAU)).expect("unit axis");
    let eta = if max_rapidity > 0.0 { rng.random_range(0.0..=max_rapidity) } else { 0.0 };
    let boost = PoincareElement::boost(unit3(rng), eta).expect("unit axis");
    let mut c = [0.0; 4];
    if max_shift > 0.0 {
        for v in &mut c {
            *v = rng.random_range(-max_shift..=max_shift);
        }
    }
    compose(&PoincareElement::translation(MinkowskiVector::new(c[0], c[1], c[2], c[3])), &compose(&boost, &rot))
}

/// Euclidean distance of two spinors.
pub fn spinor_difference(a: &DiracSpinor, b: &DiracSpinor) -> f64 {
    (a.0 - b.0).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lightcone::{random_probes, QuadratureSpec, TransformedField};
    use crate::polarization::{momentum_constraint_residual, PolarizedMomentum, Profile};
    use crate::rng::{normal3, stream};
    use crate::spin::{constraint_residual, momentum_p, sample_sigma_with};
    use nalgebra::Matrix4;

    fn sample_point(k: u64) -> GroupPoint {
        let mut rng = stream(51, "pt", k);
        let zeta = sample_sigma_with(&mut rng).unwrap();
        GroupPoint::new(zeta, MinkowskiVector::from_space_time(normal3(&mut rng), 0.2))
    }

    #[test]
    fn identity_and_translations() {
        let mut rng = stream(52, "g", 0);
        let g = random_element(&mut rng, 1.5, 1.0);
        assert!(compose(&g, &PoincareElement::identity()).max_abs_diff(&g) < 1e-15);
        assert!(compose(&PoincareElement::identity(), &g).max_abs_diff(&g) < 1e-15);
        let a = MinkowskiVector::new(1.0, 2.0, 3.0, 4.0);
        let b = MinkowskiVector::new(-0.5, 0.25, 0.0, 2.0);
        let t = compose(&PoincareElement::translation(a), &PoincareElement::translation(b));
        assert_eq!(t.shift(), a + b);
    }

    #[test]
    fn rotation_and_boost_match_lorentz_oracles() {
        let th: f64 = 0.8;
        let r = PoincareElement::rotation([0.0, 0.0, 1.0], th).unwrap();
        let mut expected = Matrix4::identity();
        expected[(0, 0)] = th.cos();
        expected[(0, 1)] = -th.sin();
        expected[(1, 0)] = th.sin();
        expected[(1, 1)] = th.cos();
        assert!(r.lorentz().max_abs_diff(&LorentzMatrix::from_matrix(expected)) < 1e-14);
        let eta: f64 = 1.2;
        let b = PoincareElement::boost([1.0, 0.0, 0.0], eta).unwrap();
        let mut expected = Matrix4::identity();
        expected[(0, 0)] = eta.cosh();
        expected[(0, 3)] = eta.sinh();
        expected[(3, 0)] = eta.sinh();
        expected[(3, 3)] = eta.cosh();
        assert!(b.lorentz().max_abs_diff(&LorentzMatrix::from_matrix(expected)) < 1e-14);
    }

    #[test]
    fn group_action_is_compatible_and_equivariant() {
        for k in 0..100 {
            let mut rng = stream(53, "g", k);
            let g1 = random_element(&mut rng, 1.5, 1.0);
            let g2 = random_element(&mut rng, 1.5, 1.0);
            let pt = sample_point(k);
            let lhs = act_group(&compose(&g2, &g1), &pt);
            let rhs = act_group(&g2, &act_group(&g1, &pt));
            assert!((lhs.zeta.zeta().0 - rhs.zeta.zeta().0).norm() < 1e-10);
            assert!(lhs.r.max_abs_diff(&rhs.r) < 1e-10);
            let moved = act_group(&g1, &pt);
            let c = constraint_residual(moved.zeta.zeta());
            assert!(c.norm.max(c.chirality).max(c.half_spinor) < 1e-12 * pt.zeta.zeta().norm().powi(2));
            let p_moved = momentum_p(&moved.zeta);
            let p_rot = g1.lorentz().apply(&momentum_p(&pt.zeta));
            assert!(p_moved.max_abs_diff(&p_rot) < 1e-10 * p_rot.time().max(1.0));
        }
        let pt = sample_point(0);
        assert_eq!(act_group(&PoincareElement::identity(), &pt), pt);
    }

    #[test]
    fn momentum_action_preserves_constraints() {
        for chi in Helicity::both() {
            let psi = PolarizedMomentum::new(Profile::Bump { a: 0.0, b: 1e3 }, chi);
            for k in 0..200 {
                let mut rng = stream(54, "m", k);
                let g = random_element(&mut rng, 1.5, 1.0);
                let u = unit3(&mut rng);
                let e: f64 = rng.random_range(0.2..3.0);
                let p = MinkowskiVector::from_space_time([e * u[0], e * u[1], e * u[2]], e);
                let acted = act_momentum(&g, psi);
                let v = acted.eval(&p);
                assert!(v.norm() > 0.0);
                assert!(momentum_constraint_residual(&p, &v, chi) <= 1e-10 * v.norm().max(1.0) * e.max(1.0));
                let pure = act_momentum(&PoincareElement::translation(g.shift()), psi);
                assert_eq!(pure.eval(&p), psi.eval(&p));
            }
        }
    }

    #[test]
    fn spacetime_action_is_anti_homomorphism() {
        let params = ModelParams::default();
        let spec = QuadratureSpec::new(0.5, 2.5, 6, 4);
        let psi = PolarizedMomentum::new(Profile::default(), Helicity::Negative);
        let field = TransformedField::from_spec(&psi, &spec, &params).unwrap();
        let probes = random_probes(5, "anti", 50, 1.0);
        for k in 0..20 {
            let mut rng = stream(55, "pair", k);
            let g1 = random_element(&mut rng, 1.5, 1.0);
            let g2 = random_element(&mut rng, 1.5, 1.0);
            let lhs = act_spacetime(&g1, act_spacetime(&g2, &field));
            let rhs = act_spacetime(&compose(&g2, &g1), &field);
            for r in &probes {
                let a = lhs.eval(r);
                let b = rhs.eval(r);
                assert!(spinor_difference(&a, &b) < 1e-10, "{}", spinor_difference(&a, &b));
                assert!(crate::lightcone::chirality_residual(&a, Helicity::Negative) < 1e-12 * a.norm().max(1.0));
            }
        }
        let r = MinkowskiVector::new(0.1, 0.2, 0.3, 0.4);
        assert_eq!(act_spacetime(&PoincareElement::identity(), &field).eval(&r), field.eval(&r));
    }

    #[test]
    fn covariance_square_small_quadrature() {
        let params = ModelParams::new(Helicity::Positive, 0.7).unwrap();
        let spec = QuadratureSpec::new(0.5, 2.5, 24, 24);
        let psi = PolarizedMomentum::new(Profile::default(), Helicity::Positive);
        let mut rng = stream(56, "cov", 0);
        let g = random_element(&mut rng, 0.5, 0.5);
        let field = TransformedField::from_spec(&psi, &spec, &params).unwrap();
        let lhs = act_spacetime(&g, &field);
        let nodes = crate::lightcone::build_nodes_windowed(&spec, boosted_window(&g, 0.5, 2.5)).unwrap();
        let rhs = TransformedField::new(&act_momentum_translated(&g, psi, &params), &nodes, &params);
        for r in random_probes(6, "cov", 10, 1.0) {
            let d = spinor_difference(&lhs.eval(&r), &rhs.eval(&r));
            assert!(d < 1e-6, "{d}");
        }
    }
}
