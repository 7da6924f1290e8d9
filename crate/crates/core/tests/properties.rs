use gqweyl_core::clifford::{HalfSpinor, C64};
use gqweyl_core::poincare::{compose, PoincareElement};
use gqweyl_core::prequantum::to_z;
use gqweyl_core::spin::{constraint_residual, momentum_p, momentum_q, rho, sigma_project};
use gqweyl_core::{GroupPoint, Helicity, MinkowskiVector, ModelParams, SigmaPoint};
use proptest::prelude::*;

fn half_spinor() -> impl Strategy<Value = HalfSpinor> {
    prop::array::uniform4(-2.0f64..2.0)
        .prop_filter("away from zero", |a| a.iter().map(|x| x * x).sum::<f64>() > 0.05)
        .prop_map(|a| HalfSpinor::new(C64::new(a[0], a[1]), C64::new(a[2], a[3])))
}

/// Points of the spinor manifold whose second half stays of order one.
fn sigma_point() -> impl Strategy<Value = SigmaPoint> {
    (half_spinor(), half_spinor())
        .prop_filter("pairing away from zero", |(a, b)| a.dotc(b).norm() > 0.2)
        .prop_map(|(a, b)| sigma_project(a, b).expect("non-degenerate pair"))
}

fn axis() -> impl Strategy<Value = [f64; 3]> {
    prop::array::uniform3(-1.0f64..1.0).prop_filter("non-zero axis", |a| a.iter().map(|x| x * x).sum::<f64>() > 0.01)
}

fn element() -> impl Strategy<Value = PoincareElement> {
    (axis(), -3.0f64..3.0, axis(), -1.5f64..1.5, prop::array::uniform4(-1.0f64..1.0)).prop_map(
        |(ra, angle, ba, eta, c)| {
            let r = PoincareElement::rotation(ra, angle).unwrap();
            let b = PoincareElement::boost(ba, eta).unwrap();
            compose(&r, &b).with_shift(MinkowskiVector::new(c[0], c[1], c[2], c[3]))
        },
    )
}

fn helicity() -> impl Strategy<Value = Helicity> {
    prop_oneof![Just(Helicity::Negative), Just(Helicity::Positive)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn projected_spinors_satisfy_the_constraints(pt in sigma_point()) {
        let c = constraint_residual(pt.zeta());
        prop_assert!(c.norm < 1e-12 && c.chirality < 1e-12 && c.half_spinor < 1e-12, "{c:?}");
    }

    #[test]
    fn momentum_is_null_and_future(pt in sigma_point(), theta in 0.0f64..6.3) {
        let p = momentum_p(&pt);
        prop_assert!(p.time() > 0.0);
        prop_assert!(p.dot(&p).abs() <= 1e-12 * p.time() * p.time());
        let q = momentum_q(&pt);
        let scale = p.euclidean_norm() * q.euclidean_norm();
        prop_assert!((p.dot(&q) + 1.0).abs() <= 1e-12 * scale.max(1.0));
        prop_assert!(p.max_abs_diff(&momentum_p(&pt.phase(theta))) <= 1e-12 * p.time());
    }

    #[test]
    fn covering_map_is_a_homomorphism(g in element(), h in element()) {
        let (a, b) = (g.spin(), h.spin());
        let lhs = rho(&a.compose(b));
        let rhs = rho(a).compose(&rho(b));
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-10 * (1.0 + lhs.matrix().abs().max()));
        prop_assert_eq!(rho(&a.neg()), rho(a));
        prop_assert!(rho(a).metric_deviation() <= 1e-10 * (1.0 + rho(a).matrix().abs().max().powi(2)));
        prop_assert!(rho(a).is_orthochronous());
        prop_assert!((rho(a).determinant() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn momentum_is_equivariant(pt in sigma_point(), g in element()) {
        let p = momentum_p(&g.spin().act(&pt));
        let expect = g.lorentz().apply(&momentum_p(&pt));
        prop_assert!(p.max_abs_diff(&expect) <= 1e-10 * (1.0 + expect.euclidean_norm()));
    }

    #[test]
    fn phase_corrected_spinor_keeps_its_norm(
        pt in sigma_point(),
        r in prop::array::uniform4(-3.0f64..3.0),
        chi in helicity(),
        hbar in 0.2f64..2.0,
    ) {
        let params = ModelParams::new(chi, hbar).unwrap();
        let gp = GroupPoint::new(pt, MinkowskiVector::new(r[0], r[1], r[2], r[3]));
        let z = to_z(&gp, &params);
        prop_assert!((z.norm() - pt.zeta().norm()).abs() <= 1e-12 * pt.zeta().norm());
        // the phase does not change the momentum
        let zp = SigmaPoint::try_new(z, 1e-9).unwrap();
        prop_assert!(momentum_p(&zp).max_abs_diff(&momentum_p(&pt)) <= 1e-10 * momentum_p(&pt).time());
    }

    #[test]
    fn half_period_flips_the_phase_corrected_spinor(pt in sigma_point(), chi in helicity(), hbar in 0.2f64..2.0) {
        let params = ModelParams::new(chi, hbar).unwrap();
        let p = momentum_p(&pt);
        // P.R = pi hbar along the time axis
        let r = MinkowskiVector::new(0.0, 0.0, 0.0, std::f64::consts::PI * hbar / p.time());
        let z = to_z(&GroupPoint::new(pt, r), &params);
        prop_assert!((z.0 + pt.zeta().0).norm() <= 1e-12 * pt.zeta().norm());
        let z0 = to_z(&GroupPoint::new(pt, MinkowskiVector::ZERO), &params);
        prop_assert_eq!(z0, *pt.zeta());
    }
}
