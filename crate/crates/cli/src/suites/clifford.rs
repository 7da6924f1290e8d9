use gqweyl_core::clifford::{
    gamma, gamma5, gamma_vec, max_abs, verify_clifford, ComplexMatrix4, DiracSpinor, MinkowskiVector, C64, I,
};
use gqweyl_core::rng::complex_normal;
use nalgebra::Vector4;
use rand::Rng;

use super::{check, max_of};
use crate::checks::{CheckDef, Ctx, Outcome};
use crate::config::Suite::Clifford;

pub fn checks() -> Vec<CheckDef> {
    vec![
        check("clifford.anticommutator", Clifford, "clifford-relations", 0.0, 16, false, anticommutator),
        check("clifford.traceless", Clifford, "traceless-gammas", 0.0, 4, false, traceless),
        check("clifford.self_adjoint", Clifford, "hermitian-conjugate", 0.0, 4, false, self_adjoint),
        check("clifford.chirality", Clifford, "chirality-matrix", 0.0, 4, false, chirality),
        check("clifford.projectors", Clifford, "chiral-projectors", 0.0, 4, false, projectors),
        check(
            "clifford.quaternionic",
            Clifford,
            "quaternionic-structure",
            0.0,
            100,
            true,
            quaternionic,
        ),
        check("clifford.gram_hermitian", Clifford, "gram-form", 1e-15, 100, true, gram_hermitian),
        check(
            "clifford.slash_square",
            Clifford,
            "slash-notation",
            0.0,
            100,
            true,
            slash_square,
        ),
    ]
}

type R = Result<Outcome, gqweyl_core::GqError>;

fn anticommutator(_: &Ctx) -> R {
    Ok(Outcome::new(verify_clifford().anticommutator, 16))
}

fn traceless(_: &Ctx) -> R {
    Ok(Outcome::new(verify_clifford().traceless, 4))
}

fn self_adjoint(_: &Ctx) -> R {
    Ok(Outcome::new(verify_clifford().self_adjoint, 4))
}

fn chirality(_: &Ctx) -> R {
    let r = verify_clifford();
    // gamma(5) is the chirality matrix returned by gamma5()
    let idx = max_abs(&(gamma(5)? - gamma5()));
    Ok(Outcome::new(max_of([r.chirality_product, r.chirality_anticommutes, idx]), 4))
}

fn projectors(_: &Ctx) -> R {
    Ok(Outcome::new(verify_clifford().projectors, 4))
}

fn random_spinor(ctx: &Ctx, k: usize) -> DiracSpinor {
    let mut rng = ctx.rng("spinor", k);
    DiracSpinor(Vector4::from_fn(|_, _| complex_normal(&mut rng)))
}

/// `H^2 = -1`, antilinearity, and `Pi H = H Pi-bar` as linear maps.
fn quaternionic(ctx: &Ctx) -> R {
    let mut err = verify_clifford().quaternionic_swap;
    for k in 0..ctx.samples {
        let z = random_spinor(ctx, k);
        let hh = z.quaternionic().quaternionic();
        err = max_of([err, (hh.0 + z.0).norm()]);
        let anti = z.scale(I).quaternionic().0 + z.quaternionic().0 * I;
        err = max_of([err, anti.norm()]);
    }
    Ok(Outcome::new(err, ctx.samples))
}

fn gram_hermitian(ctx: &Ctx) -> R {
    let mut err: f64 = 0.0;
    for k in 0..ctx.samples {
        let z = random_spinor(ctx, 2 * k);
        let w = random_spinor(ctx, 2 * k + 1);
        let bar_row = (z.bar() * w.0)[(0, 0)];
        let pairing = w.pairing(&z).conj();
        err = max_of([err, (bar_row - pairing).norm(), (z.pairing(&w) - bar_row).norm()]);
    }
    Ok(Outcome::new(err, ctx.samples))
}

/// `gamma(v)^2 = (v.v) I` on integer vectors, where it is exact.
fn slash_square(ctx: &Ctx) -> R {
    let mut err: f64 = 0.0;
    for k in 0..ctx.samples {
        let mut rng = ctx.rng("v", k);
        let mut c = [0.0; 4];
        for x in &mut c {
            *x = f64::from(rng.random_range(-3i32..=3));
        }
        let v = MinkowskiVector::new(c[0], c[1], c[2], c[3]);
        let g = gamma_vec(&v);
        let expect = ComplexMatrix4::identity() * C64::from(v.dot(&v));
        err = max_of([err, max_abs(&(g * g - expect))]);
    }
    Ok(Outcome::new(err, ctx.samples))
}
