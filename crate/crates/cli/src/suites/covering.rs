use gqweyl_core::clifford::{ComplexMatrix2, C64};
use gqweyl_core::poincare::PoincareElement;
use gqweyl_core::rng::{normal3, unit3};
use gqweyl_core::spin::{embed_sl2, rho, rho_defining_residual, sample_sigma_with, zeta_to_spin};
use gqweyl_core::{GqError, LorentzMatrix, MinkowskiVector, SpinElement};
use nalgebra::Matrix4;
use rand::Rng;

use super::{check, indicator, max_of, par_max};
use crate::checks::{CheckDef, Ctx, Outcome};
use crate::config::Suite::Covering;
use crate::suites::spin::random_spin;

pub fn checks() -> Vec<CheckDef> {
    vec![
        check("covering.lorentz_group", Covering, "restricted-lorentz-image", 1e-10, 100, true, lorentz_group),
        check("covering.homomorphism", Covering, "covering-homomorphism", 1e-10, 100, true, homomorphism),
        check("covering.kernel", Covering, "covering-kernel", 0.0, 100, true, kernel),
        check("covering.conjugation", Covering, "covering-homomorphism", 1e-10, 100, true, conjugation),
        check("covering.generators", Covering, "spin-group-generators", 1e-10, 100, true, generators),
    ]
}

type R = Result<Outcome, GqError>;

/// Even samples: rotation times boost; odd samples: the spin element of a
/// random spinor-manifold point.
fn element(ctx: &Ctx, label: &str, k: usize) -> Result<SpinElement, GqError> {
    if k.is_multiple_of(2) {
        Ok(random_spin(ctx, label, k))
    } else {
        Ok(zeta_to_spin(&sample_sigma_with(&mut ctx.rng(label, k))?))
    }
}

fn lorentz_group(ctx: &Ctx) -> R {
    let err = par_max(ctx.samples, |k| {
        let l = rho(&element(ctx, "a", k)?);
        Ok(max_of([
            l.metric_deviation(),
            (l.determinant() - 1.0).abs(),
            indicator(l.is_orthochronous()),
        ]))
    })?;
    Ok(Outcome::new(err, ctx.samples))
}

fn homomorphism(ctx: &Ctx) -> R {
    let err = par_max(ctx.samples, |k| {
        let a = element(ctx, "a", k)?;
        let b = element(ctx, "b", k)?;
        let lhs = rho(&a.compose(&b));
        let rhs = rho(&a).compose(&rho(&b));
        Ok(lhs.max_abs_diff(&rhs))
    })?;
    Ok(Outcome::new(err, ctx.samples))
}

fn kernel(ctx: &Ctx) -> R {
    let id = LorentzMatrix::identity();
    let fixed = max_of([
        rho(&SpinElement::identity()).max_abs_diff(&id),
        rho(&SpinElement::identity().neg()).max_abs_diff(&id),
    ]);
    let err = par_max(ctx.samples, |k| {
        let a = element(ctx, "a", k)?;
        Ok(rho(&a.neg()).max_abs_diff(&rho(&a)))
    })?;
    Ok(Outcome::new(max_of([err, fixed]), ctx.samples))
}

fn conjugation(ctx: &Ctx) -> R {
    let err = par_max(ctx.samples, |k| {
        let a = element(ctx, "a", k)?;
        let mut rng = ctx.rng("v", k);
        let s = normal3(&mut rng);
        let v = MinkowskiVector::from_space_time(s, rng.random_range(-1.0..1.0));
        let l = rho(&a);
        Ok(rho_defining_residual(&a, &l, &v))
    })?;
    Ok(Outcome::new(err, ctx.samples))
}

fn lorentz(m: [[f64; 4]; 4]) -> LorentzMatrix {
    LorentzMatrix::from_matrix(Matrix4::from_fn(|r, c| m[r][c]))
}

/// Right-handed rotation by `angle` about the unit vector `n` (Rodrigues).
fn rotation_oracle(n: [f64; 3], angle: f64) -> LorentzMatrix {
    let (s, c) = angle.sin_cos();
    let mut m = [[0.0; 4]; 4];
    let k = [[0.0, -n[2], n[1]], [n[2], 0.0, -n[0]], [-n[1], n[0], 0.0]];
    for i in 0..3 {
        for j in 0..3 {
            let delta = if i == j { 1.0 } else { 0.0 };
            m[i][j] = c * delta + s * k[i][j] + (1.0 - c) * n[i] * n[j];
        }
    }
    m[3][3] = 1.0;
    lorentz(m)
}

/// Pure boost of rapidity `eta` along the unit vector `n`.
fn boost_oracle(n: [f64; 3], eta: f64) -> LorentzMatrix {
    let (ch, sh) = (eta.cosh(), eta.sinh());
    let mut m = [[0.0; 4]; 4];
    for i in 0..3 {
        for j in 0..3 {
            let delta = if i == j { 1.0 } else { 0.0 };
            m[i][j] = delta + (ch - 1.0) * n[i] * n[j];
        }
        m[i][3] = sh * n[i];
        m[3][i] = sh * n[i];
    }
    m[3][3] = ch;
    lorentz(m)
}

/// The images of the diagonal generators and of general rotations and
/// boosts against matrices built directly.
fn generators(ctx: &Ctx) -> R {
    let diag = |a: C64| ComplexMatrix2::new(a, C64::new(0.0, 0.0), C64::new(0.0, 0.0), a.inv());
    let err = par_max(ctx.samples, |k| {
        let mut rng = ctx.rng("gen", k);
        let theta = rng.random_range(-3.0..3.0);
        let eta = rng.random_range(-2.0..2.0);
        let z = [0.0, 0.0, 1.0];
        // diag(e^{i theta/2}, e^{-i theta/2}) turns the (1,2)-plane by -theta
        let phase = rho(&embed_sl2(&diag(C64::from_polar(1.0, 0.5 * theta)))?);
        let stretch = rho(&embed_sl2(&diag(C64::from(f64::exp(0.5 * eta))))?);
        let n = unit3(&mut rng);
        let m = unit3(&mut rng);
        let rot = PoincareElement::rotation(n, theta)?;
        let boost = PoincareElement::boost(m, eta)?;
        Ok(max_of([
            phase.max_abs_diff(&rotation_oracle(z, -theta)),
            stretch.max_abs_diff(&boost_oracle(z, eta)),
            rot.lorentz().max_abs_diff(&rotation_oracle(n, theta)),
            boost.lorentz().max_abs_diff(&boost_oracle(m, eta)),
        ]))
    })?;
    Ok(Outcome::new(err, ctx.samples))
}
