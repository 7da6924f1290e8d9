use gqweyl_core::clifford::{HalfSpinor, C64};
use gqweyl_core::fd::{curvature_residual, pullback_alpha_residual};
use gqweyl_core::prequantum::{
    alpha_eval, fundamental_field, p_of_z, project_wy, project_yx, to_z, u1_action,
};
use gqweyl_core::rng::{half_spinor_normal, normal3};
use gqweyl_core::spin::{momentum_3, momentum_p};
use gqweyl_core::symplectic::{flow_kernel, perp_basis, project_wx, random_tangent};
use gqweyl_core::{GqError, GroupPoint, MinkowskiVector, PrequantumPoint, TangentY};
use rand::Rng;

use super::{check, max_of, par_max};
use crate::checks::{CheckDef, Ctx, Outcome};
use crate::config::Suite::Prequantum;
use crate::suites::symplectic::group_point;

pub fn checks() -> Vec<CheckDef> {
    vec![
        check("prequantum.fundamental", Prequantum, "connection-one-form", 1e-12, 500, true, fundamental),
        check("prequantum.curvature", Prequantum, "prequantum-curvature", 1e-6, 500, true, curvature),
        check("prequantum.reduction", Prequantum, "prequantum-reduction", 1e-6, 500, true, reduction),
        check("prequantum.leaf_invariance", Prequantum, "leaf-descent", 1e-8, 200, true, leaf_invariance),
        check("prequantum.phase_flow", Prequantum, "leaf-descent", 1e-12, 200, true, phase_flow),
        check("prequantum.z_leaf", Prequantum, "section-phase", 1e-8, 200, true, z_leaf),
        check("prequantum.z_values", Prequantum, "section-phase", 1e-14, 100, true, z_values),
        check("prequantum.section", Prequantum, "section-normalization", 1e-14, 500, true, section),
        check("prequantum.momentum", Prequantum, "bundle-momentum", 1e-12, 500, true, momentum),
        check("prequantum.diagram", Prequantum, "bundle-diagram", 1e-12, 200, true, diagram),
        check("prequantum.circle_action", Prequantum, "circle-action", 1e-8, 200, true, circle_action),
        check("prequantum.alpha_invariance", Prequantum, "circle-action", 1e-12, 200, true, alpha_invariance),
    ]
}

type R = Result<Outcome, GqError>;

const FD_STEP: f64 = 1e-5;

fn bundle_point(ctx: &Ctx, k: usize) -> Result<PrequantumPoint, GqError> {
    let mut rng = ctx.rng("bundle", k);
    PrequantumPoint::new(half_spinor_normal(&mut rng), normal3(&mut rng))
}

/// Gaussian tangent, unit-normalized.
fn bundle_tangent<G: Rng>(rng: &mut G) -> TangentY {
    let dzp = half_spinor_normal(rng);
    let dx = normal3(rng);
    let n = (dzp.norm_squared() + dx.iter().map(|c| c * c).sum::<f64>()).sqrt();
    TangentY { dzp: dzp / C64::from(n), dx: dx.map(|c| c / n) }
}

fn over_bundle<F>(ctx: &Ctx, f: F) -> R
where
    F: Fn(usize, &PrequantumPoint) -> Result<f64, GqError> + Sync + Send,
{
    let err = par_max(ctx.samples, |k| f(k, &bundle_point(ctx, k)?))?;
    Ok(Outcome::new(err, ctx.samples))
}

fn over_group<F>(ctx: &Ctx, f: F) -> R
where
    F: Fn(usize, &GroupPoint) -> Result<f64, GqError> + Sync + Send,
{
    let err = par_max(ctx.samples, |k| f(k, &group_point(ctx, "point", k)?))?;
    Ok(Outcome::new(err, ctx.samples))
}

/// `alpha = hbar` on the generator of the circle action and zero on pure
/// position vectors.
fn fundamental(ctx: &Ctx) -> R {
    over_bundle(ctx, |k, y| {
        let on_fiber = alpha_eval(y, &fundamental_field(y, &ctx.params), &ctx.params);
        let dx = TangentY { dzp: HalfSpinor::zeros(), dx: normal3(&mut ctx.rng("dx", k)) };
        Ok(max_of([(on_fiber - ctx.params.hbar).abs(), alpha_eval(y, &dx, &ctx.params).abs()]))
    })
}

fn curvature(ctx: &Ctx) -> R {
    over_bundle(ctx, |k, y| {
        let mut rng = ctx.rng("tangent", k);
        let (t1, t2) = (bundle_tangent(&mut rng), bundle_tangent(&mut rng));
        curvature_residual(y, &t1, &t2, &ctx.params, FD_STEP)
    })
}

fn reduction(ctx: &Ctx) -> R {
    over_group(ctx, |k, pt| {
        let t = random_tangent(pt, &mut ctx.rng("tangent", k));
        pullback_alpha_residual(pt, &t, &ctx.params, FD_STEP)
    })
}

fn bundle_dist(a: &PrequantumPoint, b: &PrequantumPoint) -> f64 {
    let dz = (a.z_prime() - b.z_prime()).iter().map(|c| c.norm()).fold(0.0, f64::max);
    max_of((0..3).map(|j| (a.x[j] - b.x[j]).abs()).chain([dz]))
}

/// Translations along `P`, `f1`, `f2` by random amounts in `[-1, 1]` land
/// on the same bundle point.
fn leaf_invariance(ctx: &Ctx) -> R {
    over_group(ctx, |k, pt| {
        let base = project_wy(pt, &ctx.params)?;
        let mut rng = ctx.rng("step", k);
        let mut dr = MinkowskiVector::ZERO;
        let mut err: f64 = 0.0;
        for b in &perp_basis(&pt.momentum()) {
            let s: f64 = rng.random_range(-1.0..1.0);
            dr = dr + *b * s;
            let moved = flow_kernel(pt, &(*b * s), 0.0, &ctx.params);
            err = max_of([err, bundle_dist(&project_wy(&moved, &ctx.params)?, &base)]);
        }
        let moved = flow_kernel(pt, &dr, 0.0, &ctx.params);
        Ok(max_of([err, bundle_dist(&project_wy(&moved, &ctx.params)?, &base)]))
    })
}

/// `zeta -> e^{i theta} zeta` multiplies `Z'` by `e^{i theta}` and keeps `x`.
fn phase_flow(ctx: &Ctx) -> R {
    over_group(ctx, |k, pt| {
        let theta = ctx.rng("theta", k).random_range(0.0..std::f64::consts::TAU);
        let base = project_wy(pt, &ctx.params)?;
        let turned = project_wy(&GroupPoint::new(pt.zeta.phase(theta), pt.r), &ctx.params)?;
        let expect = PrequantumPoint::new(base.z_prime() * C64::from_polar(1.0, theta), base.x)?;
        Ok(bundle_dist(&turned, &expect))
    })
}

/// `Z'` of the phase-corrected spinor is constant along the leaf.
fn z_leaf(ctx: &Ctx) -> R {
    over_group(ctx, |k, pt| {
        let z0 = to_z(pt, &ctx.params).zeta_prime();
        let mut rng = ctx.rng("step", k);
        let mut err: f64 = 0.0;
        for b in &perp_basis(&pt.momentum()) {
            let s: f64 = rng.random_range(-1.0..1.0);
            let moved = flow_kernel(pt, &(*b * s), 0.0, &ctx.params);
            let z = to_z(&moved, &ctx.params).zeta_prime();
            err = max_of([err, (z - z0).iter().map(|c| c.norm()).fold(0.0, f64::max)]);
        }
        Ok(err)
    })
}

/// `R = 0` leaves `zeta` alone; `P.R = pi hbar` flips its sign.
fn z_values(ctx: &Ctx) -> R {
    over_group(ctx, |_, pt| {
        let z = pt.zeta.zeta();
        let at_origin = to_z(&GroupPoint::new(pt.zeta, MinkowskiVector::ZERO), &ctx.params);
        let p = pt.momentum();
        // R = c P^4 e_4 with P.R = c (P^4)^2
        let c = std::f64::consts::PI * ctx.params.hbar / (p.time() * p.time());
        let r = MinkowskiVector::new(0.0, 0.0, 0.0, c * p.time());
        let flipped = to_z(&GroupPoint::new(pt.zeta, r), &ctx.params);
        let scale = z.norm();
        Ok(max_of([
            (at_origin.0 - z.0).norm() / scale,
            (flipped.0 + z.0).norm() / scale,
        ]))
    })
}

fn section(ctx: &Ctx) -> R {
    over_bundle(ctx, |_, y| Ok((y.z_second().dotc(&y.z_prime()) - C64::from(1.0)).norm()))
}

/// `p(Z')` after the projection against the half-spinor momentum, and the
/// value at `Z' = (2^{1/4}, 0)`.
fn momentum(ctx: &Ctx) -> R {
    let q = 2f64.powf(0.25);
    let y = PrequantumPoint::new(HalfSpinor::new(C64::from(q), C64::from(0.0)), [1.0, 2.0, 3.0])?;
    let m = project_yx(&y)?;
    let fixed = max_of((0..3).flat_map(|j| [(m.p[j] - [0.0, 0.0, 1.0][j]).abs(), (m.x[j] - y.x[j]).abs()]));
    let mut out = over_group(ctx, |_, pt| {
        let y = project_wy(pt, &ctx.params)?;
        let (p3, _) = momentum_3(&pt.zeta.zeta_prime())?;
        let p = p_of_z(&y.z_prime())?;
        Ok(max_of((0..3).map(|j| (p[j] - p3[j]).abs())))
    })?;
    out.max_err = max_of([out.max_err, fixed]);
    Ok(out)
}

/// Both routes to the space of motions agree, and the momentum equals the
/// spatial part of `P(zeta)`.
fn diagram(ctx: &Ctx) -> R {
    over_group(ctx, |_, pt| {
        let direct = project_wx(pt, &ctx.params)?;
        let via = project_yx(&project_wy(pt, &ctx.params)?)?;
        let s = momentum_p(&pt.zeta).space();
        Ok(max_of((0..3).flat_map(|j| {
            [(direct.p[j] - via.p[j]).abs(), (direct.x[j] - via.x[j]).abs(), (via.p[j] - s[j]).abs()]
        })))
    })
}

/// Identity at `0` and `2 pi`, fiber invariance of the projection, and the
/// finite-difference generator against the fundamental field.
fn circle_action(ctx: &Ctx) -> R {
    over_bundle(ctx, |k, y| {
        let p = &ctx.params;
        let theta = ctx.rng("theta", k).random_range(0.0..std::f64::consts::TAU);
        let base = project_yx(y)?;
        let turned = project_yx(&u1_action(theta, y, p))?;
        let fiber = max_of((0..3).flat_map(|j| [(turned.p[j] - base.p[j]).abs(), (turned.x[j] - base.x[j]).abs()]));
        let h = 1e-5;
        let fwd = u1_action(h, y, p).z_prime();
        let back = u1_action(-h, y, p).z_prime();
        let velocity = (fwd - back) / C64::from(2.0 * h);
        let gen = (velocity - fundamental_field(y, p).dzp).iter().map(|c| c.norm()).fold(0.0, f64::max);
        Ok(max_of([
            bundle_dist(&u1_action(0.0, y, p), y),
            bundle_dist(&u1_action(std::f64::consts::TAU, y, p), y) / y.z_prime().norm(),
            fiber,
            gen / y.z_prime().norm(),
        ]))
    })
}

/// `alpha` is unchanged when point and tangent are both moved by the circle
/// action, and stays `hbar` on the generator along the orbit.
fn alpha_invariance(ctx: &Ctx) -> R {
    over_bundle(ctx, |k, y| {
        let p = &ctx.params;
        let mut rng = ctx.rng("tangent", k);
        let theta = rng.random_range(0.0..std::f64::consts::TAU);
        let t = bundle_tangent(&mut rng);
        let moved = u1_action(theta, y, p);
        let pushed = TangentY { dzp: t.dzp * C64::from_polar(1.0, p.chi.sign() * theta), dx: t.dx };
        let along = alpha_eval(&moved, &fundamental_field(&moved, p), p);
        Ok(max_of([(alpha_eval(&moved, &pushed, p) - alpha_eval(y, &t, p)).abs(), (along - p.hbar).abs()]))
    })
}
