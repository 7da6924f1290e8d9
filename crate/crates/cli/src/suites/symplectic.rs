use gqweyl_core::clifford::{HalfSpinor, C64};
use gqweyl_core::fd::{d_omega_fd, d_varpi_fd, pullback_omega_residual};
use gqweyl_core::rng::{half_spinor_normal, normal3};
use gqweyl_core::spin::{momentum_3, momentum_p_derivative, sample_sigma_with, sigma_project};
use gqweyl_core::symplectic::{
    flow_kernel, kernel_basis, omega_eval, perp_basis, project_wx, random_tangent, sigma_eval, sigma_rank,
    varpi_eval, RANK_THRESHOLD,
};
use gqweyl_core::{GqError, GroupPoint, MinkowskiVector, MotionPoint, TangentW, TangentX};
use rand::Rng;

use super::{check, max_of, par_max};
use crate::checks::{CheckDef, Ctx, Outcome};
use crate::config::Suite::Symplectic;

pub fn checks() -> Vec<CheckDef> {
    vec![
        check("symplectic.kernel_bilinear", Symplectic, "characteristic-distribution", 1e-10, 100, true, kernel_bilinear),
        check("symplectic.kernel_fd", Symplectic, "characteristic-distribution", 1e-7, 100, true, kernel_fd),
        check("symplectic.phase_generator", Symplectic, "characteristic-distribution", 1e-12, 100, true, phase_generator),
        check("symplectic.momentum_constant", Symplectic, "characteristic-distribution", 1e-10, 100, true, momentum_constant),
        check("symplectic.sigma_fd", Symplectic, "presymplectic-form", 1e-7, 100, true, sigma_fd),
        check("symplectic.rank", Symplectic, "kernel-dimension", 0.0, 100, true, rank),
        check("symplectic.varpi_kernel", Symplectic, "kernel-dimension", 1e-10, 100, true, varpi_kernel),
        check("symplectic.varpi_values", Symplectic, "one-form-on-group", 1e-14, 1, false, varpi_values),
        check("symplectic.pullback_omega", Symplectic, "canonical-descent", 1e-6, 100, true, pullback_omega),
        check("symplectic.omega_values", Symplectic, "twisted-symplectic-form", 1e-15, 1, false, omega_values),
        check("symplectic.omega_closed", Symplectic, "twisted-symplectic-form", 1e-6, 100, true, omega_closed),
        check("symplectic.first_integrals", Symplectic, "projection-to-motions", 1e-8, 100, true, first_integrals),
        check("symplectic.rest_position", Symplectic, "projection-to-motions", 1e-12, 100, true, rest_position),
        check("symplectic.motion_momentum", Symplectic, "projection-to-motions", 1e-12, 100, true, motion_momentum),
    ]
}

type R = Result<Outcome, GqError>;

const FD_STEP: f64 = 1e-5;

/// A spinor-manifold sample with `R` standard normal in all four slots.
pub(crate) fn group_point(ctx: &Ctx, label: &str, k: usize) -> Result<GroupPoint, GqError> {
    let mut rng = ctx.rng(label, k);
    let zeta = sample_sigma_with(&mut rng)?;
    let r = normal3(&mut rng);
    let t = normal3(&mut rng)[0];
    Ok(GroupPoint::new(zeta, MinkowskiVector::from_space_time(r, t)))
}

fn over_points<F>(ctx: &Ctx, f: F) -> R
where
    F: Fn(usize, &GroupPoint) -> Result<f64, GqError> + Sync + Send,
{
    let err = par_max(ctx.samples, |k| f(k, &group_point(ctx, "point", k)?))?;
    Ok(Outcome::new(err, ctx.samples))
}

fn tangents(ctx: &Ctx, pt: &GroupPoint, k: usize, n: usize) -> Vec<TangentW> {
    let mut rng = ctx.rng("tangent", k);
    (0..n).map(|_| random_tangent(pt, &mut rng)).collect()
}

/// Every kernel generator against 50 random tangents.
fn kernel_bilinear(ctx: &Ctx) -> R {
    over_points(ctx, |k, pt| {
        let mut err: f64 = 0.0;
        for kv in &kernel_basis(pt, &ctx.params) {
            for t in &tangents(ctx, pt, k, 50) {
                err = max_of([err, sigma_eval(pt, kv, t, &ctx.params)?.abs()]);
            }
        }
        Ok(err)
    })
}

fn kernel_fd(ctx: &Ctx) -> R {
    over_points(ctx, |k, pt| {
        let mut err: f64 = 0.0;
        for kv in &kernel_basis(pt, &ctx.params) {
            for t in &tangents(ctx, pt, k, 10) {
                err = max_of([err, d_varpi_fd(pt, kv, t, &ctx.params, FD_STEP).abs()]);
            }
        }
        Ok(err)
    })
}

/// `(dzeta, dR) = (i zeta, 0)` pairs to zero with anything.
fn phase_generator(ctx: &Ctx) -> R {
    over_points(ctx, |k, pt| {
        let lam = kernel_basis(pt, &ctx.params)[3];
        let mut err: f64 = 0.0;
        for t in &tangents(ctx, pt, k, 20) {
            err = max_of([err, sigma_eval(pt, &lam, t, &ctx.params)?.abs()]);
        }
        Ok(err)
    })
}

/// The generators translate within `P^perp` and leave `P` fixed.
fn momentum_constant(ctx: &Ctx) -> R {
    over_points(ctx, |_, pt| {
        let p = pt.momentum();
        let mut err: f64 = 0.0;
        for kv in &kernel_basis(pt, &ctx.params) {
            let dp = momentum_p_derivative(pt.zeta.zeta(), &kv.dzeta);
            err = max_of([err, dp.euclidean_norm(), p.dot(&kv.dr).abs()]);
        }
        Ok(err)
    })
}

fn sigma_fd(ctx: &Ctx) -> R {
    over_points(ctx, |k, pt| {
        let ts = tangents(ctx, pt, k, 2);
        let exact = sigma_eval(pt, &ts[0], &ts[1], &ctx.params)?;
        let same = sigma_eval(pt, &ts[0], &ts[0], &ctx.params)?.abs();
        Ok(max_of([(d_varpi_fd(pt, &ts[0], &ts[1], &ctx.params, FD_STEP) - exact).abs(), same]))
    })
}

fn rank(ctx: &Ctx) -> R {
    over_points(ctx, |_, pt| {
        let (rank, nullity) = sigma_rank(pt, &ctx.params, RANK_THRESHOLD)?;
        Ok((rank.abs_diff(6) + nullity.abs_diff(4)) as f64)
    })
}

/// `varpi` vanishes on the three translation generators and equals
/// `chi hbar` on the phase generator.
fn varpi_kernel(ctx: &Ctx) -> R {
    over_points(ctx, |_, pt| {
        let b = kernel_basis(pt, &ctx.params);
        let mut err: f64 = (varpi_eval(pt, &b[3], &ctx.params)? - ctx.params.chi_hbar()).abs();
        for kv in &b[..3] {
            err = max_of([err, varpi_eval(pt, kv, &ctx.params)?.abs()]);
        }
        Ok(err)
    })
}

/// `P = (0, 0, 1, 1)`, with `zeta'' = zeta' / |zeta'|^2`.
fn canonical(r: MinkowskiVector) -> Result<GroupPoint, GqError> {
    let q = 2f64.powf(0.25);
    let zp = HalfSpinor::new(C64::from(q), C64::from(0.0));
    let zs = HalfSpinor::new(C64::from(1.0 / q), C64::from(0.0));
    Ok(GroupPoint::new(sigma_project(zp, zs)?, r))
}

/// Closed-form values at the canonical point: a time translation gives
/// `-P.dR = -1`, the phase direction `chi hbar`, the zero vector zero.
fn varpi_values(ctx: &Ctx) -> R {
    let pt = canonical(MinkowskiVector::ZERO)?;
    let time = TangentW { dzeta: gqweyl_core::DiracSpinor::zero(), dr: MinkowskiVector::new(0.0, 0.0, 0.0, 1.0) };
    let phase = TangentW { dzeta: pt.zeta.zeta().scale(gqweyl_core::clifford::I), dr: MinkowskiVector::ZERO };
    let err = max_of([
        (varpi_eval(&pt, &time, &ctx.params)? + 1.0).abs(),
        (varpi_eval(&pt, &phase, &ctx.params)? - ctx.params.chi_hbar()).abs(),
        varpi_eval(&pt, &TangentW::zero(), &ctx.params)?.abs(),
    ]);
    Ok(Outcome::new(err, 3))
}

fn pullback_omega(ctx: &Ctx) -> R {
    over_points(ctx, |k, pt| {
        let ts = tangents(ctx, pt, k, 2);
        pullback_omega_residual(pt, &ts[0], &ts[1], &ctx.params, FD_STEP)
    })
}

/// `dp ^ dx` on momentum and position unit vectors, zero on pure position
/// pairs, and the area term `+s` on `(e1, 0), (e2, 0)` at `p = (0, 0, 1)`.
fn omega_values(ctx: &Ctx) -> R {
    let m = MotionPoint { p: [0.0, 0.0, 1.0], x: [0.3, -0.2, 0.5] };
    let e1 = [1.0, 0.0, 0.0];
    let e2 = [0.0, 1.0, 0.0];
    let mut rng = ctx.rng("position", 0);
    let (a, b) = (normal3(&mut rng), normal3(&mut rng));
    let p = &ctx.params;
    let err = max_of([
        (omega_eval(&m, &TangentX::momentum(e1), &TangentX::position(e1), p)? - 1.0).abs(),
        omega_eval(&m, &TangentX::position(a), &TangentX::position(b), p)?.abs(),
        (omega_eval(&m, &TangentX::momentum(e1), &TangentX::momentum(e2), p)? - p.spin()).abs(),
    ]);
    Ok(Outcome::new(err, 3))
}

fn random_motion(ctx: &Ctx, k: usize) -> (MotionPoint, [TangentX; 3]) {
    let mut rng = ctx.rng("motion", k);
    let mut p = normal3(&mut rng);
    // keep away from the puncture p = 0
    let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    let len = rng.random_range(0.5..2.5);
    p = p.map(|c| c * len / n);
    let m = MotionPoint { p, x: normal3(&mut rng) };
    let ts = std::array::from_fn(|_| TangentX { dp: normal3(&mut rng), dx: normal3(&mut rng) });
    (m, ts)
}

fn omega_closed(ctx: &Ctx) -> R {
    let err = par_max(ctx.samples, |k| {
        let (m, [a, b, c]) = random_motion(ctx, k);
        Ok(d_omega_fd(&m, &a, &b, &c, &ctx.params, FD_STEP)?.abs())
    })?;
    Ok(Outcome::new(err, ctx.samples))
}

fn motion_dist(a: &MotionPoint, b: &MotionPoint) -> f64 {
    max_of((0..3).flat_map(|j| [(a.p[j] - b.p[j]).abs(), (a.x[j] - b.x[j]).abs()]))
}

/// Exact flow along each generator: translations by `0.1` along `P`,
/// `f1`, `f2` and a phase of `0.1` leave the motion unchanged.
fn first_integrals(ctx: &Ctx) -> R {
    over_points(ctx, |_, pt| {
        let base = project_wx(pt, &ctx.params)?;
        let basis = perp_basis(&pt.momentum());
        let mut err: f64 = 0.0;
        for dr in &basis {
            let moved = flow_kernel(pt, &(*dr * 0.1), 0.0, &ctx.params);
            err = max_of([err, motion_dist(&project_wx(&moved, &ctx.params)?, &base)]);
        }
        let turned = flow_kernel(pt, &MinkowskiVector::ZERO, 0.1, &ctx.params);
        Ok(max_of([err, motion_dist(&project_wx(&turned, &ctx.params)?, &base)]))
    })
}

/// On `t = 0` with `zeta''` parallel to `zeta'`, the motion passes through
/// `x = r`.
fn rest_position(ctx: &Ctx) -> R {
    let err = par_max(ctx.samples, |k| {
        let mut rng = ctx.rng("aligned", k);
        let zp = half_spinor_normal(&mut rng);
        let zs = zp / C64::from(zp.norm_squared());
        let r = normal3(&mut rng);
        let pt = GroupPoint::new(sigma_project(zp, zs)?, MinkowskiVector::from_space_time(r, 0.0));
        let m = project_wx(&pt, &ctx.params)?;
        Ok(max_of((0..3).map(|j| (m.x[j] - r[j]).abs())))
    })?;
    Ok(Outcome::new(err, ctx.samples))
}

fn motion_momentum(ctx: &Ctx) -> R {
    over_points(ctx, |_, pt| {
        let m = project_wx(pt, &ctx.params)?;
        let (p3, _) = momentum_3(&pt.zeta.zeta_prime())?;
        Ok(max_of((0..3).map(|j| (m.p[j] - p3[j]).abs())))
    })
}
