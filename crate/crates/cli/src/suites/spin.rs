use gqweyl_core::clifford::{DiracSpinor, HalfSpinor, C64};
use gqweyl_core::poincare::random_element;
use gqweyl_core::spin::{
    constraint_residual, half_spinor_direction_residual, momentum_3, momentum_p, momentum_q, rho, sample_sigma_with,
    spin_to_zeta, zeta_to_spin, SigmaPoint,
};
use gqweyl_core::{GqError, SpinElement};
use rand::Rng;

use super::{check, indicator, max_of, par_max};
use crate::checks::{CheckDef, Ctx, Outcome};
use crate::config::Suite::Spin;

pub fn checks() -> Vec<CheckDef> {
    vec![
        check("spin.constraints", Spin, "fundamental-relations", 1e-12, 1000, true, constraints),
        check("spin.momentum_null", Spin, "null-future-momentum", 1e-12, 1000, true, momentum_null),
        check("spin.energy", Spin, "momentum-energy", 1e-12, 1000, true, energy),
        check("spin.q_null", Spin, "null-partner-vector", 1e-12, 1000, true, q_null),
        check("spin.q_null_scaled", Spin, "null-partner-vector", 1e-14, 1000, true, q_null_scaled),
        check("spin.p_dot_q", Spin, "null-partner-vector", 1e-12, 1000, true, p_dot_q),
        check("spin.phase_invariance", Spin, "phase-quotient", 1e-12, 1000, true, phase_invariance),
        check("spin.equivariance", Spin, "momentum-equivariance", 1e-10, 1000, true, equivariance),
        check("spin.half_spinor_direction", Spin, "half-spinor-direction", 1e-12, 1000, true, half_spinor_direction),
        check("spin.diffeomorphism", Spin, "spinor-group-diffeomorphism", 1e-12, 1000, true, diffeomorphism),
        check("spin.group_conditions", Spin, "spin-group-conditions", 1e-12, 1000, true, group_conditions),
        check("spin.column_vectors", Spin, "spin-group-columns", 1e-12, 1000, true, column_vectors),
    ]
}

type R = Result<Outcome, GqError>;

fn point(ctx: &Ctx, k: usize) -> Result<SigmaPoint, GqError> {
    sample_sigma_with(&mut ctx.rng("sigma", k))
}

fn over_points<F>(ctx: &Ctx, f: F) -> R
where
    F: Fn(usize, &SigmaPoint) -> Result<f64, GqError> + Sync + Send,
{
    let err = par_max(ctx.samples, |k| f(k, &point(ctx, k)?))?;
    Ok(Outcome::new(err, ctx.samples))
}

/// Both forms of the constraints on members, and rejection by both forms
/// of deliberately perturbed non-members.
fn constraints(ctx: &Ctx) -> R {
    over_points(ctx, |k, pt| {
        let r = constraint_residual(pt.zeta());
        let mut rng = ctx.rng("perturb", k);
        let scale = 1.0 + rng.random_range(1e-3..1e-1) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let off = DiracSpinor::from_halves(pt.zeta_prime(), pt.zeta_second() * C64::from(scale));
        let q = constraint_residual(&off);
        let both_reject = q.half_spinor > 1e-6 && q.norm.max(q.chirality) > 1e-6;
        Ok(max_of([r.norm, r.chirality, r.half_spinor, indicator(both_reject)]))
    })
}

fn momentum_null(ctx: &Ctx) -> R {
    over_points(ctx, |_, pt| {
        let p = momentum_p(pt);
        Ok(max_of([p.dot(&p).abs(), indicator(p.time() > 0.0)]))
    })
}

/// `P = E (u, 1)` with `E = |zeta'|^2 / sqrt 2`, against the half-spinor
/// formula for the spatial part.
fn energy(ctx: &Ctx) -> R {
    over_points(ctx, |_, pt| {
        let p = momentum_p(pt);
        let (p3, e) = momentum_3(&pt.zeta_prime())?;
        let closed = pt.zeta_prime().norm_squared() / std::f64::consts::SQRT_2;
        let s = p.space();
        let spatial = (0..3).map(|j| (s[j] - p3[j]).abs());
        let norm = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
        Ok(max_of(spatial.chain([(p.time() - closed).abs(), (e - closed).abs(), (norm - e).abs()])))
    })
}

fn q_null(ctx: &Ctx) -> R {
    over_points(ctx, |_, pt| {
        let q = momentum_q(pt);
        Ok(q.dot(&q).abs())
    })
}

/// `|Q.Q| / (Q^4)^2`: the size-independent form of the previous check,
/// which rounding of large sampled `zeta''` cannot meet in absolute terms.
fn q_null_scaled(ctx: &Ctx) -> R {
    over_points(ctx, |_, pt| {
        let q = momentum_q(pt);
        Ok(q.dot(&q).abs() / (q.time() * q.time()))
    })
}

fn p_dot_q(ctx: &Ctx) -> R {
    over_points(ctx, |_, pt| Ok((momentum_p(pt).dot(&momentum_q(pt)) + 1.0).abs()))
}

fn phase_invariance(ctx: &Ctx) -> R {
    over_points(ctx, |k, pt| {
        let theta = ctx.rng("theta", k).random_range(0.0..std::f64::consts::TAU);
        let moved = pt.phase(theta);
        Ok(max_of([
            momentum_p(&moved).max_abs_diff(&momentum_p(pt)),
            momentum_q(&moved).max_abs_diff(&momentum_q(pt)),
        ]))
    })
}

/// Spin elements: a rotation composed with a boost of rapidity up to 1.5.
pub(crate) fn random_spin(ctx: &Ctx, label: &str, k: usize) -> SpinElement {
    *random_element(&mut ctx.rng(label, k), 1.5, 0.0).spin()
}

fn equivariance(ctx: &Ctx) -> R {
    over_points(ctx, |k, pt| {
        let a = random_spin(ctx, "spin", k);
        let lhs = momentum_p(&a.act(pt));
        let rhs = rho(&a).apply(&momentum_p(pt));
        Ok(lhs.max_abs_diff(&rhs))
    })
}

fn half_spinor_direction(ctx: &Ctx) -> R {
    over_points(ctx, |_, pt| half_spinor_direction_residual(&pt.zeta_prime()))
}

fn spinor_dist(a: &DiracSpinor, b: &DiracSpinor) -> f64 {
    (a.0 - b.0).iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// `zeta -> A -> zeta` on samples, plus the identity and its negative.
fn diffeomorphism(ctx: &Ctx) -> R {
    let e1 = HalfSpinor::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    let base = DiracSpinor::from_halves(e1, e1);
    let id = spin_to_zeta(&SpinElement::identity());
    let neg = spin_to_zeta(&SpinElement::identity().neg());
    let fixed = max_of([spinor_dist(id.zeta(), &base), spinor_dist(neg.zeta(), &base.scale(C64::new(-1.0, 0.0)))]);
    let mut out = over_points(ctx, |_, pt| {
        let back = spin_to_zeta(&zeta_to_spin(pt));
        Ok(spinor_dist(back.zeta(), pt.zeta()))
    })?;
    out.max_err = max_of([out.max_err, fixed]);
    Ok(out)
}

fn group_conditions(ctx: &Ctx) -> R {
    over_points(ctx, |_, pt| Ok(zeta_to_spin(pt).deviation().max()))
}

/// The columns add up to `zeta`, and the element is `embed_sl2` of its own
/// upper-left block (deviation relative to the squared entry size, since
/// the lower block is the inverse of the upper one).
fn column_vectors(ctx: &Ctx) -> R {
    over_points(ctx, |_, pt| {
        let a = zeta_to_spin(pt);
        let m = a.matrix();
        let sum = DiracSpinor(m.column(0) + m.column(2));
        let block = gqweyl_core::spin::embed_sl2(&a.sl2_block())?;
        let size = m.iter().map(|c| c.norm()).fold(1.0, f64::max);
        let dev = (block.matrix() - m).iter().map(|c| c.norm()).fold(0.0, f64::max) / (size * size);
        Ok(max_of([spinor_dist(&sum, pt.zeta()), dev]))
    })
}
