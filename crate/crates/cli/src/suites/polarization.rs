use gqweyl_core::clifford::{HalfSpinor, C64};
use gqweyl_core::polarization::{
    basis_solution, check_polarized, gamma_p_block, gamma_p_block_check, helicity_eigenvector, light_cone_point,
    make_polarized, momentum_constraint_residual, phi_eval, reconstruct_momentum, solution_space_nullity,
    verify_polarization, Corrupted, MomentumSpinor, PolarizedMomentum, PolarizedReport, PolarizedWave, Profile,
    WaveFunction,
};
use gqweyl_core::rng::{half_spinor_normal, normal3};
use gqweyl_core::{GqError, Helicity, MinkowskiVector, ModelParams, MotionPoint, PrequantumPoint, TangentX};
use rand::Rng;

use super::{check, indicator, max_of, par_max};
use crate::checks::{CheckDef, Ctx, Outcome};
use crate::config::Suite::Polarization;

pub fn checks() -> Vec<CheckDef> {
    vec![
        check("polarization.omega_wedge_phi", Polarization, "polarization-condition", 1e-10, 200, true, omega_wedge_phi),
        check("polarization.phi_kernel", Polarization, "polarization-leaves", 1e-12, 200, true, phi_kernel),
        check("polarization.isotropy", Polarization, "polarization-leaves", 1e-12, 200, true, isotropy),
        check("polarization.phi_values", Polarization, "polarizer", 1e-15, 4, false, phi_values),
        check("polarization.solution_space", Polarization, "momentum-polarized-space", 0.0, 200, true, solution_space),
        check("polarization.basis_solution", Polarization, "momentum-polarized-space", 1e-12, 200, true, basis),
        check("polarization.basis_continuity", Polarization, "momentum-polarized-space", 2.0, 20, true, basis_continuity),
        check("polarization.gamma_block", Polarization, "gamma-block-formula", 1e-12, 500, true, gamma_block),
        check("polarization.covariant_constancy", Polarization, "covariant-constancy", 1e-6, 200, true, covariant_constancy),
        check("polarization.step_convergence", Polarization, "covariant-constancy", 0.5, 200, true, step_convergence),
        check("polarization.x_independence", Polarization, "polarized-conditions", 1e-10, 200, true, x_independence),
        check("polarization.scalar_conditions", Polarization, "polarized-conditions", 1e-8, 200, true, scalar_conditions),
        check("polarization.homogeneity", Polarization, "polarized-wave-function", 1e-8, 200, true, homogeneity),
        check("polarization.equivariance", Polarization, "equivariant-functions", 1e-10, 100, true, equivariance),
        check("polarization.negative_control", Polarization, "covariant-constancy", 1e-3, 200, true, negative_control),
        check("polarization.reconstruction", Polarization, "polarized-wave-function", 1e-12, 200, true, reconstruction),
    ]
}

type R = Result<Outcome, GqError>;

/// Step of the covariant-derivative differences.
const STEP: f64 = 1e-4;

fn motion_report(ctx: &Ctx) -> Result<gqweyl_core::polarization::PolarizationReport, GqError> {
    verify_polarization(&ctx.params, ctx.sub_seed("motions"), ctx.samples)
}

fn omega_wedge_phi(ctx: &Ctx) -> R {
    Ok(Outcome::new(motion_report(ctx)?.wedge, ctx.samples))
}

/// `ker phi` is three-dimensional and has no momentum component.
fn phi_kernel(ctx: &Ctx) -> R {
    let r = motion_report(ctx)?;
    Ok(Outcome::new(max_of([r.kernel_dimension_error as f64, r.kernel_momentum_leak]), ctx.samples))
}

fn isotropy(ctx: &Ctx) -> R {
    Ok(Outcome::new(motion_report(ctx)?.isotropy, ctx.samples))
}

/// Determinant values at `p = (0, 0, 1)`: `1` on the momentum unit
/// vectors, unchanged by an added position part, `0` with a repeated slot,
/// `1/2` at `2p`.
fn phi_values(_: &Ctx) -> R {
    let m = MotionPoint { p: [0.0, 0.0, 1.0], x: [0.0; 3] };
    let e = |k: usize| {
        let mut dp = [0.0; 3];
        dp[k] = 1.0;
        TangentX::momentum(dp)
    };
    let mixed = TangentX { dp: [1.0, 0.0, 0.0], dx: [0.4, -1.0, 2.0] };
    let m2 = MotionPoint { p: [0.0, 0.0, 2.0], x: [0.0; 3] };
    let err = max_of([
        (phi_eval(&m, &e(0), &e(1), &e(2))? - 1.0).abs(),
        (phi_eval(&m, &mixed, &e(1), &e(2))? - 1.0).abs(),
        phi_eval(&m, &e(0), &e(0), &e(2))?.abs(),
        (phi_eval(&m2, &e(0), &e(1), &e(2))? - 0.5).abs(),
    ]);
    Ok(Outcome::new(err, 4))
}

fn null_momentum(ctx: &Ctx, k: usize) -> Result<MinkowskiVector, GqError> {
    light_cone_point(&half_spinor_normal(&mut ctx.rng("momentum", k)))
}

fn solution_space(ctx: &Ctx) -> R {
    let err = par_max(ctx.samples, |k| {
        let p = null_momentum(ctx, k)?;
        let dims = Helicity::both().map(|chi| solution_space_nullity(&p, chi, 1e-9).abs_diff(1));
        Ok(dims.into_iter().max().unwrap_or(0) as f64)
    })?;
    Ok(Outcome::new(err, ctx.samples))
}

/// Unit-norm basis spinors solve both constraints (relative to the
/// energy), plus the two closed forms at `P = (0, 0, 1, 1)`.
fn basis(ctx: &Ctx) -> R {
    let north = MinkowskiVector::new(0.0, 0.0, 1.0, 1.0);
    let neg = basis_solution(&north, Helicity::Negative)?;
    let pos = basis_solution(&north, Helicity::Positive)?;
    let mut e_neg = gqweyl_core::DiracSpinor::zero();
    e_neg.0[0] = C64::from(1.0);
    let mut e_pos = gqweyl_core::DiracSpinor::zero();
    e_pos.0[3] = C64::from(1.0);
    let fixed = max_of([(neg.0 - e_neg.0).norm(), (pos.0 - e_pos.0).norm()]);
    let err = par_max(ctx.samples, |k| {
        let p = null_momentum(ctx, k)?;
        let scale = p.time().max(1.0);
        let mut err: f64 = 0.0;
        for chi in Helicity::both() {
            let psi = basis_solution(&p, chi)?;
            err = max_of([err, momentum_constraint_residual(&p, &psi, chi) / scale, (psi.norm() - 1.0).abs()]);
        }
        Ok(err)
    })?;
    Ok(Outcome::new(max_of([err, fixed]), ctx.samples))
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn unit(a: [f64; 3]) -> [f64; 3] {
    let n = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
    a.map(|c| c / n)
}

/// Largest `|psi(u_{k+1}) - psi(u_k)| / step` along great circles that stay
/// off both polar caps (normal tilted less than 60 degrees from `e_3`).
/// The smooth rate stays below `1 / sqrt(2 (1 - sin 1))`; a phase jump would
/// show up as `~ 1 / step`.
fn basis_continuity(ctx: &Ctx) -> R {
    let steps = 2000;
    let err = par_max(ctx.samples, |k| {
        let mut rng = ctx.rng("circle", k);
        let tilt: f64 = rng.random_range(0.0..1.0);
        let az: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let n = [tilt.sin() * az.cos(), tilt.sin() * az.sin(), tilt.cos()];
        let e1 = unit(cross(&n, &[1.0, 0.0, 0.0]));
        let e2 = cross(&n, &e1);
        let dt = std::f64::consts::TAU / steps as f64;
        let at = |j: usize| {
            let (s, c) = (dt * j as f64).sin_cos();
            std::array::from_fn(|i| c * e1[i] + s * e2[i])
        };
        let mut worst: f64 = 0.0;
        for chi in Helicity::both() {
            let mut prev = helicity_eigenvector(&at(0), chi);
            for j in 1..=steps {
                let cur = helicity_eigenvector(&at(j), chi);
                worst = max_of([worst, (cur - prev).norm() / dt]);
                prev = cur;
            }
        }
        Ok(worst)
    })?;
    Ok(Outcome::new(err, ctx.samples))
}

/// Entrywise block formula, and its invariance under `Z' -> e^{i theta} Z'`.
fn gamma_block(ctx: &Ctx) -> R {
    let q = 2f64.powf(0.25);
    let fixed = gamma_p_block_check(&HalfSpinor::new(C64::from(q), C64::from(0.0)))?;
    let err = par_max(ctx.samples, |k| {
        let mut rng = ctx.rng("spinor", k);
        let z = half_spinor_normal(&mut rng);
        let theta = rng.random_range(0.0..std::f64::consts::TAU);
        let turned = gamma_p_block(&(z * C64::from_polar(1.0, theta)));
        let phase = gqweyl_core::clifford::max_abs(&(turned - gamma_p_block(&z)));
        Ok(max_of([gamma_p_block_check(&z)?, phase]))
    })?;
    Ok(Outcome::new(max_of([err, fixed]), ctx.samples))
}

/// The explicit polarized wave exists for `chi = -1` only; `hbar` follows
/// the run.
fn negative_params(ctx: &Ctx) -> ModelParams {
    ModelParams { chi: Helicity::Negative, ..ctx.params }
}

fn wave() -> Result<PolarizedWave<PolarizedMomentum>, GqError> {
    make_polarized(PolarizedMomentum::new(Profile::default(), Helicity::Negative))
}

fn wave_with(ctx: &Ctx, w: &dyn WaveFunction, label: &str) -> Result<PolarizedReport, GqError> {
    let support = Profile::default().support();
    check_polarized(w, &negative_params(ctx), ctx.sub_seed(label), ctx.samples, STEP, support)
}

fn polarized_report(ctx: &Ctx) -> Result<PolarizedReport, GqError> {
    wave_with(ctx, &wave()?, "bundle")
}

fn covariant_constancy(ctx: &Ctx) -> R {
    Ok(Outcome::new(polarized_report(ctx)?.wedge, ctx.samples))
}

/// `|wedge(h) / wedge(h/2) - 4|`
fn step_convergence(ctx: &Ctx) -> R {
    Ok(Outcome::new((polarized_report(ctx)?.convergence_ratio() - 4.0).abs(), ctx.samples))
}

fn x_independence(ctx: &Ctx) -> R {
    Ok(Outcome::new(polarized_report(ctx)?.d_x, ctx.samples))
}

/// Antiholomorphic dependence on `Z'` and `dPsi / d conj Z'' = Z' Psi`.
fn scalar_conditions(ctx: &Ctx) -> R {
    let r = polarized_report(ctx)?;
    Ok(Outcome::new(max_of([r.d_zp, r.d_zs_bar]), ctx.samples))
}

fn homogeneity(ctx: &Ctx) -> R {
    Ok(Outcome::new(polarized_report(ctx)?.homogeneity, ctx.samples))
}

fn equivariance(ctx: &Ctx) -> R {
    Ok(Outcome::new(polarized_report(ctx)?.equivariance, ctx.samples))
}

/// Ratio of the intact residual to that of the wave multiplied by
/// `1 + sin(x1) / 2`; the corrupted one must be larger by three orders.
fn negative_control(ctx: &Ctx) -> R {
    let good = polarized_report(ctx)?.wedge;
    let bad = wave_with(ctx, &Corrupted { inner: wave()?, amplitude: 0.5 }, "bundle")?.wedge;
    let ratio = if bad > 0.0 { good / bad } else { f64::INFINITY };
    Ok(Outcome::new(ratio, ctx.samples))
}

/// `2 Z' Psi` returns the momentum spinor; the zero profile gives zero.
fn reconstruction(ctx: &Ctx) -> R {
    let m = PolarizedMomentum::new(Profile::default(), Helicity::Negative);
    let w = make_polarized(m)?;
    let zero = make_polarized(PolarizedMomentum::new(Profile::Zero, Helicity::Negative))?;
    let (a, b) = Profile::default().support().unwrap_or((0.5, 2.5));
    let err = par_max(ctx.samples, |k| {
        let mut rng = ctx.rng("bundle", k);
        let e = rng.random_range(a..b);
        let z = half_spinor_normal(&mut rng);
        // rescale so that |Z'|^2 / sqrt 2 = e, keeping the direction random
        let zp = z * C64::from((e * std::f64::consts::SQRT_2).sqrt() / z.norm());
        let y = PrequantumPoint::new(zp, normal3(&mut rng))?;
        let p = light_cone_point(&zp)?;
        let back = reconstruct_momentum(&w, &y);
        let expect = m.eval(&p).zeta_prime();
        Ok(max_of([(back - expect).norm(), zero.eval(&y).norm(), indicator(p.time() > 0.0)]))
    })?;
    Ok(Outcome::new(err, ctx.samples))
}
