use gqweyl_core::clifford::{gamma_vec, C64, I};
use gqweyl_core::lightcone::{
    build_nodes, chirality_residual, fd_gradient, integrate, random_probes, weyl_residual, GradientMethod, Node, QuadratureSpec,
    SpacetimeField, TransformedField,
};
use gqweyl_core::polarization::{MomentumSpinor, PolarizedMomentum, Profile, SpinorFrame};
use gqweyl_core::{DiracSpinor, GqError, Helicity, MinkowskiVector, ModelParams};
use rand::Rng;

use super::{check, indicator, max_of, par_max};
use crate::checks::{CheckDef, Ctx, Outcome};
use crate::config::Suite::Weyl;

pub fn checks() -> Vec<CheckDef> {
    vec![
        check("weyl.dirac_analytic", Weyl, "weyl-solutions", 1e-12, 200, true, dirac_analytic),
        check("weyl.fd_convergence", Weyl, "weyl-solutions", 0.1, 20, true, fd_convergence),
        check("weyl.chirality", Weyl, "weyl-solutions", 1e-12, 200, true, chirality),
        check("weyl.two_component", Weyl, "two-component-form", 1e-12, 50, true, two_component),
        check("weyl.gradient_fd", Weyl, "light-cone-transform", 1e-7, 20, true, gradient_fd),
        check("weyl.plane_wave", Weyl, "light-cone-transform", 1e-12, 50, true, plane_wave),
        check("weyl.linearity", Weyl, "light-cone-transform", 1e-12, 20, true, linearity),
        check("weyl.translation", Weyl, "light-cone-transform", 1e-12, 20, true, translation),
        check("weyl.quadrature_convergence", Weyl, "light-cone-transform", 1e-6, 10, true, quadrature_convergence),
        check("weyl.zero_profile", Weyl, "light-cone-transform", 0.0, 10, true, zero_profile),
        check("weyl.measure", Weyl, "light-cone-measure", 1e-8, 1, false, measure),
    ]
}

type R = Result<Outcome, GqError>;

/// Quadrature for the finite-difference convergence check: the residual
/// ratio is a property of the stencil, not of the resolution.
const LIGHT: (usize, usize) = (12, 8);
const FD_STEP: f64 = 1e-3;
/// Probes fill the default grid box `[-1, 1]^4`.
const HALF_WIDTH: f64 = 1.0;

fn params(ctx: &Ctx, chi: Helicity) -> ModelParams {
    ModelParams { chi, ..ctx.params }
}

fn momentum(chi: Helicity) -> PolarizedMomentum {
    PolarizedMomentum::new(Profile::default(), chi)
}

fn field(ctx: &Ctx, chi: Helicity, spec: &QuadratureSpec) -> Result<TransformedField, GqError> {
    TransformedField::from_spec(&momentum(chi), spec, &params(ctx, chi))
}

fn probes(ctx: &Ctx) -> Vec<MinkowskiVector> {
    random_probes(ctx.sub_seed("probes"), "weyl_probes", ctx.samples, HALF_WIDTH)
}

/// `max_chi f(chi)`
fn both<F: Fn(Helicity) -> Result<f64, GqError>>(f: F) -> Result<f64, GqError> {
    Ok(max_of([f(Helicity::Negative)?, f(Helicity::Positive)?]))
}

/// Analytic Dirac residual relative to the integrand scale.
fn dirac_analytic(ctx: &Ctx) -> R {
    let grid = probes(ctx);
    let err = both(|chi| {
        let f = field(ctx, chi, &ctx.quadrature)?;
        Ok(weyl_residual(&f, &grid, GradientMethod::Analytic)?.dirac / f.integrand_scale())
    })?;
    Ok(Outcome::new(err, 2 * ctx.samples))
}

/// `|r(h) / r(h/2) / 4 - 1|` for the central-difference residual.
fn fd_convergence(ctx: &Ctx) -> R {
    let grid = probes(ctx);
    let spec = QuadratureSpec { n_radial: LIGHT.0, n_angular: LIGHT.1, ..ctx.quadrature };
    let err = both(|chi| {
        let f = field(ctx, chi, &spec)?;
        let coarse = weyl_residual(&f, &grid, GradientMethod::FiniteDifference(FD_STEP))?.dirac;
        let fine = weyl_residual(&f, &grid, GradientMethod::FiniteDifference(0.5 * FD_STEP))?.dirac;
        Ok((coarse / fine / 4.0 - 1.0).abs())
    })?;
    Ok(Outcome::new(err, 2 * ctx.samples))
}

fn chirality(ctx: &Ctx) -> R {
    let grid = probes(ctx);
    let err = both(|chi| {
        let f = field(ctx, chi, &ctx.quadrature)?;
        par_max(grid.len(), |k| Ok(chirality_residual(&f.eval(&grid[k]), chi)))
    })?;
    Ok(Outcome::new(err, 2 * ctx.samples))
}

/// The two-component and four-component residuals from the same
/// derivatives, on the analytic gradient and on finite differences of the
/// light rule.
fn two_component(ctx: &Ctx) -> R {
    let grid = probes(ctx);
    let light = QuadratureSpec { n_radial: LIGHT.0, n_angular: LIGHT.1, ..ctx.quadrature };
    let err = both(|chi| {
        let a = weyl_residual(&field(ctx, chi, &ctx.quadrature)?, &grid, GradientMethod::Analytic)?.form_mismatch;
        let d = weyl_residual(&field(ctx, chi, &light)?, &grid, GradientMethod::FiniteDifference(FD_STEP))?.form_mismatch;
        Ok(max_of([a, d]))
    })?;
    Ok(Outcome::new(err, 2 * ctx.samples))
}

fn spinor_gap(a: &DiracSpinor, b: &DiracSpinor) -> f64 {
    (a.0 - b.0).norm()
}

/// Central differences of step `1e-4` against the closed-form gradient,
/// relative to the integrand scale.
fn gradient_fd(ctx: &Ctx) -> R {
    let grid = probes(ctx);
    let err = both(|chi| {
        let f = field(ctx, chi, &ctx.quadrature)?;
        let scale = f.integrand_scale();
        par_max(grid.len(), |k| {
            let exact = f.analytic_gradient(&grid[k]).ok_or(GqError::AnalyticGradientUnavailable)?;
            let fd = fd_gradient(&f, &grid[k], 1e-4);
            Ok(max_of((0..4).map(|mu| spinor_gap(&exact[mu], &fd[mu]) / scale)))
        })
    })?;
    Ok(Outcome::new(err, 2 * ctx.samples))
}

/// A one-node rule: the field is `w psi(P0) exp(i P0.R / hbar)`, solves the
/// Weyl equation, and has gradient `(i/hbar) w P0_mu psi(P0)` at the origin.
fn plane_wave(ctx: &Ctx) -> R {
    let err = par_max(ctx.samples, |k| {
        let mut rng = ctx.rng("node", k);
        let u = gqweyl_core::rng::unit3(&mut rng);
        let e: f64 = rng.random_range(0.6..2.4);
        let w: f64 = rng.random_range(0.1..2.0);
        let p0 = MinkowskiVector::from_space_time(u.map(|c| e * c), e);
        let r = MinkowskiVector::new(rng.random(), rng.random(), rng.random(), rng.random());
        let mut worst: f64 = 0.0;
        for chi in Helicity::both() {
            let m = momentum(chi);
            let pr = params(ctx, chi);
            let f = TransformedField::new(&m, &[Node { p: p0, w }], &pr);
            let amp = m.eval(&p0).scale(C64::from(w));
            let expect = amp.scale(C64::from_polar(1.0, p0.dot(&r) / pr.hbar));
            let grad = f.analytic_gradient(&MinkowskiVector::ZERO).ok_or(GqError::AnalyticGradientUnavailable)?;
            let lowered = p0.lowered();
            let node_kernel = (gamma_vec(&p0) * amp.0).norm();
            let size = amp.norm() * e / pr.hbar;
            let g = (0..4).map(|mu| spinor_gap(&grad[mu], &amp.scale(I * (lowered[mu] / pr.hbar))) / size);
            let residual = weyl_residual(&f, &[r], GradientMethod::Analytic)?.dirac / size;
            worst = max_of(g.chain([spinor_gap(&f.eval(&r), &expect) / amp.norm(), residual, node_kernel / size]));
        }
        Ok(worst)
    })?;
    Ok(Outcome::new(err, ctx.samples))
}

/// `a psi1 + b psi2` evaluated pointwise.
struct Combination {
    a: C64,
    psi1: PolarizedMomentum,
    b: C64,
    psi2: PolarizedMomentum,
}

impl MomentumSpinor for Combination {
    fn chi(&self) -> Helicity {
        self.psi1.chi
    }

    fn eval(&self, p: &MinkowskiVector) -> DiracSpinor {
        DiracSpinor(self.psi1.eval(p).0 * self.a + self.psi2.eval(p).0 * self.b)
    }
}

/// `psi(P) exp(i P.C / hbar)`
struct Rephased {
    psi: PolarizedMomentum,
    c: MinkowskiVector,
    hbar: f64,
}

impl MomentumSpinor for Rephased {
    fn chi(&self) -> Helicity {
        self.psi.chi
    }

    fn eval(&self, p: &MinkowskiVector) -> DiracSpinor {
        self.psi.eval(p).scale(C64::from_polar(1.0, p.dot(&self.c) / self.hbar))
    }
}

fn field_scale(f: &TransformedField) -> f64 {
    f.integrand_scale().max(f64::MIN_POSITIVE)
}

/// Bump and truncated Gaussian (chart frame) with random complex
/// coefficients.
fn linearity(ctx: &Ctx) -> R {
    let grid = probes(ctx);
    let nodes = build_nodes(&ctx.quadrature)?;
    let mut rng = ctx.rng("coefficients", 0);
    let a = C64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
    let b = C64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
    let err = both(|chi| {
        let pr = params(ctx, chi);
        let psi1 = momentum(chi);
        let psi2 = PolarizedMomentum::new(Profile::GaussianTruncated { center: 1.2, width: 0.3, a: 0.5, b: 2.5 }, chi)
            .with_frame(SpinorFrame::Chart);
        let f1 = TransformedField::new(&psi1, &nodes, &pr);
        let f2 = TransformedField::new(&psi2, &nodes, &pr);
        let sum = TransformedField::new(&Combination { a, psi1, b, psi2 }, &nodes, &pr);
        let scale = a.norm() * field_scale(&f1) + b.norm() * field_scale(&f2);
        par_max(grid.len(), |k| {
            let r = &grid[k];
            let lin = DiracSpinor(f1.eval(r).0 * a + f2.eval(r).0 * b);
            Ok(spinor_gap(&sum.eval(r), &lin) * pr.hbar / scale)
        })
    })?;
    Ok(Outcome::new(err, 2 * ctx.samples))
}

/// `transform(psi)(R + C) = transform(psi e^{i P.C / hbar})(R)`.
fn translation(ctx: &Ctx) -> R {
    let grid = probes(ctx);
    let nodes = build_nodes(&ctx.quadrature)?;
    let err = both(|chi| {
        let pr = params(ctx, chi);
        let f = TransformedField::new(&momentum(chi), &nodes, &pr);
        let scale = field_scale(&f) * pr.hbar;
        par_max(grid.len(), |k| {
            let mut rng = ctx.rng("shift", k);
            let c = MinkowskiVector::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            );
            let moved = TransformedField::new(&Rephased { psi: momentum(chi), c, hbar: pr.hbar }, &nodes, &pr);
            Ok(spinor_gap(&f.eval(&(grid[k] + c)), &moved.eval(&grid[k])) / scale)
        })
    })?;
    Ok(Outcome::new(err, 2 * ctx.samples))
}

/// Relative change of the field between the configured node counts and
/// twice as many in each direction.
fn quadrature_convergence(ctx: &Ctx) -> R {
    let grid = probes(ctx);
    let err = both(|chi| {
        let coarse = field(ctx, chi, &ctx.quadrature)?;
        let fine = field(ctx, chi, &ctx.quadrature.refined(2))?;
        let values: Vec<(DiracSpinor, DiracSpinor)> = grid.iter().map(|r| (coarse.eval(r), fine.eval(r))).collect();
        let size = values.iter().map(|(_, f)| f.norm()).fold(0.0, f64::max);
        Ok(max_of(values.iter().map(|(c, f)| spinor_gap(c, f) / size)))
    })?;
    Ok(Outcome::new(err, 2 * ctx.samples))
}

fn zero_profile(ctx: &Ctx) -> R {
    let grid = probes(ctx);
    let err = both(|chi| {
        let f = TransformedField::from_spec(&PolarizedMomentum::new(Profile::Zero, chi), &ctx.quadrature, &params(ctx, chi))?;
        Ok(max_of(grid.iter().map(|r| f.eval(r).norm()).chain([f.active_nodes() as f64])))
    })?;
    Ok(Outcome::new(err, 2 * ctx.samples))
}

/// `int E dE dOmega` over `[1, 2]` is `6 pi`, `int E^3 dE dOmega` is
/// `15 pi`; every node lies on the future light cone, and one more radial
/// node leaves the polynomial integrals unchanged.
fn measure(_: &Ctx) -> R {
    let spec = QuadratureSpec::new(1.0, 2.0, 8, 8);
    let nodes = build_nodes(&spec)?;
    let pi = std::f64::consts::PI;
    let one = integrate(&nodes, |_| 1.0);
    let e2 = integrate(&nodes, |p| p.time() * p.time());
    let more = build_nodes(&QuadratureSpec { n_radial: 9, ..spec })?;
    let cone = nodes.iter().map(|n| max_of([n.p.dot(&n.p).abs(), indicator(n.p.time() > 0.0)]));
    let err = max_of(
        [
            (one - 6.0 * pi).abs() / (6.0 * pi),
            (e2 - 15.0 * pi).abs() / (15.0 * pi),
            (integrate(&more, |p| p.time() * p.time()) - e2).abs() / e2,
        ]
        .into_iter()
        .chain(cone),
    );
    Ok(Outcome::new(err, nodes.len()))
}
