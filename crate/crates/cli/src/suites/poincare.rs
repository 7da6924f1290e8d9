use gqweyl_core::lightcone::{
    build_nodes_windowed, chirality_residual, random_probes, weyl_residual, GradientMethod, QuadratureSpec,
    SpacetimeField, TransformedField,
};
use gqweyl_core::poincare::{
    act_group, act_momentum, act_momentum_translated, act_spacetime, boosted_window, compose, random_element,
    spinor_difference, PoincareElement,
};
use gqweyl_core::polarization::{momentum_constraint_residual, MomentumSpinor, PolarizedMomentum, Profile};
use gqweyl_core::rng::{normal3, unit3};
use gqweyl_core::spin::{constraint_residual, momentum_p, sample_sigma_with};
use gqweyl_core::{GqError, GroupPoint, Helicity, MinkowskiVector, ModelParams};
use rand::Rng;

use super::{check, max_of, par_max};
use crate::checks::{CheckDef, Ctx, Outcome};
use crate::config::Suite::Poincare;

pub fn checks() -> Vec<CheckDef> {
    vec![
        check("poincare.anti_homomorphism", Poincare, "solution-representation", 1e-10, 100, true, anti_homomorphism),
        check("poincare.composition", Poincare, "group-action", 1e-10, 100, true, composition),
        check("poincare.group_action", Poincare, "group-action", 1e-12, 100, true, group_action),
        check("poincare.momentum_action", Poincare, "momentum-action", 1e-10, 200, true, momentum_action),
        check("poincare.covariance", Poincare, "solution-representation", 1e-6, 8, true, covariance),
        check("poincare.chirality", Poincare, "solution-representation", 1e-12, 8, true, chirality),
        check("poincare.solutions_preserved", Poincare, "solution-representation", 3.0, 8, true, solutions_preserved),
        check("poincare.solutions_order", Poincare, "solution-representation", 0.1, 8, true, solutions_order),
    ]
}

type R = Result<Outcome, GqError>;

const MAX_RAPIDITY: f64 = 1.5;
const MAX_SHIFT: f64 = 1.0;
/// Rule and step of the finite-difference Weyl checks on acted fields.
const LIGHT: (usize, usize) = (12, 8);
const FD_STEP: f64 = 1e-3;
const PROBES: usize = 10;

fn element(ctx: &Ctx, label: &str, k: usize) -> PoincareElement {
    random_element(&mut ctx.rng(label, k), MAX_RAPIDITY, MAX_SHIFT)
}

/// `samples` random elements followed by the configured ones.
fn elements(ctx: &Ctx) -> Vec<PoincareElement> {
    (0..ctx.samples).map(|k| element(ctx, "element", k)).chain(ctx.elements.iter().copied()).collect()
}

fn params(ctx: &Ctx, chi: Helicity) -> ModelParams {
    ModelParams { chi, ..ctx.params }
}

fn momentum(chi: Helicity) -> PolarizedMomentum {
    PolarizedMomentum::new(Profile::default(), chi)
}

/// Any spinor field obeys the law; a coarse rule keeps it cheap.
fn small_field(ctx: &Ctx) -> Result<TransformedField, GqError> {
    let spec = QuadratureSpec { n_radial: 6, n_angular: 4, ..ctx.quadrature };
    TransformedField::from_spec(&momentum(Helicity::Negative), &spec, &params(ctx, Helicity::Negative))
}

fn random_r<G: Rng>(rng: &mut G) -> MinkowskiVector {
    MinkowskiVector::from_space_time(normal3(rng), rng.random_range(-1.0..1.0))
}

/// `g2.(g1.F) = (g1 g2).F` on fields, and the same order reversal for the
/// momentum action.
fn anti_homomorphism(ctx: &Ctx) -> R {
    let f = small_field(ctx)?;
    let psi = momentum(Helicity::Negative);
    let err = par_max(ctx.samples, |k| {
        let (g1, g2) = (element(ctx, "g1", k), element(ctx, "g2", k));
        let r = random_r(&mut ctx.rng("r", k));
        let nested = act_spacetime(&g2, act_spacetime(&g1, &f)).eval(&r);
        let once = act_spacetime(&compose(&g1, &g2), &f).eval(&r);
        let size = max_of([once.norm(), 1e-300]);
        let u = unit3(&mut ctx.rng("p", k));
        let e = ctx.rng("e", k).random_range(0.2..4.0);
        let p = MinkowskiVector::from_space_time(u.map(|c| e * c), e);
        let m_nested = act_momentum(&g2, act_momentum(&g1, psi)).eval(&p);
        let m_once = act_momentum(&compose(&g1, &g2), psi).eval(&p);
        let m_size = max_of([m_once.norm(), 1.0]);
        Ok(max_of([spinor_difference(&nested, &once) / size, spinor_difference(&m_nested, &m_once) / m_size]))
    })?;
    Ok(Outcome::new(err, ctx.samples))
}

fn group_point(ctx: &Ctx, k: usize) -> Result<GroupPoint, GqError> {
    let mut rng = ctx.rng("point", k);
    let zeta = sample_sigma_with(&mut rng)?;
    Ok(GroupPoint::new(zeta, random_r(&mut rng)))
}

fn point_gap(a: &GroupPoint, b: &GroupPoint) -> f64 {
    max_of([spinor_difference(a.zeta.zeta(), b.zeta.zeta()), a.r.max_abs_diff(&b.r)])
}

/// `(g2 g1).x = g2.(g1.x)`, the identity is neutral, translations add.
fn composition(ctx: &Ctx) -> R {
    let err = par_max(ctx.samples, |k| {
        let pt = group_point(ctx, k)?;
        let (g1, g2) = (element(ctx, "g1", k), element(ctx, "g2", k));
        let lhs = act_group(&compose(&g2, &g1), &pt);
        let rhs = act_group(&g2, &act_group(&g1, &pt));
        let mut rng = ctx.rng("c", k);
        let (c1, c2) = (random_r(&mut rng), random_r(&mut rng));
        let sum = compose(&PoincareElement::translation(c2), &PoincareElement::translation(c1));
        let neutral = max_of([
            compose(&g1, &PoincareElement::identity()).max_abs_diff(&g1),
            compose(&PoincareElement::identity(), &g1).max_abs_diff(&g1),
        ]);
        Ok(max_of([point_gap(&lhs, &rhs), neutral, sum.max_abs_diff(&PoincareElement::translation(c1 + c2))]))
    })?;
    Ok(Outcome::new(err, ctx.samples))
}

/// The action stays on the spinor manifold, is trivial for the identity,
/// and moves `P` by the Lorentz image (relative to its energy).
fn group_action(ctx: &Ctx) -> R {
    let err = par_max(ctx.samples, |k| {
        let pt = group_point(ctx, k)?;
        let g = element(ctx, "g", k);
        let moved = act_group(&g, &pt);
        let c = constraint_residual(moved.zeta.zeta());
        let p = g.lorentz().apply(&momentum_p(&pt.zeta));
        let equivariance = momentum_p(&moved.zeta).max_abs_diff(&p) / p.time();
        let id = point_gap(&act_group(&PoincareElement::identity(), &pt), &pt);
        Ok(max_of([c.norm, c.chirality, c.half_spinor, equivariance, id]))
    })?;
    Ok(Outcome::new(err, ctx.samples))
}

/// `A^{-1} psi(rho(A) P)` solves the momentum constraints wherever
/// `rho(A) P` sits inside the profile support; the identity and pure
/// translations leave `psi` unchanged.
fn momentum_action(ctx: &Ctx) -> R {
    let err = par_max(ctx.samples, |k| {
        let g = element(ctx, "g", k);
        let mut rng = ctx.rng("p", k);
        let u = unit3(&mut rng);
        let e_img: f64 = rng.random_range(0.6..2.4);
        let kappa = g.lorentz().apply(&MinkowskiVector::from_space_time(u, 1.0)).time();
        let e = e_img / kappa;
        let p = MinkowskiVector::from_space_time(u.map(|c| e * c), e);
        let mut worst: f64 = 0.0;
        for chi in Helicity::both() {
            let psi = momentum(chi);
            let acted = act_momentum(&g, psi).eval(&p);
            let size = max_of([acted.norm(), 1e-300]);
            let unchanged = max_of([
                spinor_difference(&act_momentum(&PoincareElement::identity(), psi).eval(&p), &psi.eval(&p)),
                spinor_difference(&act_momentum(&g.with_shift(MinkowskiVector::ZERO), psi).eval(&p), &act_momentum(&g, psi).eval(&p)),
                spinor_difference(&act_momentum(&PoincareElement::translation(g.shift()), psi).eval(&p), &psi.eval(&p)),
            ]);
            worst = max_of([worst, momentum_constraint_residual(&p, &acted, chi) / (size * e), unchanged]);
        }
        Ok(worst)
    })?;
    Ok(Outcome::new(err, ctx.samples))
}

fn probes(ctx: &Ctx, label: &str) -> Vec<MinkowskiVector> {
    random_probes(ctx.sub_seed(label), "poincare_probes", PROBES, 1.0)
}

/// Transform of the acted momentum spinor on a rule adapted to the image
/// window: the printed action for Lorentz elements, with the plane-wave
/// phase of the translation otherwise.
fn oracle(ctx: &Ctx, g: &PoincareElement, chi: Helicity) -> Result<TransformedField, GqError> {
    let q = ctx.quadrature;
    let spec = QuadratureSpec { n_angular: q.n_angular.max(48), ..q };
    let nodes = build_nodes_windowed(&spec, boosted_window(g, q.e_min, q.e_max))?;
    let pr = params(ctx, chi);
    if g.shift() == MinkowskiVector::ZERO {
        Ok(TransformedField::new(&act_momentum(g, momentum(chi)), &nodes, &pr))
    } else {
        Ok(TransformedField::new(&act_momentum_translated(g, momentum(chi), &pr), &nodes, &pr))
    }
}

/// `transform(g.psi) = g.transform(psi)` for every element; even sample
/// indices drop the translation to exercise the printed momentum action.
fn covariance(ctx: &Ctx) -> R {
    let grid = probes(ctx, "covariance");
    let gs: Vec<PoincareElement> = elements(ctx)
        .into_iter()
        .enumerate()
        .map(|(k, g)| if k % 2 == 0 && k < ctx.samples { g.with_shift(MinkowskiVector::ZERO) } else { g })
        .collect();
    let mut err: f64 = 0.0;
    for chi in Helicity::both() {
        let f = TransformedField::from_spec(&momentum(chi), &ctx.quadrature, &params(ctx, chi))?;
        for g in &gs {
            let rhs = oracle(ctx, g, chi)?;
            let lhs = act_spacetime(g, &f);
            err = max_of([err, par_max(grid.len(), |k| Ok(spinor_difference(&lhs.eval(&grid[k]), &rhs.eval(&grid[k]))))?]);
        }
    }
    Ok(Outcome::new(err, 2 * gs.len()))
}

fn light_field(ctx: &Ctx, chi: Helicity) -> Result<TransformedField, GqError> {
    let spec = QuadratureSpec { n_radial: LIGHT.0, n_angular: LIGHT.1, ..ctx.quadrature };
    TransformedField::from_spec(&momentum(chi), &spec, &params(ctx, chi))
}

fn chirality(ctx: &Ctx) -> R {
    let grid = probes(ctx, "chirality");
    let gs = elements(ctx);
    let mut err: f64 = 0.0;
    for chi in Helicity::both() {
        let f = light_field(ctx, chi)?;
        for g in &gs {
            let acted = act_spacetime(g, &f);
            for r in &grid {
                let v = acted.eval(r);
                err = max_of([err, chirality_residual(&v, chi) / max_of([v.norm(), 1e-300])]);
            }
        }
    }
    Ok(Outcome::new(err, 2 * gs.len()))
}

fn fd_residual(field: &dyn SpacetimeField, grid: &[MinkowskiVector], h: f64) -> Result<f64, GqError> {
    Ok(weyl_residual(field, grid, GradientMethod::FiniteDifference(h))?.dirac)
}

/// Largest ratio of the finite-difference Weyl residual of `g.F` to that
/// of `F` on the same probes.
fn solutions_preserved(ctx: &Ctx) -> R {
    let grid = probes(ctx, "solutions");
    let gs = elements(ctx);
    let mut err: f64 = 0.0;
    for chi in Helicity::both() {
        let f = light_field(ctx, chi)?;
        let input = fd_residual(&f, &grid, FD_STEP)?;
        for g in &gs {
            err = max_of([err, fd_residual(&act_spacetime(g, &f), &grid, FD_STEP)? / input]);
        }
    }
    Ok(Outcome::new(err, 2 * gs.len()))
}

/// `|r(h) / r(h/2) / 4 - 1|` for acted fields: their residual is pure
/// stencil truncation, as for solutions.
fn solutions_order(ctx: &Ctx) -> R {
    let grid = probes(ctx, "solutions");
    let gs = elements(ctx);
    let mut err: f64 = 0.0;
    for chi in Helicity::both() {
        let f = light_field(ctx, chi)?;
        for g in &gs {
            let acted = act_spacetime(g, &f);
            let ratio = fd_residual(&acted, &grid, FD_STEP)? / fd_residual(&acted, &grid, 0.5 * FD_STEP)?;
            err = max_of([err, (ratio / 4.0 - 1.0).abs()]);
        }
    }
    Ok(Outcome::new(err, 2 * gs.len()))
}
