//! Fourier transform over the future light cone, from polarized momentum
//! spinors to solutions of the Weyl equation on Minkowski space.

use std::f64::consts::{PI, TAU};
use std::num::NonZeroUsize;
use std::sync::Arc;

use gauss_quad::GaussLegendre;
use rand::Rng;
use rayon::prelude::*;

use crate::clifford::{gamma_unchecked, metric, pauli_vec, DiracSpinor, HalfSpinor, MinkowskiVector, C64, I};
use crate::error::{GqError, Result};
use crate::polarization::MomentumSpinor;
use crate::rng::{stream, unit3};
use crate::symplectic::{Helicity, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    /// Gauss-Legendre in `E` and `cos(theta)`, uniform in the azimuth.
    #[default]
    ProductGauss,
    /// Density proportional to `E` on the window, uniform directions.
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub e_min: f64,
    pub e_max: f64,
    pub n_radial: usize,
    /// Polar nodes; the azimuth gets twice as many.
    pub n_angular: usize,
    pub scheme: Scheme,
    pub seed: u64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { e_min: 0.5, e_max: 2.5, n_radial: 48, n_angular: 32, scheme: Scheme::ProductGauss, seed: 0 }
    }
}

impl QuadratureSpec {
    pub fn new(e_min: f64, e_max: f64, n_radial: usize, n_angular: usize) -> Self {
        Self { e_min, e_max, n_radial, n_angular, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.e_min > 0.0 && self.e_min < self.e_max && self.e_max.is_finite()) {
            return Err(GqError::InvalidQuadrature(format!(
                "energy window [{}, {}] must satisfy 0 < e_min < e_max",
                self.e_min, self.e_max
            )));
        }
        if self.n_radial < 2 || self.n_angular < 2 {
            return Err(GqError::InvalidQuadrature(format!(
                "node counts must be at least 2 (got {} radial, {} angular)",
                self.n_radial, self.n_angular
            )));
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.n_radial * self.n_angular * 2 * self.n_angular
    }

    /// Both node counts multiplied by `factor`.
    pub fn refined(&self, factor: usize) -> Self {
        Self { n_radial: self.n_radial * factor, n_angular: self.n_angular * factor, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub p: MinkowskiVector,
    pub w: f64,
}

fn legendre(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(n).expect("validated node count"));
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    rule.as_node_weight_pairs().iter().map(|&(x, w)| (mid + half * x, half * w)).collect()
}

fn directions(n_angular: usize) -> Vec<([f64; 3], f64)> {
    let polar = legendre(n_angular, -1.0, 1.0);
    let n_phi = 2 * n_angular;
    let dphi = TAU / n_phi as f64;
    let mut out = Vec::with_capacity(polar.len() * n_phi);
    for &(c, wc) in &polar {
        let s = (1.0 - c * c).max(0.0).sqrt();
        for k in 0..n_phi {
            let phi = (k as f64 + 0.5) * dphi;
            out.push(([s * phi.cos(), s * phi.sin(), c], wc * dphi));
        }
    }
    out
}

/// Nodes and weights for `int f(P) E dE dOmega` over the window.
pub fn build_nodes(spec: &QuadratureSpec) -> Result<Vec<Node>> {
    spec.validate()?;
    match spec.scheme {
        Scheme::ProductGauss => {
            let radial = legendre(spec.n_radial, spec.e_min, spec.e_max);
            let dirs = directions(spec.n_angular);
            let mut nodes = Vec::with_capacity(radial.len() * dirs.len());
            for &(e, we) in &radial {
                for &(u, wu) in &dirs {
                    let p = MinkowskiVector::from_space_time([e * u[0], e * u[1], e * u[2]], e);
                    nodes.push(Node { p, w: we * e * wu });
                }
            }
            Ok(nodes)
        }
        Scheme::MonteCarlo => {
            let n = spec.node_count();
            let (a2, b2) = (spec.e_min * spec.e_min, spec.e_max * spec.e_max);
            let w = 2.0 * PI * (b2 - a2) / n as f64;
            let mut rng = stream(spec.seed, "monte_carlo_nodes", 0);
            Ok((0..n)
                .map(|_| {
                    let e = (a2 + rng.random::<f64>() * (b2 - a2)).sqrt();
                    let u = unit3(&mut rng);
                    Node { p: MinkowskiVector::from_space_time([e * u[0], e * u[1], e * u[2]], e), w }
                })
                .collect())
        }
    }
}

/// Product-Gauss nodes whose radial window depends on the direction.
pub fn build_nodes_windowed<F: Fn(&[f64; 3]) -> (f64, f64)>(spec: &QuadratureSpec, window: F) -> Result<Vec<Node>> {
    spec.validate()?;
    let dirs = directions(spec.n_angular);
    let mut nodes = Vec::with_capacity(spec.node_count());
    for &(u, wu) in &dirs {
        let (a, b) = window(&u);
        for (e, we) in legendre(spec.n_radial, a, b) {
            let p = MinkowskiVector::from_space_time([e * u[0], e * u[1], e * u[2]], e);
            nodes.push(Node { p, w: we * e * wu });
        }
    }
    Ok(nodes)
}

pub fn integrate<F: Fn(&MinkowskiVector) -> f64>(nodes: &[Node], f: F) -> f64 {
    nodes.iter().map(|n| n.w * f(&n.p)).sum()
}

/// A spinor field on Minkowski space of fixed chirality.
pub trait SpacetimeField: Send + Sync {
    fn chi(&self) -> Helicity;
    fn eval(&self, r: &MinkowskiVector) -> DiracSpinor;
    /// `d/dR^mu` for `mu = 1..4` (array index `mu - 1`), when available in
    /// closed form.
    fn analytic_gradient(&self, _r: &MinkowskiVector) -> Option<[DiracSpinor; 4]> {
        None
    }
}

impl<T: SpacetimeField + ?Sized> SpacetimeField for &T {
    fn chi(&self) -> Helicity {
        (**self).chi()
    }
    fn eval(&self, r: &MinkowskiVector) -> DiracSpinor {
        (**self).eval(r)
    }
    fn analytic_gradient(&self, r: &MinkowskiVector) -> Option<[DiracSpinor; 4]> {
        (**self).analytic_gradient(r)
    }
}

impl<T: SpacetimeField + ?Sized> SpacetimeField for Arc<T> {
    fn chi(&self) -> Helicity {
        (**self).chi()
    }
    fn eval(&self, r: &MinkowskiVector) -> DiracSpinor {
        (**self).eval(r)
    }
    fn analytic_gradient(&self, r: &MinkowskiVector) -> Option<[DiracSpinor; 4]> {
        (**self).analytic_gradient(r)
    }
}

/// `R -> sum_k w_k psi(P_k) exp(i P_k.R / hbar)`, with `w_k psi(P_k)`
/// precomputed. Sums run in node order, so results are reproducible
/// bit for bit.
#[derive(Debug, Clone)]
pub struct TransformedField {
    momenta: Vec<MinkowskiVector>,
    weighted: Vec<DiracSpinor>,
    chi: Helicity,
    hbar: f64,
    scale: f64,
    warnings: Vec<String>,
}

impl TransformedField {
    pub fn new<M: MomentumSpinor + ?Sized>(psi: &M, nodes: &[Node], params: &ModelParams) -> Self {
        let weighted: Vec<DiracSpinor> = nodes.par_iter().map(|n| psi.eval(&n.p).scale(C64::from(n.w))).collect();
        let (momenta, weighted): (Vec<_>, Vec<_>) = nodes
            .iter()
            .zip(weighted)
            .filter(|(_, v)| v.0.iter().any(|c| *c != C64::from(0.0)))
            .map(|(n, v)| (n.p, v))
            .unzip();
        let scale = momenta
            .iter()
            .zip(&weighted)
            .map(|(p, v)| v.norm() * p.time() / params.hbar)
            .sum();
        Self { momenta, weighted, chi: psi.chi(), hbar: params.hbar, scale, warnings: Vec::new() }
    }

    /// As [`TransformedField::new`] on the nodes of `spec`, also recording
    /// support warnings.
    pub fn from_spec<M: MomentumSpinor + ?Sized>(psi: &M, spec: &QuadratureSpec, params: &ModelParams) -> Result<Self> {
        let nodes = build_nodes(spec)?;
        let mut f = Self::new(psi, &nodes, params);
        f.warnings = support_warnings(psi, spec);
        Ok(f)
    }

    /// `sum_k |w_k| |psi(P_k)| E_k / hbar`, the natural size of a gradient.
    pub fn integrand_scale(&self) -> f64 {
        self.scale
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Number of nodes at which the integrand is nonzero.
    pub fn active_nodes(&self) -> usize {
        self.momenta.len()
    }

    fn phase(&self, p: &MinkowskiVector, r: &MinkowskiVector) -> C64 {
        let (s, c) = (p.dot(r) / self.hbar).sin_cos();
        C64::new(c, s)
    }
}

impl SpacetimeField for TransformedField {
    fn chi(&self) -> Helicity {
        self.chi
    }

    fn eval(&self, r: &MinkowskiVector) -> DiracSpinor {
        let mut acc = nalgebra::Vector4::<C64>::zeros();
        for (p, v) in self.momenta.iter().zip(&self.weighted) {
            acc += v.0 * self.phase(p, r);
        }
        DiracSpinor(acc)
    }

    fn analytic_gradient(&self, r: &MinkowskiVector) -> Option<[DiracSpinor; 4]> {
        let mut acc = [nalgebra::Vector4::<C64>::zeros(); 4];
        for (p, v) in self.momenta.iter().zip(&self.weighted) {
            let term = v.0 * self.phase(p, r);
            let lowered = p.lowered();
            for mu in 0..4 {
                acc[mu] += term * C64::from(lowered[mu]);
            }
        }
        let f = I / self.hbar;
        Some(std::array::from_fn(|mu| DiracSpinor(acc[mu] * f)))
    }
}

/// Single evaluation of the transform on the nodes of `spec`.
pub fn transform<M: MomentumSpinor + ?Sized>(psi: &M, r: &MinkowskiVector, spec: &QuadratureSpec, params: &ModelParams) -> Result<DiracSpinor> {
    Ok(TransformedField::new(psi, &build_nodes(spec)?, params).eval(r))
}

/// Messages for nonzero `psi` at and just outside the window edges.
pub fn support_warnings<M: MomentumSpinor + ?Sized>(psi: &M, spec: &QuadratureSpec) -> Vec<String> {
    let mut out = Vec::new();
    if let Some((a, b)) = psi.support() {
        if a < spec.e_min || b > spec.e_max {
            out.push(format!(
                "momentum support [{a}, {b}] exceeds the quadrature window [{}, {}]",
                spec.e_min, spec.e_max
            ));
        }
    }
    let probes = [spec.e_min, spec.e_min * (1.0 - 1e-3), spec.e_max, spec.e_max * (1.0 + 1e-3)];
    let dirs = directions(2);
    for e in probes {
        let worst = dirs
            .iter()
            .map(|(u, _)| psi.eval(&MinkowskiVector::from_space_time([e * u[0], e * u[1], e * u[2]], e)).norm())
            .fold(0.0, f64::max);
        if worst > 1e-12 {
            out.push(format!("momentum spinor is {worst:e} at energy {e} on the window edge"));
        }
    }
    out
}

/// Central differences of step `h` in each coordinate.
pub fn fd_gradient(field: &dyn SpacetimeField, r: &MinkowskiVector, h: f64) -> [DiracSpinor; 4] {
    std::array::from_fn(|mu| {
        let e = MinkowskiVector::basis(mu + 1) * h;
        let d = field.eval(&(*r + e)).0 - field.eval(&(*r - e)).0;
        DiracSpinor(d / C64::from(2.0 * h))
    })
}

/// `gamma^mu d_mu psi`
pub fn dirac_operator(grad: &[DiracSpinor; 4]) -> DiracSpinor {
    let mut acc = nalgebra::Vector4::<C64>::zeros();
    for mu in 1..=4 {
        acc += gamma_unchecked(mu) * grad[mu - 1].0 * C64::from(metric(mu));
    }
    DiracSpinor(acc)
}

/// `sigma^j d_j psi_chi - chi d_t psi_chi` on the half of chirality `chi`.
pub fn two_component_operator(grad: &[DiracSpinor; 4], chi: Helicity) -> HalfSpinor {
    let half = |d: &DiracSpinor| match chi {
        Helicity::Negative => d.zeta_prime(),
        Helicity::Positive => d.zeta_second(),
    };
    let mut acc = HalfSpinor::zeros();
    for j in 0..3 {
        let mut e = [0.0; 3];
        e[j] = 1.0;
        acc += pauli_vec(e) * half(&grad[j]);
    }
    acc - half(&grad[3]) * C64::from(chi.sign())
}

/// `|gamma5 psi - i chi psi|`
pub fn chirality_residual(psi: &DiracSpinor, chi: Helicity) -> f64 {
    (crate::clifford::gamma5() * psi.0 - psi.0 * (I * chi.sign())).norm()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GradientMethod {
    Analytic,
    FiniteDifference(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WeylReport {
    pub probes: usize,
    /// max `|gamma^mu d_mu psi|`
    pub dirac: f64,
    /// max `|sigma.d psi_chi - chi d_t psi_chi|`
    pub two_component: f64,
    /// max `| |dirac| - |two_component| |` per probe
    pub form_mismatch: f64,
    /// max `|gamma5 psi - i chi psi|`
    pub chirality: f64,
}

/// Weyl residuals of `field` over `grid`; probes run in parallel and are
/// reduced in grid order.
pub fn weyl_residual(field: &dyn SpacetimeField, grid: &[MinkowskiVector], method: GradientMethod) -> Result<WeylReport> {
    let chi = field.chi();
    let rows: Vec<Result<[f64; 4]>> = grid
        .par_iter()
        .map(|r| {
            let grad = match method {
                GradientMethod::Analytic => field.analytic_gradient(r).ok_or(GqError::AnalyticGradientUnavailable)?,
                GradientMethod::FiniteDifference(h) => fd_gradient(field, r, h),
            };
            let four = dirac_operator(&grad).norm();
            let two = two_component_operator(&grad, chi).norm();
            Ok([four, two, (four - two).abs(), chirality_residual(&field.eval(r), chi)])
        })
        .collect();
    let mut rep = WeylReport { probes: grid.len(), ..Default::default() };
    for row in rows {
        let [a, b, c, d] = row?;
        rep.dirac = rep.dirac.max(a);
        rep.two_component = rep.two_component.max(b);
        rep.form_mismatch = rep.form_mismatch.max(c);
        rep.chirality = rep.chirality.max(d);
    }
    Ok(rep)
}

/// `counts[0] x .. x counts[3]` lattice of spacing `step` centered at the
/// origin, `r1` varying fastest and `t` slowest.
pub fn lattice(counts: [usize; 4], step: f64) -> Vec<MinkowskiVector> {
    let coord = |i: usize, n: usize| (i as f64 - 0.5 * (n as f64 - 1.0)) * step;
    let mut out = Vec::with_capacity(counts.iter().product());
    for it in 0..counts[3] {
        for i3 in 0..counts[2] {
            for i2 in 0..counts[1] {
                for i1 in 0..counts[0] {
                    out.push(MinkowskiVector::new(
                        coord(i1, counts[0]),
                        coord(i2, counts[1]),
                        coord(i3, counts[2]),
                        coord(it, counts[3]),
                    ));
                }
            }
        }
    }
    out
}

/// Uniform probes in the box `[-half_width, half_width]^4`.
pub fn random_probes(seed: u64, label: &str, n: usize, half_width: f64) -> Vec<MinkowskiVector> {
    (0..n)
        .map(|k| {
            let mut rng = stream(seed, label, k as u64);
            let mut c = || rng.random_range(-half_width..=half_width);
            MinkowskiVector::new(c(), c(), c(), c())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polarization::{basis_solution, PolarizedMomentum, Profile};

    fn params() -> ModelParams {
        ModelParams::default()
    }

    #[test]
    fn constant_integrand_integrates_to_six_pi() {
        let nodes = build_nodes(&QuadratureSpec::new(1.0, 2.0, 8, 8)).unwrap();
        assert!((integrate(&nodes, |_| 1.0) - 6.0 * PI).abs() < 1e-8);
        for n in &nodes {
            assert!(n.p.dot(&n.p).abs() < 1e-14 && n.p.time() > 0.0);
        }
    }

    #[test]
    fn gauss_exactness_in_energy() {
        // int_1^2 E^5 dE * 4 pi; degree 6 polynomial in E with the measure
        let exact = 4.0 * PI * (64.0 - 1.0) / 6.0;
        for n in [4, 8] {
            let nodes = build_nodes(&QuadratureSpec::new(1.0, 2.0, n, 4)).unwrap();
            let v = integrate(&nodes, |p| p.time().powi(4));
            assert!((v - exact).abs() < 1e-11 * exact);
        }
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(build_nodes(&QuadratureSpec::new(0.0, 1.0, 4, 4)).is_err());
        assert!(build_nodes(&QuadratureSpec::new(2.0, 1.0, 4, 4)).is_err());
        assert!(build_nodes(&QuadratureSpec::new(1.0, 2.0, 1, 4)).is_err());
    }

    #[test]
    fn zero_profile_transforms_to_zero() {
        let psi = PolarizedMomentum::new(Profile::Zero, Helicity::Negative);
        let spec = QuadratureSpec::new(0.5, 2.5, 4, 4);
        let v = transform(&psi, &MinkowskiVector::new(0.3, 0.1, 0.0, 1.0), &spec, &params()).unwrap();
        assert_eq!(v.norm(), 0.0);
    }

    struct SingleNode(Helicity);

    impl MomentumSpinor for SingleNode {
        fn chi(&self) -> Helicity {
            self.0
        }
        fn eval(&self, p: &MinkowskiVector) -> DiracSpinor {
            basis_solution(p, self.0).unwrap()
        }
    }

    #[test]
    fn single_node_is_exact_plane_wave() {
        let p0 = MinkowskiVector::new(0.0, 0.6, 0.8, 1.0);
        for chi in Helicity::both() {
            let nodes = [Node { p: p0, w: 0.7 }];
            let f = TransformedField::new(&SingleNode(chi), &nodes, &params());
            let r = MinkowskiVector::new(0.2, -0.3, 0.5, 0.9);
            let expected = basis_solution(&p0, chi).unwrap().scale(C64::from_polar(0.7, p0.dot(&r)));
            assert!((f.eval(&r).0 - expected.0).norm() < 1e-15);
            let g0 = f.analytic_gradient(&MinkowskiVector::ZERO).unwrap();
            let low = p0.lowered();
            for mu in 0..4 {
                let e = basis_solution(&p0, chi).unwrap().0 * (I * 0.7 * low[mu]);
                assert!((g0[mu].0 - e).norm() < 1e-15);
            }
            let rep = weyl_residual(&f, &[r], GradientMethod::Analytic).unwrap();
            assert!(rep.dirac < 1e-15 && rep.chirality < 1e-15);
        }
    }

    #[test]
    fn analytic_gradient_matches_fd_and_solves_weyl() {
        let spec = QuadratureSpec::new(0.5, 2.5, 12, 8);
        for chi in Helicity::both() {
            let psi = PolarizedMomentum::new(Profile::default(), chi);
            let f = TransformedField::from_spec(&psi, &spec, &params()).unwrap();
            assert!(f.warnings().is_empty(), "{:?}", f.warnings());
            let probes = random_probes(3, "probe", 20, 1.0);
            for r in &probes {
                let a = f.analytic_gradient(r).unwrap();
                let d = fd_gradient(&f, r, 1e-4);
                for mu in 0..4 {
                    assert!((a[mu].0 - d[mu].0).norm() < 1e-7);
                }
            }
            let rep = weyl_residual(&f, &probes, GradientMethod::Analytic).unwrap();
            assert!(rep.dirac <= 1e-12 * f.integrand_scale(), "{rep:?}");
            assert!(rep.form_mismatch <= 1e-12 && rep.chirality <= 1e-12);
        }
    }

    #[test]
    fn translation_rephases_integrand() {
        struct Shifted<'a>(&'a PolarizedMomentum, MinkowskiVector);
        impl MomentumSpinor for Shifted<'_> {
            fn chi(&self) -> Helicity {
                self.0.chi
            }
            fn eval(&self, p: &MinkowskiVector) -> DiracSpinor {
                self.0.eval(p).scale(C64::from_polar(1.0, p.dot(&self.1)))
            }
        }
        let spec = QuadratureSpec::new(0.5, 2.5, 8, 6);
        let psi = PolarizedMomentum::new(Profile::default(), Helicity::Positive);
        let c = MinkowskiVector::new(0.4, -0.2, 0.1, 0.3);
        let r = MinkowskiVector::new(-0.1, 0.5, 0.2, -0.4);
        let lhs = transform(&psi, &(r + c), &spec, &params()).unwrap();
        let rhs = transform(&Shifted(&psi, c), &r, &spec, &params()).unwrap();
        assert!((lhs.0 - rhs.0).norm() < 1e-12);
    }

    #[test]
    fn lattice_is_centered() {
        let g = lattice([5, 5, 5, 5], 0.5);
        assert_eq!(g.len(), 625);
        assert_eq!(g[0].as_array(), [-1.0; 4]);
        assert_eq!(g[312].as_array(), [0.0; 4]);
    }

    #[test]
    fn monte_carlo_total_weight() {
        let spec = QuadratureSpec { scheme: Scheme::MonteCarlo, seed: 4, ..QuadratureSpec::new(1.0, 2.0, 4, 4) };
        let nodes = build_nodes(&spec).unwrap();
        assert_eq!(nodes.len(), spec.node_count());
        assert!((integrate(&nodes, |_| 1.0) - 6.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn support_outside_window_warns() {
        let psi = PolarizedMomentum::new(Profile::Bump { a: 0.2, b: 3.0 }, Helicity::Negative);
        assert!(!support_warnings(&psi, &QuadratureSpec::default()).is_empty());
    }
}
