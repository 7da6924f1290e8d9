//! The vertical polarization of the space of motions, polarized wave
//! functions on the prequantum bundle, and their momentum-space form.

use std::f64::consts::SQRT_2;
use std::sync::Arc;

use nalgebra::{DMatrix, SMatrix};
use rand::Rng;

use crate::clifford::{
    complex_structure, gamma5, gamma_vec, pauli_vec, ComplexMatrix2, ComplexMatrix4, DiracSpinor, HalfSpinor,
    MinkowskiVector, C64, I, ONE, ZERO,
};
use crate::error::{GqError, Result};
use crate::prequantum::{alpha_eval, displaced_y, dproject_yx, p_of_z, project_yx, u1_action, PrequantumPoint, TangentY};
use crate::rng::{half_spinor_normal, normal3, stream};
use crate::spin::momentum_3;
use crate::symplectic::{cross3, dot3, norm3, omega_eval, Helicity, ModelParams, MotionPoint, TangentX};

/// Below this `|P.P| / (P^4)^2` a momentum counts as null.
pub const LIGHT_CONE_TOLERANCE: f64 = 1e-10;
/// `u3` beyond which the helicity chart switches to the polar cap.
pub const CHART_SWITCH: f64 = 0.9;

/// `phi = dp1 ^ dp2 ^ dp3 / |p|`
pub fn phi_eval(m: &MotionPoint, u1: &TangentX, u2: &TangentX, u3: &TangentX) -> Result<f64> {
    let n = norm3(&m.p);
    if !(n > 0.0) {
        return Err(GqError::ZeroMomentum);
    }
    Ok(dot3(&u1.dp, &cross3(&u2.dp, &u3.dp)) / n)
}

/// `(omega ^ phi)(v1, ..., v5)` as the sum over (2,3) shuffles.
pub fn omega_wedge_phi(m: &MotionPoint, v: &[TangentX; 5], params: &ModelParams) -> Result<f64> {
    let mut total = 0.0;
    for i in 0..5 {
        for j in (i + 1)..5 {
            let rest: Vec<usize> = (0..5).filter(|&k| k != i && k != j).collect();
            let sign = if (i + j) % 2 == 1 { 1.0 } else { -1.0 };
            total += sign
                * omega_eval(m, &v[i], &v[j], params)?
                * phi_eval(m, &v[rest[0]], &v[rest[1]], &v[rest[2]])?;
        }
    }
    Ok(total)
}

fn unit_tangent(k: usize) -> TangentX {
    let mut v = [0.0; 6];
    v[k] = 1.0;
    TangentX::from_real(&v)
}

/// Left null space of the 6 x 36 coefficient matrix `phi(e_a, e_b, e_c)`,
/// returned as unit vectors together with all singular values.
pub fn phi_kernel(m: &MotionPoint, threshold: f64) -> Result<(Vec<[f64; 6]>, Vec<f64>)> {
    let mut a = DMatrix::<f64>::zeros(6, 36);
    for r in 0..6 {
        for b in 0..6 {
            for c in 0..6 {
                a[(r, 6 * b + c)] = phi_eval(m, &unit_tangent(r), &unit_tangent(b), &unit_tangent(c))?;
            }
        }
    }
    let svd = a.svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let kernel = (0..sv.len())
        .filter(|&k| sv[k] <= threshold)
        .map(|k| std::array::from_fn(|r| u[(r, k)]))
        .collect();
    Ok((kernel, sv))
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PolarizationReport {
    pub samples: usize,
    /// max `|omega ^ phi|` over the sampled 5-tuples
    pub wedge: f64,
    /// max over points of `|3 - dim ker phi|`
    pub kernel_dimension_error: usize,
    /// max norm of the momentum part of a kernel vector
    pub kernel_momentum_leak: f64,
    /// max `|omega(F, F)|`
    pub isotropy: f64,
}

fn random_motion_point<R: Rng + ?Sized>(rng: &mut R) -> MotionPoint {
    let mut p = normal3(rng);
    while norm3(&p) < 0.1 {
        p = normal3(rng);
    }
    MotionPoint { p, x: normal3(rng) }
}

fn random_tangent_x<R: Rng + ?Sized>(rng: &mut R) -> TangentX {
    TangentX { dp: normal3(rng), dx: normal3(rng) }
}

/// The isotropy and involutivity checks of the vertical distribution
/// `p = const`, at `samples` random points plus the canonical point.
pub fn verify_polarization(params: &ModelParams, seed: u64, samples: usize) -> Result<PolarizationReport> {
    let mut report = PolarizationReport { samples, ..Default::default() };
    for k in 0..=samples {
        let mut rng = stream(seed, "verify_polarization", k as u64);
        let m = if k == 0 {
            MotionPoint { p: [0.0, 0.0, 1.0], x: [0.0; 3] }
        } else {
            random_motion_point(&mut rng)
        };
        let v: [TangentX; 5] = std::array::from_fn(|_| random_tangent_x(&mut rng));
        report.wedge = report.wedge.max(omega_wedge_phi(&m, &v, params)?.abs());
        let (kernel, _) = phi_kernel(&m, 1e-9)?;
        report.kernel_dimension_error = report.kernel_dimension_error.max(kernel.len().abs_diff(3));
        for a in &kernel {
            let leak = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
            report.kernel_momentum_leak = report.kernel_momentum_leak.max(leak);
            for b in &kernel {
                let w = omega_eval(&m, &TangentX::from_real(a), &TangentX::from_real(b), params)?;
                report.isotropy = report.isotropy.max(w.abs());
            }
        }
    }
    Ok(report)
}

/// Future-pointing null check; returns `(E, u)`.
pub fn light_cone_direction(p: &MinkowskiVector) -> Result<(f64, [f64; 3])> {
    let e = p.time();
    if !(e > 0.0) {
        return Err(GqError::PastPointing);
    }
    let rel = p.dot(p).abs() / (e * e);
    if rel > LIGHT_CONE_TOLERANCE {
        return Err(GqError::NotOnLightCone(rel));
    }
    let s = p.space();
    let n = norm3(&s);
    Ok((e, [s[0] / n, s[1] / n, s[2] / n]))
}

/// Unit eigenvector of `sigma.u`: eigenvalue `+1` for `chi = -1`, `-1` for
/// `chi = +1`. Away from the respective pole the first component is real
/// positive; on the polar cap the second one is.
pub fn helicity_eigenvector(u: &[f64; 3], chi: Helicity) -> HalfSpinor {
    let c = |re: f64, im: f64| C64::new(re, im);
    match chi {
        Helicity::Negative => {
            if u[2] >= -CHART_SWITCH {
                let n = (2.0 * (1.0 + u[2])).sqrt();
                HalfSpinor::new(c((1.0 + u[2]) / n, 0.0), c(u[0] / n, u[1] / n))
            } else {
                let n = (2.0 * (1.0 - u[2])).sqrt();
                HalfSpinor::new(c(u[0] / n, -u[1] / n), c((1.0 - u[2]) / n, 0.0))
            }
        }
        Helicity::Positive => {
            if u[2] <= CHART_SWITCH {
                let n = (2.0 * (1.0 - u[2])).sqrt();
                HalfSpinor::new(c((1.0 - u[2]) / n, 0.0), c(-u[0] / n, -u[1] / n))
            } else {
                let n = (2.0 * (1.0 + u[2])).sqrt();
                HalfSpinor::new(c(-u[0] / n, u[1] / n), c((1.0 + u[2]) / n, 0.0))
            }
        }
    }
}

fn place(half: HalfSpinor, chi: Helicity) -> DiracSpinor {
    match chi {
        Helicity::Negative => DiracSpinor::from_halves(half, HalfSpinor::zeros()),
        Helicity::Positive => DiracSpinor::from_halves(HalfSpinor::zeros(), half),
    }
}

/// Unit-norm generator of the solution line `gamma(P) psi = 0`,
/// `gamma5 psi = i chi psi`.
pub fn basis_solution(p: &MinkowskiVector, chi: Helicity) -> Result<DiracSpinor> {
    let (_, u) = light_cone_direction(p)?;
    Ok(place(helicity_eigenvector(&u, chi), chi))
}

/// `gamma(P) psi` and `(gamma5 - i chi) psi` stacked.
pub fn momentum_constraint_residual(p: &MinkowskiVector, psi: &DiracSpinor, chi: Helicity) -> f64 {
    let a = (gamma_vec(p) * psi.0).norm();
    let b = (gamma5() * psi.0 - psi.0 * (I * chi.sign())).norm();
    a.max(b)
}

/// Singular values of the stacked 8 x 4 system `[gamma(P); gamma5 - i chi]`.
pub fn solution_space_singular_values(p: &MinkowskiVector, chi: Helicity) -> [f64; 4] {
    let g = gamma_vec(p);
    let c = gamma5() - ComplexMatrix4::identity() * (I * chi.sign());
    let mut m = SMatrix::<C64, 8, 4>::zeros();
    m.fixed_view_mut::<4, 4>(0, 0).copy_from(&g);
    m.fixed_view_mut::<4, 4>(4, 0).copy_from(&c);
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    std::array::from_fn(|k| sv[k])
}

/// Complex dimension of the solution space at relative threshold `rel`.
pub fn solution_space_nullity(p: &MinkowskiVector, chi: Helicity, rel: f64) -> usize {
    let sv = solution_space_singular_values(p, chi);
    let scale = sv[0].max(1.0);
    sv.iter().filter(|&&s| s <= rel * scale).count()
}

/// `sqrt(2) [[0, Z' Z'^H], [|Z'|^2 - Z' Z'^H, 0]]` for the null momentum
/// `P = (p, |p|)` built from `Z'`.
pub fn gamma_p_block(zp: &HalfSpinor) -> ComplexMatrix4 {
    let outer = zp * zp.adjoint();
    let lower = ComplexMatrix2::identity() * C64::from(zp.norm_squared()) - outer;
    let mut m = ComplexMatrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(&(outer * C64::from(SQRT_2)));
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(&(lower * C64::from(SQRT_2)));
    m
}

/// Entrywise deviation between `gamma_vec(P(Z'))` and [`gamma_p_block`].
pub fn gamma_p_block_check(zp: &HalfSpinor) -> Result<f64> {
    let (p, e) = momentum_3(zp)?;
    let g = gamma_vec(&MinkowskiVector::from_space_time(p, e));
    Ok(crate::clifford::max_abs(&(g - gamma_p_block(zp))))
}

/// Scalar energy profile `f(E)`, smooth with compact support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Profile {
    /// `exp(4/(b-a)^2 - 1/((E-a)(b-E)))` on `(a, b)`; peak value 1
    Bump { a: f64, b: f64 },
    /// Gaussian of the given center and width times the unit bump on `(a, b)`
    GaussianTruncated { center: f64, width: f64, a: f64, b: f64 },
    /// Narrow bump `(energy - width, energy + width)`
    SingleShell { energy: f64, width: f64 },
    Zero,
}

impl Default for Profile {
    fn default() -> Self {
        Profile::Bump { a: 0.5, b: 2.5 }
    }
}

fn bump(e: f64, a: f64, b: f64) -> f64 {
    if e <= a || e >= b {
        return 0.0;
    }
    let w = b - a;
    (4.0 / (w * w) - 1.0 / ((e - a) * (b - e))).exp()
}

impl Profile {
    pub fn eval(&self, e: f64) -> f64 {
        match *self {
            Profile::Bump { a, b } => bump(e, a, b),
            Profile::GaussianTruncated { center, width, a, b } => {
                let z = (e - center) / width;
                (-0.5 * z * z).exp() * bump(e, a, b)
            }
            Profile::SingleShell { energy, width } => bump(e, energy - width, energy + width),
            Profile::Zero => 0.0,
        }
    }

    /// Closed support interval; `None` for the zero profile.
    pub fn support(&self) -> Option<(f64, f64)> {
        match *self {
            Profile::Bump { a, b } | Profile::GaussianTruncated { a, b, .. } => Some((a, b)),
            Profile::SingleShell { energy, width } => Some((energy - width, energy + width)),
            Profile::Zero => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Profile::Bump { a, b } => 0.0 < a && a < b,
            Profile::GaussianTruncated { width, a, b, .. } => 0.0 < a && a < b && width > 0.0,
            Profile::SingleShell { energy, width } => width > 0.0 && energy - width > 0.0,
            Profile::Zero => true,
        };
        if ok && self.support().is_none_or(|(a, b)| a.is_finite() && b.is_finite()) {
            Ok(())
        } else {
            Err(GqError::InvalidQuadrature(format!("invalid profile {self:?}")))
        }
    }
}

/// Phase choice for the helicity spinor along `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpinorFrame {
    /// `(1 + sigma.u)/2 (1, 0)` for `chi = -1`, `(1 - sigma.u)/2 (0, 1)` for
    /// `chi = +1`: polynomial in `u`, vanishing at one pole.
    #[default]
    Projected,
    /// The unit eigenvector of [`helicity_eigenvector`].
    Chart,
}

impl SpinorFrame {
    pub fn half(&self, u: &[f64; 3], chi: Helicity) -> HalfSpinor {
        match self {
            SpinorFrame::Chart => helicity_eigenvector(u, chi),
            SpinorFrame::Projected => {
                let s = pauli_vec(*u);
                let one = ComplexMatrix2::identity();
                match chi {
                    Helicity::Negative => (one + s) * HalfSpinor::new(ONE, ZERO) * C64::from(0.5),
                    Helicity::Positive => (one - s) * HalfSpinor::new(ZERO, ONE) * C64::from(0.5),
                }
            }
        }
    }
}

/// A spinor-valued function on the future light cone.
pub trait MomentumSpinor: Send + Sync {
    fn chi(&self) -> Helicity;
    fn eval(&self, p: &MinkowskiVector) -> DiracSpinor;
    /// Energy interval outside which the function vanishes, if known.
    fn support(&self) -> Option<(f64, f64)> {
        None
    }
}

impl<T: MomentumSpinor + ?Sized> MomentumSpinor for &T {
    fn chi(&self) -> Helicity {
        (**self).chi()
    }
    fn eval(&self, p: &MinkowskiVector) -> DiracSpinor {
        (**self).eval(p)
    }
    fn support(&self) -> Option<(f64, f64)> {
        (**self).support()
    }
}

impl<T: MomentumSpinor + ?Sized> MomentumSpinor for Arc<T> {
    fn chi(&self) -> Helicity {
        (**self).chi()
    }
    fn eval(&self, p: &MinkowskiVector) -> DiracSpinor {
        (**self).eval(p)
    }
    fn support(&self) -> Option<(f64, f64)> {
        (**self).support()
    }
}

/// `psi(P) = f(E) frame(u)` placed in the half of chirality `chi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizedMomentum {
    pub profile: Profile,
    pub chi: Helicity,
    pub frame: SpinorFrame,
}

impl PolarizedMomentum {
    pub fn new(profile: Profile, chi: Helicity) -> Self {
        Self { profile, chi, frame: SpinorFrame::default() }
    }

    pub fn with_frame(mut self, frame: SpinorFrame) -> Self {
        self.frame = frame;
        self
    }
}

impl MomentumSpinor for PolarizedMomentum {
    fn chi(&self) -> Helicity {
        self.chi
    }

    fn eval(&self, p: &MinkowskiVector) -> DiracSpinor {
        let e = p.time();
        let f = self.profile.eval(e);
        if f == 0.0 {
            return DiracSpinor::zero();
        }
        let s = p.space();
        let n = norm3(&s);
        let u = [s[0] / n, s[1] / n, s[2] / n];
        place(self.frame.half(&u, self.chi) * C64::from(f), self.chi)
    }

    fn support(&self) -> Option<(f64, f64)> {
        self.profile.support()
    }
}

/// An equivariant function on the prequantum bundle.
pub trait WaveFunction: Send + Sync {
    fn eval(&self, y: &PrequantumPoint) -> C64;
    /// Extension to independent `(x, P, Z', conj Z'')`; agrees with
    /// [`WaveFunction::eval`] on `Z'' = Z'/|Z'|^2`, `P = P(Z')`.
    fn eval_extended(&self, x: &[f64; 3], p: &MinkowskiVector, zp: &HalfSpinor, zs_bar: &HalfSpinor) -> C64;
}

/// `Psi(Z', x) = bar(Z) psi(P) = Z''^H psi'(P) / 2` for `chi = -1`.
pub struct PolarizedWave<M: MomentumSpinor> {
    psi: M,
}

impl<M: MomentumSpinor> PolarizedWave<M> {
    pub fn momentum(&self) -> &M {
        &self.psi
    }
}

/// Only `chi = -1` has an explicit wave function on the bundle.
pub fn make_polarized<M: MomentumSpinor>(psi: M) -> Result<PolarizedWave<M>> {
    if psi.chi() != Helicity::Negative {
        return Err(GqError::WrongChirality);
    }
    Ok(PolarizedWave { psi })
}

fn null_momentum(zp: &HalfSpinor) -> MinkowskiVector {
    let (p, e) = momentum_3(zp).expect("nonzero spinor on the bundle");
    MinkowskiVector::from_space_time(p, e)
}

impl<M: MomentumSpinor> WaveFunction for PolarizedWave<M> {
    fn eval(&self, y: &PrequantumPoint) -> C64 {
        let zp = y.z_prime();
        let zs_bar = y.z_second().conjugate();
        self.eval_extended(&y.x, &null_momentum(&zp), &zp, &zs_bar)
    }

    fn eval_extended(&self, _x: &[f64; 3], p: &MinkowskiVector, _zp: &HalfSpinor, zs_bar: &HalfSpinor) -> C64 {
        let psi = self.psi.eval(p);
        (zs_bar[0] * psi.0[0] + zs_bar[1] * psi.0[1]) * C64::from(0.5)
    }
}

/// Reconstruction `psi'(P) = 2 Z' Psi`.
pub fn reconstruct_momentum(wave: &dyn WaveFunction, y: &PrequantumPoint) -> HalfSpinor {
    y.z_prime() * (wave.eval(y) * 2.0)
}

/// Negative control: a polarized wave times `1 + amplitude sin(x1)`.
pub struct Corrupted<W: WaveFunction> {
    pub inner: W,
    pub amplitude: f64,
}

impl<W: WaveFunction> Corrupted<W> {
    fn factor(&self, x: &[f64; 3]) -> f64 {
        1.0 + self.amplitude * x[0].sin()
    }
}

impl<W: WaveFunction> WaveFunction for Corrupted<W> {
    fn eval(&self, y: &PrequantumPoint) -> C64 {
        self.inner.eval(y) * self.factor(&y.x)
    }

    fn eval_extended(&self, x: &[f64; 3], p: &MinkowskiVector, zp: &HalfSpinor, zs_bar: &HalfSpinor) -> C64 {
        self.inner.eval_extended(x, p, zp, zs_bar) * self.factor(x)
    }
}

/// `D Psi (t) = dPsi(t) - (i/hbar) alpha(t) Psi` with `dPsi` by central
/// differences of step `h`.
pub fn covariant_derivative(wave: &dyn WaveFunction, y: &PrequantumPoint, t: &TangentY, params: &ModelParams, h: f64) -> Result<C64> {
    let plus = wave.eval(&displaced_y(y, t, h)?);
    let minus = wave.eval(&displaced_y(y, t, -h)?);
    let d = (plus - minus) / C64::from(2.0 * h);
    Ok(d - I * (alpha_eval(y, t, params) / params.hbar) * wave.eval(y))
}

/// `(phi ^ D Psi)(t1, .., t4)` with `phi` pulled back to the bundle.
pub fn phi_wedge_d_psi(wave: &dyn WaveFunction, y: &PrequantumPoint, t: &[TangentY; 4], params: &ModelParams, h: f64) -> Result<C64> {
    let m = project_yx(y)?;
    let pushed: Vec<TangentX> = t.iter().map(|ti| dproject_yx(y, ti)).collect();
    let mut total = C64::from(0.0);
    for (j, tj) in t.iter().enumerate() {
        let rest: Vec<usize> = (0..4).filter(|&k| k != j).collect();
        let sign = if (3 - j) % 2 == 0 { 1.0 } else { -1.0 };
        let phi = phi_eval(&m, &pushed[rest[0]], &pushed[rest[1]], &pushed[rest[2]])?;
        total += covariant_derivative(wave, y, tj, params, h)? * (sign * phi);
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PolarizedReport {
    pub samples: usize,
    /// max `|phi ^ D Psi|` at step `h`
    pub wedge: f64,
    /// the same at step `h/2`
    pub wedge_half_step: f64,
    /// max `|dPsi/dx|`
    pub d_x: f64,
    /// max `|dPsi/dZ'|` at fixed `P`, `conj Z''`
    pub d_zp: f64,
    /// max `|dPsi/d conj Z'' - Z' Psi|`
    pub d_zs_bar: f64,
    /// max `|conj Z'' . dPsi/d conj Z'' - Psi|`
    pub homogeneity: f64,
    /// max `|Psi(e^{i chi theta} y) - e^{i theta} Psi(y)|` on a 12-point grid
    pub equivariance: f64,
}

impl PolarizedReport {
    /// `wedge(h) / wedge(h/2)`
    pub fn convergence_ratio(&self) -> f64 {
        self.wedge / self.wedge_half_step
    }
}

fn random_bundle_point<R: Rng + ?Sized>(rng: &mut R, energy: Option<(f64, f64)>) -> Result<PrequantumPoint> {
    let mut zp = half_spinor_normal(rng);
    if let Some((a, b)) = energy {
        // rescale so that |p| lands inside the support
        let e: f64 = a + (b - a) * rng.random_range(0.2..0.8);
        zp *= C64::from((e * SQRT_2).sqrt() / zp.norm());
    }
    PrequantumPoint::new(zp, normal3(rng))
}

fn random_tangent_y<R: Rng + ?Sized>(rng: &mut R) -> TangentY {
    let mut t = TangentY { dzp: half_spinor_normal(rng), dx: normal3(rng) };
    let n = t.to_real().iter().map(|c| c * c).sum::<f64>().sqrt();
    t = TangentY::from_real(&t.to_real().map(|c| c / n));
    t
}

/// Wirtinger derivative in the complex coordinate `k` of `f` by central
/// differences: `(d/dRe - i d/dIm)/2`.
fn wirtinger<F: Fn(&HalfSpinor) -> C64>(f: F, at: &HalfSpinor, k: usize, h: f64) -> C64 {
    let mut e = HalfSpinor::zeros();
    e[k] = C64::from(h);
    let d_re = (f(&(at + e)) - f(&(at - e))) / C64::from(2.0 * h);
    e[k] = C64::new(0.0, h);
    let d_im = (f(&(at + e)) - f(&(at - e))) / C64::from(2.0 * h);
    (d_re - I * d_im) * 0.5
}

/// Covariant constancy along the polarization and the scalar conditions
/// equivalent to it, at `samples` random bundle points with energies inside
/// the support of `energy` (if given).
pub fn check_polarized(
    wave: &dyn WaveFunction,
    params: &ModelParams,
    seed: u64,
    samples: usize,
    h: f64,
    energy: Option<(f64, f64)>,
) -> Result<PolarizedReport> {
    let mut r = PolarizedReport { samples, ..Default::default() };
    for k in 0..samples {
        let mut rng = stream(seed, "check_polarized", k as u64);
        let y = random_bundle_point(&mut rng, energy)?;
        let t: [TangentY; 4] = std::array::from_fn(|_| random_tangent_y(&mut rng));
        r.wedge = r.wedge.max(phi_wedge_d_psi(wave, &y, &t, params, h)?.norm());
        r.wedge_half_step = r.wedge_half_step.max(phi_wedge_d_psi(wave, &y, &t, params, 0.5 * h)?.norm());

        let psi0 = wave.eval(&y);
        for j in 0..3 {
            let mut dx = [0.0; 3];
            dx[j] = 1.0;
            let dir = TangentY { dzp: HalfSpinor::zeros(), dx };
            let plus = wave.eval(&displaced_y(&y, &dir, h)?);
            let minus = wave.eval(&displaced_y(&y, &dir, -h)?);
            r.d_x = r.d_x.max(((plus - minus) / C64::from(2.0 * h)).norm());
        }

        let zp = y.z_prime();
        let zsb = y.z_second().conjugate();
        let p = null_momentum(&zp);
        let dzs: Vec<C64> = (0..2)
            .map(|c| {
                let dz = wirtinger(|w| wave.eval_extended(&y.x, &p, &zp, w), &zsb, c, h);
                // Psi is holomorphic in conj Z''; the Wirtinger derivative is the full one
                r.d_zp = r.d_zp.max(wirtinger(|w| wave.eval_extended(&y.x, &p, w, &zsb), &zp, c, h).norm());
                dz
            })
            .collect();
        for c in 0..2 {
            r.d_zs_bar = r.d_zs_bar.max((dzs[c] - zp[c] * psi0).norm());
        }
        let euler = zsb[0] * dzs[0] + zsb[1] * dzs[1];
        r.homogeneity = r.homogeneity.max((euler - psi0).norm());

        for step in 0..12 {
            let theta = std::f64::consts::TAU * step as f64 / 12.0 + 0.1;
            let moved = wave.eval(&u1_action(theta, &y, params));
            r.equivariance = r.equivariance.max((moved - psi0 * C64::from_polar(1.0, theta)).norm());
        }
    }
    Ok(r)
}

/// The second half of the quaternionic map applied to the first.
pub fn quaternionic_partner(zp: &HalfSpinor) -> HalfSpinor {
    complex_structure() * zp.conjugate()
}

/// `p(Z')` as a light-cone vector.
pub fn light_cone_point(zp: &HalfSpinor) -> Result<MinkowskiVector> {
    let p = p_of_z(zp)?;
    Ok(MinkowskiVector::from_space_time(p, norm3(&p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::unit3;

    fn params() -> ModelParams {
        ModelParams::new(Helicity::Negative, 1.0).unwrap()
    }

    #[test]
    fn phi_examples() {
        let m = MotionPoint { p: [0.0, 0.0, 1.0], x: [0.0; 3] };
        let e = |k| unit_tangent(k);
        assert_eq!(phi_eval(&m, &e(0), &e(1), &e(2)).unwrap(), 1.0);
        let mut mixed = e(0);
        mixed.dx = [0.4, -1.0, 2.0];
        assert_eq!(phi_eval(&m, &mixed, &e(1), &e(2)).unwrap(), 1.0);
        assert_eq!(phi_eval(&m, &e(0), &e(0), &e(2)).unwrap(), 0.0);
        let m2 = MotionPoint { p: [0.0, 0.0, 2.0], x: [0.0; 3] };
        assert_eq!(phi_eval(&m2, &e(0), &e(1), &e(2)).unwrap(), 0.5);
        assert_eq!(phi_eval(&MotionPoint { p: [0.0; 3], x: [0.0; 3] }, &e(0), &e(1), &e(2)), Err(GqError::ZeroMomentum));
    }

    #[test]
    fn kernel_at_canonical_point_is_position_space() {
        let m = MotionPoint { p: [0.0, 0.0, 1.0], x: [0.0; 3] };
        let (kernel, _) = phi_kernel(&m, 1e-9).unwrap();
        assert_eq!(kernel.len(), 3);
        for v in &kernel {
            assert!(v[..3].iter().all(|c| c.abs() < 1e-14));
        }
    }

    #[test]
    fn polarization_report_passes() {
        let r = verify_polarization(&params(), 3, 50).unwrap();
        assert!(r.wedge <= 1e-10, "{r:?}");
        assert_eq!(r.kernel_dimension_error, 0);
        assert!(r.kernel_momentum_leak < 1e-12);
        assert!(r.isotropy < 1e-12);
    }

    #[test]
    fn basis_solution_examples() {
        let p = MinkowskiVector::new(0.0, 0.0, 1.0, 1.0);
        let a = basis_solution(&p, Helicity::Negative).unwrap();
        let b = basis_solution(&p, Helicity::Positive).unwrap();
        let expect_a = [ONE, ZERO, ZERO, ZERO];
        let expect_b = [ZERO, ZERO, ZERO, ONE];
        for k in 0..4 {
            assert!((a.0[k] - expect_a[k]).norm() < 1e-15);
            assert!((b.0[k] - expect_b[k]).norm() < 1e-15);
        }
        assert!(basis_solution(&MinkowskiVector::new(0.0, 0.0, 1.0, 2.0), Helicity::Negative).is_err());
        assert_eq!(basis_solution(&MinkowskiVector::new(0.0, 0.0, 1.0, -1.0), Helicity::Negative), Err(GqError::PastPointing));
    }

    #[test]
    fn basis_solutions_solve_constraints() {
        let mut rng = stream(5, "bs", 0);
        for _ in 0..200 {
            let u = unit3(&mut rng);
            let e: f64 = rng.random_range(0.1..5.0);
            let p = MinkowskiVector::from_space_time([e * u[0], e * u[1], e * u[2]], e);
            for chi in Helicity::both() {
                let psi = basis_solution(&p, chi).unwrap();
                assert!((psi.norm() - 1.0).abs() < 1e-14);
                assert!(momentum_constraint_residual(&p, &psi, chi) < 1e-12 * e.max(1.0));
                assert_eq!(solution_space_nullity(&p, chi, 1e-9), 1);
                for frame in [SpinorFrame::Projected, SpinorFrame::Chart] {
                    let m = PolarizedMomentum::new(Profile::Bump { a: 0.0, b: 6.0 }, chi).with_frame(frame);
                    assert!(momentum_constraint_residual(&p, &m.eval(&p), chi) < 1e-12 * e.max(1.0));
                }
            }
        }
    }

    #[test]
    fn chart_is_continuous_along_great_circles() {
        let mut rng = stream(7, "gc", 0);
        for chi in Helicity::both() {
            for _ in 0..20 {
                // tilt below 60 degrees keeps the circle off the polar cap
                let tilt: f64 = rng.random_range(0.0..1.0);
                let az: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                let n = [tilt.sin() * az.cos(), tilt.sin() * az.sin(), tilt.cos()];
                let a = if n[2].abs() < 0.9 { [0.0, 0.0, 1.0] } else { [1.0, 0.0, 0.0] };
                let e1 = cross3(&n, &a);
                let l = norm3(&e1);
                let e1 = [e1[0] / l, e1[1] / l, e1[2] / l];
                let e2 = cross3(&n, &e1);
                let steps = 4000;
                let at = |k: usize| {
                    let t = std::f64::consts::TAU * k as f64 / steps as f64;
                    std::array::from_fn(|j| t.cos() * e1[j] + t.sin() * e2[j])
                };
                let mut prev = helicity_eigenvector(&at(0), chi);
                for k in 1..=steps {
                    let cur = helicity_eigenvector(&at(k), chi);
                    assert!((cur - prev).norm() < 2.0 * std::f64::consts::TAU / steps as f64, "jump at {k}");
                    prev = cur;
                }
            }
        }
    }

    #[test]
    fn gamma_block_formula() {
        let q = 2f64.powf(0.25);
        let zp = HalfSpinor::new(C64::from(q), ZERO);
        assert!(gamma_p_block_check(&zp).unwrap() < 1e-14);
        let mut rng = stream(6, "gb", 0);
        for _ in 0..500 {
            let z = half_spinor_normal(&mut rng);
            assert!(gamma_p_block_check(&z).unwrap() <= 1e-12);
            let rotated = z * C64::from_polar(1.0, 0.7);
            assert!(crate::clifford::max_abs(&(gamma_p_block(&z) - gamma_p_block(&rotated))) < 1e-14);
        }
    }

    #[test]
    fn zero_profile_gives_zero_wave() {
        let w = make_polarized(PolarizedMomentum::new(Profile::Zero, Helicity::Negative)).unwrap();
        let y = PrequantumPoint::new(HalfSpinor::new(ONE, I), [1.0, 2.0, 3.0]).unwrap();
        assert_eq!(w.eval(&y), ZERO);
        assert!(make_polarized(PolarizedMomentum::new(Profile::Zero, Helicity::Positive)).is_err());
    }

    #[test]
    fn reconstruction_returns_momentum_spinor() {
        let q = 2f64.powf(0.25);
        let flat = PolarizedMomentum::new(Profile::Bump { a: 0.0, b: 1e6 }, Helicity::Negative);
        let w = make_polarized(flat).unwrap();
        let y = PrequantumPoint::new(HalfSpinor::new(C64::from(q), ZERO), [0.0; 3]).unwrap();
        let p = MinkowskiVector::new(0.0, 0.0, 1.0, 1.0);
        let psi = flat.eval(&p);
        // Psi = conj(Z''_1) psi'_1 / 2 with Z''_1 = 2^{-1/4}
        let expected = psi.0[0] * (0.5 / q);
        assert!((w.eval(&y) - expected).norm() < 1e-15);
        let back = reconstruct_momentum(&w, &y);
        assert!((back - psi.zeta_prime()).norm() < 1e-14);
    }

    #[test]
    fn polarized_wave_is_covariantly_constant() {
        let m = PolarizedMomentum::new(Profile::default(), Helicity::Negative);
        let w = make_polarized(m).unwrap();
        let r = check_polarized(&w, &params(), 9, 20, 1e-4, m.support()).unwrap();
        assert!(r.wedge <= 1e-6, "{r:?}");
        assert!(r.d_x <= 1e-10 && r.d_zp <= 1e-10, "{r:?}");
        assert!(r.d_zs_bar <= 1e-8 && r.homogeneity <= 1e-8, "{r:?}");
        assert!(r.equivariance <= 1e-10, "{r:?}");
        let ratio = r.convergence_ratio();
        assert!((3.5..=4.5).contains(&ratio), "{ratio}");
        let bad = Corrupted { inner: make_polarized(m).unwrap(), amplitude: 0.5 };
        let rb = check_polarized(&bad, &params(), 9, 20, 1e-4, m.support()).unwrap();
        assert!(rb.wedge > 1e3 * r.wedge, "{} vs {}", rb.wedge, r.wedge);
    }
}
