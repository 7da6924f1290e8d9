//! The presymplectic structure of the group manifold `Sigma x E^4`: the
//! one-form, its exterior derivative, the characteristic distribution, and
//! the symplectic form on the space of motions.

use std::f64::consts::SQRT_2;

use nalgebra::{SMatrix, SVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::clifford::{
    complex_structure, gamma_vec, projector_pi, DiracSpinor, HalfSpinor, MinkowskiVector,
    ProjectorSign, C64, I,
};
use crate::error::{GqError, Result};
use crate::prequantum::{project_wy, project_yx};
use crate::spin::{momentum_p, momentum_p_derivative, sigma_project, SigmaPoint};

/// Linearized constraint violations above this are rejected.
pub const TANGENT_TOLERANCE: f64 = 1e-10;
pub const RANK_THRESHOLD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Helicity {
    Negative,
    Positive,
}

impl Helicity {
    pub fn sign(self) -> f64 {
        match self {
            Helicity::Negative => -1.0,
            Helicity::Positive => 1.0,
        }
    }

    pub fn from_sign(chi: i32) -> Option<Self> {
        match chi {
            -1 => Some(Helicity::Negative),
            1 => Some(Helicity::Positive),
            _ => None,
        }
    }

    pub fn both() -> [Helicity; 2] {
        [Helicity::Negative, Helicity::Positive]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub chi: Helicity,
    pub hbar: f64,
}

impl ModelParams {
    pub fn new(chi: Helicity, hbar: f64) -> Option<Self> {
        (hbar > 0.0 && hbar.is_finite()).then_some(Self { chi, hbar })
    }

    /// `s = chi hbar / 2`
    pub fn spin(&self) -> f64 {
        0.5 * self.chi.sign() * self.hbar
    }

    pub fn chi_hbar(&self) -> f64 {
        self.chi.sign() * self.hbar
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        Self { chi: Helicity::Negative, hbar: 1.0 }
    }
}

/// A point `(zeta, R)` of the group manifold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupPoint {
    pub zeta: SigmaPoint,
    pub r: MinkowskiVector,
}

impl GroupPoint {
    pub fn new(zeta: SigmaPoint, r: MinkowskiVector) -> Self {
        Self { zeta, r }
    }

    pub fn momentum(&self) -> MinkowskiVector {
        momentum_p(&self.zeta)
    }
}

/// Ambient tangent vector `(dzeta, dR)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentW {
    pub dzeta: DiracSpinor,
    pub dr: MinkowskiVector,
}

impl TangentW {
    pub fn zero() -> Self {
        Self { dzeta: DiracSpinor::zero(), dr: MinkowskiVector::ZERO }
    }

    /// `|zeta'^H dzeta'' + dzeta'^H zeta''|` at `at`.
    pub fn constraint_residual(&self, at: &GroupPoint) -> f64 {
        let z = at.zeta.zeta();
        (z.zeta_prime().dotc(&self.dzeta.zeta_second())
            + self.dzeta.zeta_prime().dotc(&z.zeta_second()))
        .norm()
    }

    pub fn to_real(&self) -> SVector<f64, 12> {
        let mut v = SVector::<f64, 12>::zeros();
        for k in 0..4 {
            v[2 * k] = self.dzeta.0[k].re;
            v[2 * k + 1] = self.dzeta.0[k].im;
        }
        for mu in 0..4 {
            v[8 + mu] = self.dr.as_array()[mu];
        }
        v
    }

    pub fn from_real(v: &SVector<f64, 12>) -> Self {
        let dz = nalgebra::Vector4::from_fn(|k, _| C64::new(v[2 * k], v[2 * k + 1]));
        Self {
            dzeta: DiracSpinor(dz),
            dr: MinkowskiVector::new(v[8], v[9], v[10], v[11]),
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { dzeta: self.dzeta.scale(C64::from(s)), dr: self.dr * s }
    }

    pub fn add(&self, other: &TangentW) -> Self {
        Self { dzeta: self.dzeta + other.dzeta, dr: self.dr + other.dr }
    }
}

/// A point `(p, x)` of the space of motions; `|p| > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotionPoint {
    pub p: [f64; 3],
    pub x: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentX {
    pub dp: [f64; 3],
    pub dx: [f64; 3],
}

impl TangentX {
    pub fn momentum(dp: [f64; 3]) -> Self {
        Self { dp, dx: [0.0; 3] }
    }

    pub fn position(dx: [f64; 3]) -> Self {
        Self { dp: [0.0; 3], dx }
    }

    pub fn to_real(&self) -> [f64; 6] {
        [self.dp[0], self.dp[1], self.dp[2], self.dx[0], self.dx[1], self.dx[2]]
    }

    pub fn from_real(v: &[f64; 6]) -> Self {
        Self { dp: [v[0], v[1], v[2]], dx: [v[3], v[4], v[5]] }
    }
}

pub(crate) fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub(crate) fn norm3(a: &[f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

/// The one-form on the ambient space `C^4 x R^4`,
/// `-P(z).dR + chi hbar bar(z) dz / i`. Real on tangent vectors.
pub fn varpi_ambient(z: &DiracSpinor, t: &TangentW, params: &ModelParams) -> C64 {
    let p = momentum_p(&SigmaPoint::new_unchecked(*z));
    let pair = z.pairing(&t.dzeta);
    C64::from(-p.dot(&t.dr)) + pair * (-I) * params.chi_hbar()
}

pub fn check_tangent(pt: &GroupPoint, t: &TangentW) -> Result<()> {
    let res = t.constraint_residual(pt);
    if res > TANGENT_TOLERANCE {
        Err(GqError::NonTangentVector(res))
    } else {
        Ok(())
    }
}

pub fn varpi_eval(pt: &GroupPoint, t: &TangentW, params: &ModelParams) -> Result<f64> {
    check_tangent(pt, t)?;
    Ok(varpi_ambient(pt.zeta.zeta(), t, params).re)
}

/// `d varpi (t1, t2)` from the explicit bilinear expression.
pub fn sigma_eval(pt: &GroupPoint, t1: &TangentW, t2: &TangentW, params: &ModelParams) -> Result<f64> {
    check_tangent(pt, t1)?;
    check_tangent(pt, t2)?;
    let z = pt.zeta.zeta();
    let dp1 = momentum_p_derivative(z, &t1.dzeta);
    let dp2 = momentum_p_derivative(z, &t2.dzeta);
    let translational = -(dp1.dot(&t2.dr) - dp2.dot(&t1.dr));
    let spinorial = (t1.dzeta.pairing(&t2.dzeta) - t2.dzeta.pairing(&t1.dzeta)) * (-I);
    Ok(translational + params.chi_hbar() * spinorial.re)
}

/// `{P, f1, f2}` spanning the null hyperplane orthogonal to `P`; `f1`, `f2`
/// are unit spatial vectors orthogonal to `p`.
pub fn perp_basis(p: &MinkowskiVector) -> [MinkowskiVector; 3] {
    let s = p.space();
    let n = norm3(&s);
    let u = [s[0] / n, s[1] / n, s[2] / n];
    // drop the axis most aligned with u, Gram-Schmidt the other two
    let drop = (0..3)
        .max_by(|&a, &b| u[a].abs().partial_cmp(&u[b].abs()).unwrap())
        .unwrap();
    let mut fs: Vec<[f64; 3]> = Vec::with_capacity(2);
    for axis in (0..3).filter(|&k| k != drop) {
        let mut e = [0.0; 3];
        e[axis] = 1.0;
        let mut r = e;
        for prev in std::iter::once(&u).chain(fs.iter()) {
            let c = dot3(&r, prev);
            for k in 0..3 {
                r[k] -= c * prev[k];
            }
        }
        let rn = norm3(&r);
        fs.push([r[0] / rn, r[1] / rn, r[2] / rn]);
    }
    [
        *p,
        MinkowskiVector::from_space_time(fs[0], 0.0),
        MinkowskiVector::from_space_time(fs[1], 0.0),
    ]
}

/// `i sqrt(2) chi / hbar`: the spinor response to a translation along the
/// characteristic distribution.
pub fn kernel_coefficient(params: &ModelParams) -> C64 {
    I * (SQRT_2 * params.chi.sign() / params.hbar)
}

/// `dzeta = kappa gamma(dR) Pi zeta + i lambda zeta` paired with `dR`.
pub fn kernel_vector(pt: &GroupPoint, dr: &MinkowskiVector, lambda: f64, params: &ModelParams) -> TangentW {
    let z = pt.zeta.zeta();
    let pz = projector_pi(ProjectorSign::Plus) * z.0;
    let dz = gamma_vec(dr) * pz * kernel_coefficient(params) + z.0 * (I * lambda);
    TangentW { dzeta: DiracSpinor(dz), dr: *dr }
}

/// Three translation generators (`dR = P, f1, f2`) and the phase generator.
pub fn kernel_basis(pt: &GroupPoint, params: &ModelParams) -> [TangentW; 4] {
    let basis = perp_basis(&pt.momentum());
    [
        kernel_vector(pt, &basis[0], 0.0, params),
        kernel_vector(pt, &basis[1], 0.0, params),
        kernel_vector(pt, &basis[2], 0.0, params),
        kernel_vector(pt, &MinkowskiVector::ZERO, 1.0, params),
    ]
}

/// `(zeta' kept, second half shifted by kappa (t - sigma.r) zeta')`.
pub(crate) fn translated_second(zp: &HalfSpinor, zs: &HalfSpinor, dr: &MinkowskiVector, params: &ModelParams) -> HalfSpinor {
    let m = zp * C64::from(dr.time()) - crate::clifford::pauli_vec(dr.space()) * zp;
    zs + m * kernel_coefficient(params)
}

/// Exact flow along the characteristic distribution: translation by `dr`
/// (which must lie in `P^perp`) combined with the phase `e^{i lambda}`.
/// Both generators are linear in `zeta` and commute.
pub fn flow_kernel(pt: &GroupPoint, dr: &MinkowskiVector, lambda: f64, params: &ModelParams) -> GroupPoint {
    let zp = pt.zeta.zeta_prime();
    let zs = translated_second(&zp, &pt.zeta.zeta_second(), dr, params);
    let phase = C64::from_polar(1.0, lambda);
    let zeta = DiracSpinor::from_halves(zp * phase, zs * phase);
    GroupPoint { zeta: SigmaPoint::new_unchecked(zeta), r: pt.r + *dr }
}

/// `omega(u1, u2) = dp ^ dx (u1, u2) + s u.(du1 x du2)`, with `u = p/|p|`.
///
/// The orientation of the area term is the one that makes `omega` the
/// curvature of the prequantum connection.
pub fn omega_eval(m: &MotionPoint, u1: &TangentX, u2: &TangentX, params: &ModelParams) -> Result<f64> {
    let n = norm3(&m.p);
    if !(n > 0.0) {
        return Err(GqError::ZeroMomentum);
    }
    let u = [m.p[0] / n, m.p[1] / n, m.p[2] / n];
    let du = |dp: &[f64; 3]| {
        let c = dot3(&u, dp);
        [(dp[0] - c * u[0]) / n, (dp[1] - c * u[1]) / n, (dp[2] - c * u[2]) / n]
    };
    let surf = dot3(&u, &cross3(&du(&u1.dp), &du(&u2.dp)));
    Ok(dot3(&u1.dp, &u2.dx) - dot3(&u2.dp, &u1.dx) + params.spin() * surf)
}

/// Projection to the space of motions through the section of the
/// prequantum bundle.
pub fn project_wx(pt: &GroupPoint, params: &ModelParams) -> Result<MotionPoint> {
    project_yx(&project_wy(pt, params)?)
}

/// Orthonormal (ambient Euclidean) basis of the 10-dimensional tangent space.
pub fn tangent_basis(pt: &GroupPoint) -> [TangentW; 10] {
    let zp = pt.zeta.zeta_prime();
    let zs = pt.zeta.zeta_second();
    let n = complex_structure() * zp.conjugate();
    let zp2 = zp.norm_squared();
    let mut raw: Vec<TangentW> = Vec::with_capacity(10);
    let units = [C64::new(1.0, 0.0), I];
    for k in 0..2 {
        for unit in units {
            let mut dzp = HalfSpinor::zeros();
            dzp[k] = unit;
            let dzs = zp * (-(dzp.dotc(&zs)) / zp2);
            raw.push(TangentW { dzeta: DiracSpinor::from_halves(dzp, dzs), dr: MinkowskiVector::ZERO });
        }
    }
    for unit in units {
        raw.push(TangentW { dzeta: DiracSpinor::from_halves(HalfSpinor::zeros(), n * unit), dr: MinkowskiVector::ZERO });
    }
    for mu in 1..=4 {
        raw.push(TangentW { dzeta: DiracSpinor::zero(), dr: MinkowskiVector::basis(mu) });
    }
    let mut ortho: Vec<SVector<f64, 12>> = Vec::with_capacity(10);
    for t in &raw {
        let mut v = t.to_real();
        // twice for numerical orthogonality
        for _ in 0..2 {
            for q in &ortho {
                v -= q * q.dot(&v);
            }
        }
        ortho.push(v / v.norm());
    }
    std::array::from_fn(|k| TangentW::from_real(&ortho[k]))
}

/// Unit-norm tangent with Gaussian coefficients on [`tangent_basis`].
pub fn random_tangent<R: Rng + ?Sized>(pt: &GroupPoint, rng: &mut R) -> TangentW {
    let basis = tangent_basis(pt);
    let mut v = SVector::<f64, 12>::zeros();
    for b in &basis {
        let c: f64 = rng.sample(StandardNormal);
        v += b.to_real() * c;
    }
    TangentW::from_real(&(v / v.norm()))
}

/// `(sigma_project(zeta + s dzeta), R + s dR)`: a second-order retraction
/// onto the group manifold.
pub fn displaced(pt: &GroupPoint, t: &TangentW, s: f64) -> Result<GroupPoint> {
    let z = *pt.zeta.zeta() + t.dzeta.scale(C64::from(s));
    let zeta = sigma_project(z.zeta_prime(), z.zeta_second())?;
    Ok(GroupPoint { zeta, r: pt.r + t.dr * s })
}

/// Singular values (descending) of `sigma` on the orthonormal tangent basis.
pub fn sigma_singular_values(pt: &GroupPoint, params: &ModelParams) -> Result<[f64; 10]> {
    let basis = tangent_basis(pt);
    let mut m = SMatrix::<f64, 10, 10>::zeros();
    for a in 0..10 {
        for b in 0..10 {
            m[(a, b)] = sigma_eval(pt, &basis[a], &basis[b], params)?;
        }
    }
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(std::array::from_fn(|k| sv[k]))
}

/// `(rank, nullity)` of `sigma` at the given singular-value threshold.
pub fn sigma_rank(pt: &GroupPoint, params: &ModelParams, threshold: f64) -> Result<(usize, usize)> {
    let sv = sigma_singular_values(pt, params)?;
    let rank = sv.iter().filter(|&&s| s > threshold).count();
    Ok((rank, 10 - rank))
}
