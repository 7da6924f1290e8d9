//! The prequantum circle bundle `Y = C^2\{0} x R^3` over the space of
//! motions, its connection form, and the quotient map from the group
//! manifold.

use std::f64::consts::SQRT_2;

use nalgebra::{Matrix3, Vector3};

use crate::clifford::{complex_structure, pauli_vec, DiracSpinor, HalfSpinor, MinkowskiVector, C64, I};
use crate::error::{GqError, Result};
use crate::spin::{momentum_3, momentum_p, DEGENERACY_THRESHOLD};
use crate::symplectic::{
    dot3, kernel_coefficient, perp_basis, translated_second, GroupPoint, ModelParams, MotionPoint, TangentX,
};

/// Condition numbers above this make the leaf solve fail.
pub const LEAF_CONDITION_LIMIT: f64 = 1e12;
pub const LEAF_RESIDUAL_TOLERANCE: f64 = 1e-10;

/// A point `(Z', x)` of the prequantum bundle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrequantumPoint {
    zp: HalfSpinor,
    pub x: [f64; 3],
}

impl PrequantumPoint {
    pub fn new(zp: HalfSpinor, x: [f64; 3]) -> Result<Self> {
        let n = zp.norm();
        if !(n > DEGENERACY_THRESHOLD) {
            return Err(GqError::DegenerateSpinor(n));
        }
        Ok(Self { zp, x })
    }

    pub fn z_prime(&self) -> HalfSpinor {
        self.zp
    }

    /// `Z'' = Z' / |Z'|^2`
    pub fn z_second(&self) -> HalfSpinor {
        self.zp / C64::from(self.zp.norm_squared())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentY {
    pub dzp: HalfSpinor,
    pub dx: [f64; 3],
}

impl TangentY {
    pub fn to_real(&self) -> [f64; 7] {
        [self.dzp[0].re, self.dzp[0].im, self.dzp[1].re, self.dzp[1].im, self.dx[0], self.dx[1], self.dx[2]]
    }

    pub fn from_real(v: &[f64; 7]) -> Self {
        Self {
            dzp: HalfSpinor::new(C64::new(v[0], v[1]), C64::new(v[2], v[3])),
            dx: [v[4], v[5], v[6]],
        }
    }
}

/// `Z = exp(-i chi P.R / hbar) zeta`
pub fn to_z(pt: &GroupPoint, params: &ModelParams) -> DiracSpinor {
    let phase = -params.chi.sign() * pt.momentum().dot(&pt.r) / params.hbar;
    pt.zeta.zeta().scale(C64::from_polar(1.0, phase))
}

/// Translation in `P^perp` carrying `pt` along its leaf to the section
/// `t = 0`, `J conj(zeta')^H zeta'' = 0`.
pub fn leaf_translation(pt: &GroupPoint, params: &ModelParams) -> Result<MinkowskiVector> {
    let zp = pt.zeta.zeta_prime();
    let zs = pt.zeta.zeta_second();
    let basis = perp_basis(&pt.momentum());
    let n = complex_structure() * zp.conjugate();
    let kappa = kernel_coefficient(params);
    let mut a = Matrix3::<f64>::zeros();
    for (col, b) in basis.iter().enumerate() {
        let m = zp * C64::from(b.time()) - pauli_vec(b.space()) * zp;
        let c = n.dotc(&m) * kappa;
        a[(0, col)] = b.time();
        a[(1, col)] = c.re;
        a[(2, col)] = c.im;
    }
    let rhs0 = n.dotc(&zs);
    let rhs = Vector3::new(-pt.r.time(), -rhs0.re, -rhs0.im);
    let sv = a.singular_values();
    let (smax, smin) = (sv.max(), sv.min());
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(cond <= LEAF_CONDITION_LIMIT) {
        return Err(GqError::SingularLeafSolve(cond));
    }
    let c = a.lu().solve(&rhs).ok_or(GqError::SingularLeafSolve(f64::INFINITY))?;
    Ok(basis[0] * c[0] + basis[1] * c[1] + basis[2] * c[2])
}

/// The leaf of `pt` meets the section at `(Z', x)`.
pub fn project_wy(pt: &GroupPoint, params: &ModelParams) -> Result<PrequantumPoint> {
    let dr = leaf_translation(pt, params)?;
    let zp = pt.zeta.zeta_prime();
    let zs = translated_second(&zp, &pt.zeta.zeta_second(), &dr, params);
    let r = pt.r + dr;
    let n = complex_structure() * zp.conjugate();
    let scale = 1.0 + pt.r.euclidean_norm() + pt.zeta.zeta().norm();
    let residual = r.time().abs().max(n.dotc(&zs).norm());
    if residual > LEAF_RESIDUAL_TOLERANCE * scale {
        return Err(GqError::SingularLeafSolve(residual));
    }
    let phase = -params.chi.sign() * momentum_p(&pt.zeta).dot(&pt.r) / params.hbar;
    PrequantumPoint::new(zp * C64::from_polar(1.0, phase), r.space())
}

/// `p = Z'^H sigma Z' / sqrt(2)`
pub fn p_of_z(zp: &HalfSpinor) -> Result<[f64; 3]> {
    let n = zp.norm();
    if !(n > DEGENERACY_THRESHOLD) {
        return Err(GqError::DegenerateSpinor(n));
    }
    Ok(momentum_3(zp)?.0)
}

pub fn dp_of_z(zp: &HalfSpinor, dzp: &HalfSpinor) -> [f64; 3] {
    std::array::from_fn(|j| {
        let s = crate::clifford::pauli(j + 1);
        SQRT_2 * (zp.dotc(&(s * dzp))).re
    })
}

pub fn project_yx(y: &PrequantumPoint) -> Result<MotionPoint> {
    Ok(MotionPoint { p: p_of_z(&y.zp)?, x: y.x })
}

pub fn dproject_yx(y: &PrequantumPoint, t: &TangentY) -> TangentX {
    TangentX { dp: dp_of_z(&y.zp, &t.dzp), dx: t.dx }
}

/// `alpha = -x.dp - chi hbar d|p| / (2i|p|) + chi hbar Z''^H dZ' / i`,
/// complex-valued before taking the real part.
pub fn alpha_complex(y: &PrequantumPoint, t: &TangentY, params: &ModelParams) -> C64 {
    let zp = y.zp;
    let nsq = zp.norm_squared();
    let dn = 2.0 * zp.dotc(&t.dzp).re;
    let xdp = dot3(&y.x, &dp_of_z(&zp, &t.dzp));
    let ch = params.chi_hbar();
    let radial = I * (0.5 * ch * dn / nsq);
    let vertical = -I * ch * y.z_second().dotc(&t.dzp);
    C64::from(-xdp) + radial + vertical
}

pub fn alpha_eval(y: &PrequantumPoint, t: &TangentY, params: &ModelParams) -> f64 {
    alpha_complex(y, t, params).re
}

/// Infinitesimal generator of the circle action.
pub fn fundamental_field(y: &PrequantumPoint, params: &ModelParams) -> TangentY {
    TangentY { dzp: y.zp * (I * params.chi.sign()), dx: [0.0; 3] }
}

/// `(Z', x) -> (exp(i chi theta) Z', x)`
pub fn u1_action(theta: f64, y: &PrequantumPoint, params: &ModelParams) -> PrequantumPoint {
    PrequantumPoint { zp: y.zp * C64::from_polar(1.0, params.chi.sign() * theta), x: y.x }
}

pub fn displaced_y(y: &PrequantumPoint, t: &TangentY, s: f64) -> Result<PrequantumPoint> {
    PrequantumPoint::new(y.zp + t.dzp * C64::from(s), [y.x[0] + s * t.dx[0], y.x[1] + s * t.dx[1], y.x[2] + s * t.dx[2]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{half_spinor_normal, normal3, stream};
    use crate::spin::{sample_sigma_with, sigma_project};
    use crate::symplectic::{flow_kernel, Helicity};

    fn canonical() -> GroupPoint {
        let q = 2f64.powf(0.25);
        let zp = HalfSpinor::new(C64::from(q), C64::from(0.0));
        let zs = HalfSpinor::new(C64::from(1.0 / q), C64::from(0.0));
        GroupPoint::new(sigma_project(zp, zs).unwrap(), MinkowskiVector::ZERO)
    }

    #[test]
    fn canonical_point_projects_to_unit_momentum() {
        let params = ModelParams::default();
        let y = project_wy(&canonical(), &params).unwrap();
        let m = project_yx(&y).unwrap();
        assert!((m.p[2] - 1.0).abs() < 1e-14 && m.p[0].abs() < 1e-14 && m.p[1].abs() < 1e-14);
        assert!(m.x.iter().all(|c| c.abs() < 1e-14));
    }

    #[test]
    fn projection_constant_on_leaves() {
        for chi in Helicity::both() {
            let params = ModelParams::new(chi, 0.7).unwrap();
            for k in 0..20 {
                let mut rng = stream(31, "leaf", k);
                let zeta = sample_sigma_with(&mut rng).unwrap();
                let r = normal3(&mut rng);
                let pt = GroupPoint::new(zeta, MinkowskiVector::from_space_time(r, 0.4));
                let y0 = project_wy(&pt, &params).unwrap();
                let b = perp_basis(&pt.momentum());
                let dr = b[0] * 0.7 + b[1] * -1.1 + b[2] * 0.5;
                let moved = flow_kernel(&pt, &dr, 0.0, &params);
                let y1 = project_wy(&moved, &params).unwrap();
                assert!((y0.zp - y1.zp).norm() < 1e-10);
                for j in 0..3 {
                    assert!((y0.x[j] - y1.x[j]).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn alpha_on_fundamental_field_is_hbar() {
        let params = ModelParams::new(Helicity::Positive, 0.7).unwrap();
        let mut rng = stream(32, "y", 0);
        let y = PrequantumPoint::new(half_spinor_normal(&mut rng), normal3(&mut rng)).unwrap();
        let a = alpha_complex(&y, &fundamental_field(&y, &params), &params);
        assert!((a.re - 0.7).abs() < 1e-14 && a.im.abs() < 1e-14);
    }

    #[test]
    fn zero_spinor_rejected() {
        assert!(PrequantumPoint::new(HalfSpinor::zeros(), [0.0; 3]).is_err());
    }
}
