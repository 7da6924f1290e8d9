//! Central finite-difference oracles for the differential-form identities.
//!
//! Ambient forms are differentiated along constant vector fields, which
//! commute, so `d beta (a, b) = a(beta(b)) - b(beta(a))`.

use crate::clifford::C64;
use crate::error::Result;
use crate::prequantum::{alpha_eval, displaced_y, dproject_yx, project_wy, PrequantumPoint, TangentY};
use crate::symplectic::{
    displaced, omega_eval, project_wx, varpi_ambient, GroupPoint, ModelParams, MotionPoint, TangentW, TangentX,
};

fn varpi_at(pt: &GroupPoint, along: &TangentW, s: f64, arg: &TangentW, params: &ModelParams) -> f64 {
    let z = *pt.zeta.zeta() + along.dzeta.scale(C64::from(s));
    varpi_ambient(&z, arg, params).re
}

/// Exterior derivative of the ambient extension of `varpi`. `R` does not
/// enter the coefficients, so only the spinor part of the shift matters.
pub fn d_varpi_fd(pt: &GroupPoint, t1: &TangentW, t2: &TangentW, params: &ModelParams, h: f64) -> f64 {
    let a = (varpi_at(pt, t1, h, t2, params) - varpi_at(pt, t1, -h, t2, params)) / (2.0 * h);
    let b = (varpi_at(pt, t2, h, t1, params) - varpi_at(pt, t2, -h, t1, params)) / (2.0 * h);
    a - b
}

/// Velocity of the projection to `Y` along `t`, via the retraction
/// [`displaced`].
pub fn dproject_wy_fd(pt: &GroupPoint, t: &TangentW, params: &ModelParams, h: f64) -> Result<(PrequantumPoint, TangentY)> {
    let y0 = project_wy(pt, params)?;
    let yp = project_wy(&displaced(pt, t, h)?, params)?;
    let ym = project_wy(&displaced(pt, t, -h)?, params)?;
    let dzp = (yp.z_prime() - ym.z_prime()) / C64::from(2.0 * h);
    let dx = std::array::from_fn(|j| (yp.x[j] - ym.x[j]) / (2.0 * h));
    Ok((y0, TangentY { dzp, dx }))
}

/// `|varpi(t) - alpha(pi_* t)|` with the push-forward by finite differences.
pub fn pullback_alpha_residual(pt: &GroupPoint, t: &TangentW, params: &ModelParams, h: f64) -> Result<f64> {
    let (y, dy) = dproject_wy_fd(pt, t, params, h)?;
    let lhs = crate::symplectic::varpi_eval(pt, t, params)?;
    Ok((lhs - alpha_eval(&y, &dy, params)).abs())
}

/// Velocity of the projection to the space of motions along `t`.
pub fn dproject_wx_fd(pt: &GroupPoint, t: &TangentW, params: &ModelParams, h: f64) -> Result<(MotionPoint, TangentX)> {
    let m0 = project_wx(pt, params)?;
    let mp = project_wx(&displaced(pt, t, h)?, params)?;
    let mm = project_wx(&displaced(pt, t, -h)?, params)?;
    let dp = std::array::from_fn(|j| (mp.p[j] - mm.p[j]) / (2.0 * h));
    let dx = std::array::from_fn(|j| (mp.x[j] - mm.x[j]) / (2.0 * h));
    Ok((m0, TangentX { dp, dx }))
}

/// `|sigma(t1, t2) - omega(pi_* t1, pi_* t2)|` for the projection to `X`.
pub fn pullback_omega_residual(pt: &GroupPoint, t1: &TangentW, t2: &TangentW, params: &ModelParams, h: f64) -> Result<f64> {
    let (m, u1) = dproject_wx_fd(pt, t1, params, h)?;
    let (_, u2) = dproject_wx_fd(pt, t2, params, h)?;
    let lhs = crate::symplectic::sigma_eval(pt, t1, t2, params)?;
    Ok((lhs - omega_eval(&m, &u1, &u2, params)?).abs())
}

fn alpha_at(y: &PrequantumPoint, along: &TangentY, s: f64, arg: &TangentY, params: &ModelParams) -> Result<f64> {
    Ok(alpha_eval(&displaced_y(y, along, s)?, arg, params))
}

pub fn d_alpha_fd(y: &PrequantumPoint, t1: &TangentY, t2: &TangentY, params: &ModelParams, h: f64) -> Result<f64> {
    let a = (alpha_at(y, t1, h, t2, params)? - alpha_at(y, t1, -h, t2, params)?) / (2.0 * h);
    let b = (alpha_at(y, t2, h, t1, params)? - alpha_at(y, t2, -h, t1, params)?) / (2.0 * h);
    Ok(a - b)
}

/// `|d alpha (t1, t2) - omega(pi_* t1, pi_* t2)|`
pub fn curvature_residual(y: &PrequantumPoint, t1: &TangentY, t2: &TangentY, params: &ModelParams, h: f64) -> Result<f64> {
    let lhs = d_alpha_fd(y, t1, t2, params, h)?;
    let m = crate::prequantum::project_yx(y)?;
    let rhs = omega_eval(&m, &dproject_yx(y, t1), &dproject_yx(y, t2), params)?;
    Ok((lhs - rhs).abs())
}

fn motion_shift(m: &MotionPoint, t: &TangentX, s: f64) -> MotionPoint {
    MotionPoint {
        p: std::array::from_fn(|j| m.p[j] + s * t.dp[j]),
        x: std::array::from_fn(|j| m.x[j] + s * t.dx[j]),
    }
}

fn omega_deriv(m: &MotionPoint, along: &TangentX, a: &TangentX, b: &TangentX, params: &ModelParams, h: f64) -> Result<f64> {
    let p = omega_eval(&motion_shift(m, along, h), a, b, params)?;
    let q = omega_eval(&motion_shift(m, along, -h), a, b, params)?;
    Ok((p - q) / (2.0 * h))
}

/// `d omega (a, b, c)`; vanishes for a closed form.
pub fn d_omega_fd(m: &MotionPoint, a: &TangentX, b: &TangentX, c: &TangentX, params: &ModelParams, h: f64) -> Result<f64> {
    Ok(omega_deriv(m, a, b, c, params, h)? - omega_deriv(m, b, a, c, params, h)? + omega_deriv(m, c, a, b, params, h)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::MinkowskiVector;
    use crate::rng::{half_spinor_normal, normal3, stream};
    use crate::spin::sample_sigma_with;
    use crate::symplectic::{random_tangent, sigma_eval, Helicity};

    fn point(k: u64) -> GroupPoint {
        let mut rng = stream(41, "fdw", k);
        let zeta = sample_sigma_with(&mut rng).unwrap();
        let r = normal3(&mut rng);
        GroupPoint::new(zeta, MinkowskiVector::from_space_time(r, 0.3))
    }

    #[test]
    fn sigma_matches_exterior_derivative() {
        let params = ModelParams::new(Helicity::Negative, 0.7).unwrap();
        for k in 0..10 {
            let pt = point(k);
            let mut rng = stream(42, "t", k);
            let t1 = random_tangent(&pt, &mut rng);
            let t2 = random_tangent(&pt, &mut rng);
            let fd = d_varpi_fd(&pt, &t1, &t2, &params, 1e-5);
            let ex = sigma_eval(&pt, &t1, &t2, &params).unwrap();
            assert!((fd - ex).abs() < 1e-7, "{fd} {ex}");
        }
    }

    #[test]
    fn varpi_is_pullback_of_alpha() {
        for chi in Helicity::both() {
            let params = ModelParams::new(chi, 1.0).unwrap();
            for k in 0..10 {
                let pt = point(k);
                let mut rng = stream(43, "t", k);
                let t = random_tangent(&pt, &mut rng);
                let r1 = pullback_alpha_residual(&pt, &t, &params, 2e-4).unwrap();
                let r2 = pullback_alpha_residual(&pt, &t, &params, 1e-4).unwrap();
                assert!(r2 < 1e-5, "{r2}");
                assert!(r2 < r1 / 3.0 || r2 < 1e-9, "{r1} {r2}");
                assert!(pullback_alpha_residual(&pt, &t, &params, 1e-5).unwrap() < 1e-7);
            }
        }
    }

    #[test]
    fn curvature_is_omega_and_omega_closed() {
        for chi in Helicity::both() {
            let params = ModelParams::new(chi, 0.7).unwrap();
            for k in 0..10 {
                let mut rng = stream(44, "y", k);
                let y = PrequantumPoint::new(half_spinor_normal(&mut rng), normal3(&mut rng)).unwrap();
                let t1 = TangentY { dzp: half_spinor_normal(&mut rng), dx: normal3(&mut rng) };
                let t2 = TangentY { dzp: half_spinor_normal(&mut rng), dx: normal3(&mut rng) };
                let r = curvature_residual(&y, &t1, &t2, &params, 1e-5).unwrap();
                assert!(r < 1e-6, "{r}");
                let m = crate::prequantum::project_yx(&y).unwrap();
                let a = TangentX { dp: normal3(&mut rng), dx: normal3(&mut rng) };
                let b = TangentX { dp: normal3(&mut rng), dx: normal3(&mut rng) };
                let c = TangentX { dp: normal3(&mut rng), dx: normal3(&mut rng) };
                assert!(d_omega_fd(&m, &a, &b, &c, &params, 1e-5).unwrap().abs() < 1e-7);
            }
        }
    }

    #[test]
    fn sigma_is_pullback_of_omega() {
        for params in [ModelParams::default(), ModelParams::new(Helicity::Positive, 0.7).unwrap()] {
            for k in 0..10 {
                let pt = point(k);
                let mut rng = stream(43, "pw", k);
                let t1 = random_tangent(&pt, &mut rng);
                let t2 = random_tangent(&pt, &mut rng);
                let r = pullback_omega_residual(&pt, &t1, &t2, &params, 1e-5).unwrap();
                assert!(r < 1e-6, "{r}");
            }
        }
    }
}
