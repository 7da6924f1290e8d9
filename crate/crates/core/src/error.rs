use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GqError {
    #[error("index {0} out of range (expected 1..=5)")]
    IndexOutOfRange(usize),
    #[error("spinor pair cannot be normalized onto the spinor manifold: |zp^H zs| = {0:e}")]
    DegenerateSpinor(f64),
    #[error("matrix is not unimodular: |det - 1| = {0:e}")]
    NotUnimodular(f64),
    #[error("vector violates the linearized spinor constraint by {0:e}")]
    NonTangentVector(f64),
    #[error("leaf-to-section solve is ill-conditioned (condition number {0:e})")]
    SingularLeafSolve(f64),
    #[error("rotation or boost axis vanishes")]
    ZeroAxis,
    #[error("momentum vanishes")]
    ZeroMomentum,
    #[error("momentum is not on the light cone: |P.P| = {0:e}")]
    NotOnLightCone(f64),
    #[error("momentum is past-pointing")]
    PastPointing,
    #[error("polarized wave functions on the prequantum bundle are only built for negative helicity")]
    WrongChirality,
    #[error("invalid quadrature: {0}")]
    InvalidQuadrature(String),
    #[error("field has no analytic gradient")]
    AnalyticGradientUnavailable,
    #[error("random sampling exhausted {0} attempts")]
    SamplingExhausted(usize),
}

pub type Result<T> = std::result::Result<T, GqError>;
