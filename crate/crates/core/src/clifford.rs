//! Dirac matrices in the chiral block representation, spinor conjugation
//! through the Gram matrix, chirality projectors and the quaternionic
//! structure of spinor space.
//!
//! Indices follow the physics convention `mu = 1..=4` with `4` the time
//! direction and metric `g = diag(-1, -1, -1, +1)`. Index `5` selects the
//! chirality operator.

use std::ops::{Add, Index, Mul, Neg, Sub};

use nalgebra::{Matrix2, Matrix4, RowVector4, Vector2, Vector4};
use num_complex::Complex64;

use crate::error::{GqError, Result};

pub type C64 = Complex64;
pub type ComplexMatrix4 = Matrix4<C64>;
pub type ComplexMatrix2 = Matrix2<C64>;
pub type HalfSpinor = Vector2<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Diagonal of the Minkowski metric, time last.
pub const METRIC: [f64; 4] = [-1.0, -1.0, -1.0, 1.0];

/// Metric coefficient `g_{mu mu}` for `mu = 1..=4`.
pub fn metric(mu: usize) -> f64 {
    METRIC[mu - 1]
}

/// A real four-vector `(v1, v2, v3, v4)` with `v4` the time component.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MinkowskiVector([f64; 4]);

impl MinkowskiVector {
    pub const ZERO: Self = Self([0.0; 4]);

    pub fn new(v1: f64, v2: f64, v3: f64, v4: f64) -> Self {
        Self([v1, v2, v3, v4])
    }

    pub fn from_space_time(space: [f64; 3], time: f64) -> Self {
        Self([space[0], space[1], space[2], time])
    }

    /// Unit vector along direction `mu = 1..=4`.
    pub fn basis(mu: usize) -> Self {
        let mut v = [0.0; 4];
        v[mu - 1] = 1.0;
        Self(v)
    }

    /// Component `v^mu`, `mu = 1..=4`.
    pub fn get(&self, mu: usize) -> f64 {
        self.0[mu - 1]
    }

    pub fn space(&self) -> [f64; 3] {
        [self.0[0], self.0[1], self.0[2]]
    }

    pub fn time(&self) -> f64 {
        self.0[3]
    }

    pub fn as_array(&self) -> [f64; 4] {
        self.0
    }

    /// `-(a1 b1 + a2 b2 + a3 b3) + a4 b4`.
    pub fn dot(&self, other: &Self) -> f64 {
        -self.0[0] * other.0[0] - self.0[1] * other.0[1] - self.0[2] * other.0[2]
            + self.0[3] * other.0[3]
    }

    /// Covariant components `v_mu = g_{mu nu} v^nu`.
    pub fn lowered(&self) -> [f64; 4] {
        [-self.0[0], -self.0[1], -self.0[2], self.0[3]]
    }

    pub fn euclidean_norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

impl Index<usize> for MinkowskiVector {
    type Output = f64;

    /// 1-based, like [`MinkowskiVector::get`].
    fn index(&self, mu: usize) -> &f64 {
        &self.0[mu - 1]
    }
}

impl Add for MinkowskiVector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(std::array::from_fn(|k| self.0[k] + rhs.0[k]))
    }
}

impl Sub for MinkowskiVector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(std::array::from_fn(|k| self.0[k] - rhs.0[k]))
    }
}

impl Neg for MinkowskiVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|x| -x))
    }
}

impl Mul<f64> for MinkowskiVector {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self(self.0.map(|x| x * s))
    }
}

impl Mul<MinkowskiVector> for f64 {
    type Output = MinkowskiVector;
    fn mul(self, v: MinkowskiVector) -> MinkowskiVector {
        v * self
    }
}

/// Pauli matrix `sigma_j`, `j = 1..=3`.
pub fn pauli(j: usize) -> ComplexMatrix2 {
    match j {
        1 => Matrix2::new(ZERO, ONE, ONE, ZERO),
        2 => Matrix2::new(ZERO, -I, I, ZERO),
        3 => Matrix2::new(ONE, ZERO, ZERO, -ONE),
        _ => panic!("Pauli index {j} out of range"),
    }
}

/// `sigma(a) = a1 sigma_1 + a2 sigma_2 + a3 sigma_3`.
pub fn pauli_vec(a: [f64; 3]) -> ComplexMatrix2 {
    pauli(1) * C64::from(a[0]) + pauli(2) * C64::from(a[1]) + pauli(3) * C64::from(a[2])
}

/// `J = -i sigma_2`, the complex structure of the plane.
pub fn complex_structure() -> ComplexMatrix2 {
    Matrix2::new(ZERO, -ONE, ONE, ZERO)
}

fn blocks(
    a: ComplexMatrix2,
    b: ComplexMatrix2,
    c: ComplexMatrix2,
    d: ComplexMatrix2,
) -> ComplexMatrix4 {
    let mut m = ComplexMatrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(&a);
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(&b);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(&c);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(&d);
    m
}

/// Dirac matrix `gamma_mu` for `mu = 1..=4`, chirality for `mu = 5`.
pub fn gamma(mu: usize) -> Result<ComplexMatrix4> {
    let z = ComplexMatrix2::zeros();
    let id = ComplexMatrix2::identity();
    match mu {
        1..=3 => {
            let s = pauli(mu);
            Ok(blocks(z, s, -s, z))
        }
        4 => Ok(blocks(z, id, id, z)),
        5 => Ok(blocks(id * -I, z, z, id * I)),
        _ => Err(GqError::IndexOutOfRange(mu)),
    }
}

pub(crate) fn gamma_unchecked(mu: usize) -> ComplexMatrix4 {
    gamma(mu).expect("gamma index in range")
}

pub fn gamma5() -> ComplexMatrix4 {
    gamma_unchecked(5)
}

/// `gamma(v) = gamma_mu v^mu` summed over the four Minkowski directions.
pub fn gamma_vec(v: &MinkowskiVector) -> ComplexMatrix4 {
    // [[0, v4 + sigma.v], [v4 - sigma.v, 0]]
    let s = pauli_vec(v.space());
    let t = ComplexMatrix2::identity() * C64::from(v.time());
    blocks(ComplexMatrix2::zeros(), t + s, t - s, ComplexMatrix2::zeros())
}

/// Gram matrix `G = 1/2 [[0, 1], [1, 0]]` of the spinor Hermitian form.
pub fn gram() -> ComplexMatrix4 {
    let z = ComplexMatrix2::zeros();
    let h = ComplexMatrix2::identity() * C64::from(0.5);
    blocks(z, h, h, z)
}

pub fn gram_inverse() -> ComplexMatrix4 {
    let z = ComplexMatrix2::zeros();
    let h = ComplexMatrix2::identity() * C64::from(2.0);
    blocks(z, h, h, z)
}

/// Adjoint with respect to the Gram form: `G^{-1} conj(M)^T G`.
pub fn bar_matrix(m: &ComplexMatrix4) -> ComplexMatrix4 {
    gram_inverse() * m.adjoint() * gram()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectorSign {
    /// `Pi = (1 + i gamma_5) / 2`
    Plus,
    /// `Pi-bar = (1 - i gamma_5) / 2`
    Minus,
}

pub fn projector_pi(sign: ProjectorSign) -> ComplexMatrix4 {
    let s = match sign {
        ProjectorSign::Plus => I,
        ProjectorSign::Minus => -I,
    };
    (ComplexMatrix4::identity() + gamma5() * s) * C64::from(0.5)
}

/// A Dirac spinor `zeta = (zeta', zeta'')` in `C^{2,2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracSpinor(pub Vector4<C64>);

impl DiracSpinor {
    pub fn from_halves(prime: HalfSpinor, second: HalfSpinor) -> Self {
        Self(Vector4::new(prime[0], prime[1], second[0], second[1]))
    }

    pub fn zero() -> Self {
        Self(Vector4::zeros())
    }

    pub fn zeta_prime(&self) -> HalfSpinor {
        Vector2::new(self.0[0], self.0[1])
    }

    pub fn zeta_second(&self) -> HalfSpinor {
        Vector2::new(self.0[2], self.0[3])
    }

    /// Row `conj(z)^T G`.
    pub fn bar(&self) -> RowVector4<C64> {
        self.0.adjoint() * gram()
    }

    /// `bar(self) . w = 1/2 (conj(z'')^T w' + conj(z')^T w'')`.
    pub fn pairing(&self, w: &DiracSpinor) -> C64 {
        0.5 * (self.zeta_second().dotc(&w.zeta_prime()) + self.zeta_prime().dotc(&w.zeta_second()))
    }

    /// Quaternionic structure `H(z) = (J conj(z''), J conj(z'))`.
    pub fn quaternionic(&self) -> DiracSpinor {
        let j = complex_structure();
        DiracSpinor::from_halves(
            j * self.zeta_second().conjugate(),
            j * self.zeta_prime().conjugate(),
        )
    }

    pub fn scale(&self, s: C64) -> DiracSpinor {
        DiracSpinor(self.0 * s)
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

impl Add for DiracSpinor {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl Sub for DiracSpinor {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl Mul<DiracSpinor> for &ComplexMatrix4 {
    type Output = DiracSpinor;
    fn mul(self, z: DiracSpinor) -> DiracSpinor {
        DiracSpinor(self * z.0)
    }
}

/// Applies the antilinear `H` to a matrix from both sides: `H M H^{-1}`,
/// which is again complex linear. `H^{-1} = -H`.
pub fn conjugate_by_quaternionic(m: &ComplexMatrix4) -> ComplexMatrix4 {
    let mut out = ComplexMatrix4::zeros();
    for k in 0..4 {
        let mut e = Vector4::zeros();
        e[k] = ONE;
        // H^{-1} e_k = -H e_k ; M ; then H
        let v = DiracSpinor(e).quaternionic().scale(-ONE);
        let w = DiracSpinor(m * v.0).quaternionic();
        out.set_column(k, &w.0);
    }
    out
}

pub fn max_abs(m: &ComplexMatrix4) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Row-major `[re, im]` pairs, the JSON layout used by harness reports.
pub fn to_re_im_rows(m: &ComplexMatrix4) -> Vec<Vec<[f64; 2]>> {
    (0..4)
        .map(|r| (0..4).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

/// Maximum deviations of the representation identities.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CliffordReport {
    /// `max |gamma_mu gamma_nu + gamma_nu gamma_mu - 2 g_{mu nu}|`
    pub anticommutator: f64,
    pub traceless: f64,
    /// `max |G^{-1} conj(gamma_mu)^T G - gamma_mu|`
    pub self_adjoint: f64,
    pub chirality_anticommutes: f64,
    /// `|gamma_5 - gamma_1 gamma_2 gamma_3 gamma_4|`
    pub chirality_product: f64,
    /// idempotence, orthogonality and completeness of `Pi`, `Pi-bar`
    pub projectors: f64,
    /// `|Pi H - H Pi-bar|` as complex-linear maps
    pub quaternionic_swap: f64,
}

impl CliffordReport {
    pub fn max(&self) -> f64 {
        [
            self.anticommutator,
            self.traceless,
            self.self_adjoint,
            self.chirality_anticommutes,
            self.chirality_product,
            self.projectors,
            self.quaternionic_swap,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn verify_clifford() -> CliffordReport {
    let g: Vec<ComplexMatrix4> = (1..=4).map(gamma_unchecked).collect();
    let g5 = gamma5();
    let id = ComplexMatrix4::identity();
    let mut report = CliffordReport::default();

    for mu in 0..4 {
        for nu in 0..4 {
            let expect = if mu == nu { id * C64::from(2.0 * METRIC[mu]) } else { ComplexMatrix4::zeros() };
            let anti = g[mu] * g[nu] + g[nu] * g[mu];
            report.anticommutator = report.anticommutator.max(max_abs(&(anti - expect)));
        }
        report.traceless = report.traceless.max(g[mu].trace().norm());
        report.self_adjoint = report.self_adjoint.max(max_abs(&(bar_matrix(&g[mu]) - g[mu])));
        report.chirality_anticommutes =
            report.chirality_anticommutes.max(max_abs(&(g5 * g[mu] + g[mu] * g5)));
    }
    report.chirality_product = max_abs(&(g5 - g[0] * g[1] * g[2] * g[3]));

    let pi = projector_pi(ProjectorSign::Plus);
    let pib = projector_pi(ProjectorSign::Minus);
    report.projectors = [
        max_abs(&(pi * pi - pi)),
        max_abs(&(pib * pib - pib)),
        max_abs(&(pi * pib)),
        max_abs(&(pi + pib - id)),
    ]
    .into_iter()
    .fold(0.0, f64::max);

    // Pi H = H Pi-bar  <=>  H Pi-bar H^{-1} = Pi
    report.quaternionic_swap = max_abs(&(conjugate_by_quaternionic(&pib) - pi));
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn gamma4_is_block_swap() {
        let g4 = gamma(4).unwrap();
        for r in 0..4 {
            for col in 0..4 {
                let expect = if (r + 2) % 4 == col { ONE } else { ZERO };
                assert_eq!(g4[(r, col)], expect);
            }
        }
    }

    #[test]
    fn gamma5_is_diagonal_and_product() {
        let g5 = gamma(5).unwrap();
        let diag = [-I, -I, I, I];
        for k in 0..4 {
            assert_eq!(g5[(k, k)], diag[k]);
        }
        let prod = gamma(1).unwrap() * gamma(2).unwrap() * gamma(3).unwrap() * gamma(4).unwrap();
        assert_eq!(g5, prod);
    }

    #[test]
    fn gamma1_squares_to_minus_identity() {
        let g1 = gamma(1).unwrap();
        assert_eq!(g1 * g1, -ComplexMatrix4::identity());
        let g4 = gamma(4).unwrap();
        assert_eq!(g4 * g4, ComplexMatrix4::identity());
    }

    #[test]
    fn gamma_index_out_of_range() {
        assert_eq!(gamma(0), Err(GqError::IndexOutOfRange(0)));
        assert_eq!(gamma(6), Err(GqError::IndexOutOfRange(6)));
    }

    #[test]
    fn gamma_vec_examples() {
        assert_eq!(gamma_vec(&MinkowskiVector::basis(4)), gamma(4).unwrap());
        assert_eq!(gamma_vec(&MinkowskiVector::ZERO), ComplexMatrix4::zeros());
        let m = gamma_vec(&MinkowskiVector::new(0.0, 0.0, 1.0, 1.0));
        let id = ComplexMatrix2::identity();
        let upper = pauli(3) + id;
        let lower = -pauli(3) + id;
        assert_eq!(m.fixed_view::<2, 2>(0, 2).into_owned(), upper);
        assert_eq!(m.fixed_view::<2, 2>(2, 0).into_owned(), lower);
        assert_eq!(m.fixed_view::<2, 2>(0, 0).into_owned(), ComplexMatrix2::zeros());
        assert_eq!(m, gamma(3).unwrap() + gamma(4).unwrap());
    }

    #[test]
    fn bar_spinor_examples() {
        let z = DiracSpinor::from_halves(Vector2::new(ONE, ZERO), Vector2::new(ONE, ZERO));
        assert_eq!(z.pairing(&z), ONE);
        assert_eq!((z.bar() * z.0)[0], ONE);
        let w = DiracSpinor::from_halves(Vector2::new(ONE, ZERO), Vector2::new(ZERO, ONE));
        assert_eq!(w.pairing(&w), ZERO);
    }

    #[test]
    fn pairing_matches_row_product() {
        let z = DiracSpinor(Vector4::new(c(0.3, -1.0), c(2.0, 0.5), c(-0.7, 0.1), c(0.0, 1.5)));
        let w = DiracSpinor(Vector4::new(c(1.0, 1.0), c(-0.2, 0.3), c(0.4, -0.9), c(2.0, 0.0)));
        let direct = (z.bar() * w.0)[0];
        assert!((direct - z.pairing(&w)).norm() < 1e-15);
    }

    #[test]
    fn projector_identities() {
        let pi = projector_pi(ProjectorSign::Plus);
        let pib = projector_pi(ProjectorSign::Minus);
        assert_eq!(pi + pib, ComplexMatrix4::identity());
        assert_eq!(pi * pi, pi);
        let g4 = gamma(4).unwrap();
        assert_eq!(pi * g4, g4 * pib);
        let diag = [ONE, ONE, ZERO, ZERO];
        for k in 0..4 {
            assert_eq!(pi[(k, k)], diag[k]);
        }
    }

    #[test]
    fn quaternionic_examples() {
        let z = DiracSpinor::from_halves(Vector2::new(ONE, ZERO), Vector2::new(ONE, ZERO));
        let h = z.quaternionic();
        assert_eq!(h, DiracSpinor::from_halves(Vector2::new(ZERO, ONE), Vector2::new(ZERO, ONE)));
        let w = DiracSpinor(Vector4::new(c(0.3, -1.0), c(2.0, 0.5), c(-0.7, 0.1), c(0.0, 1.5)));
        assert_eq!(w.quaternionic().quaternionic(), w.scale(-ONE));
        assert_eq!(w.scale(I).quaternionic(), w.quaternionic().scale(-I));
    }

    #[test]
    fn verify_clifford_is_exact() {
        let report = verify_clifford();
        assert_eq!(report.max(), 0.0, "{report:?}");
    }

    #[test]
    fn minkowski_dot_signature() {
        let v = MinkowskiVector::new(1.0, 2.0, 3.0, 4.0);
        assert_eq!(v.dot(&v), -14.0 + 16.0);
        assert_eq!(v[4], 4.0);
    }
}
