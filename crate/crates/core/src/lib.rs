//! Geometric quantization of the massless spin-1/2 particle, computed end
//! to end: spin group and spinor manifold, presymplectic and prequantum
//! structures, polarized wave functions, and light-cone Fourier transforms
//! that solve the Weyl equation.

// `!(x > t)` is how NaN inputs get rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod clifford;
pub mod error;
pub mod fd;
pub mod lightcone;
pub mod poincare;
pub mod polarization;
pub mod prequantum;
pub mod rng;
pub mod spin;
pub mod symplectic;

pub use clifford::{ComplexMatrix4, DiracSpinor, MinkowskiVector, C64};
pub use error::{GqError, Result};
pub use spin::{LorentzMatrix, SigmaPoint, SpinElement};
pub use symplectic::{GroupPoint, Helicity, ModelParams, MotionPoint, TangentW, TangentX};
pub use prequantum::{PrequantumPoint, TangentY};
