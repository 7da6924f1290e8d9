//! One module per suite; each exposes `checks()`.

pub mod clifford;
pub mod covering;
pub mod poincare;
pub mod polarization;
pub mod prequantum;
pub mod spin;
pub mod symplectic;
pub mod weyl;

use gqweyl_core::GqError;
use rayon::prelude::*;

use crate::checks::{CheckDef, CheckFn};
use crate::config::Suite;

/// Maximum that propagates NaN, so an undefined sample can never pass.
pub(crate) fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |a, b| if a.is_nan() || b.is_nan() { f64::NAN } else { a.max(b) })
}

/// `max_k f(k)` over `0..n`, evaluated in parallel.
pub(crate) fn par_max<F>(n: usize, f: F) -> Result<f64, GqError>
where
    F: Fn(usize) -> Result<f64, GqError> + Sync + Send,
{
    let v: Vec<f64> = (0..n).into_par_iter().map(f).collect::<Result<_, _>>()?;
    Ok(max_of(v))
}

/// Zero when the condition holds, one otherwise; for checks of exact
/// predicates.
pub(crate) fn indicator(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        1.0
    }
}

pub(crate) const fn check(
    name: &'static str,
    suite: Suite,
    anchor: &'static str,
    tolerance: f64,
    samples: usize,
    scalable: bool,
    run: CheckFn,
) -> CheckDef {
    CheckDef { name, suite, anchor, tolerance, samples, scalable, run }
}
