use std::collections::BTreeSet;

use gqweyl_core::ModelParams;
use harness::checks::instance_names;
use harness::{registry, Suite};

/// Identities that some check must verify, one per relation of the model.
const REQUIRED: &[&str] = &[
    "clifford-relations",
    "traceless-gammas",
    "hermitian-conjugate",
    "chirality-matrix",
    "chiral-projectors",
    "gram-form",
    "fundamental-relations",
    "null-future-momentum",
    "momentum-energy",
    "null-partner-vector",
    "phase-quotient",
    "momentum-equivariance",
    "half-spinor-direction",
    "spinor-group-diffeomorphism",
    "spin-group-conditions",
    "spin-group-columns",
    "restricted-lorentz-image",
    "covering-homomorphism",
    "covering-kernel",
    "spin-group-generators",
    "one-form-on-group",
    "presymplectic-form",
    "characteristic-distribution",
    "kernel-dimension",
    "projection-to-motions",
    "twisted-symplectic-form",
    "canonical-descent",
    "section-phase",
    "section-normalization",
    "connection-one-form",
    "prequantum-curvature",
    "prequantum-reduction",
    "leaf-descent",
    "bundle-momentum",
    "bundle-diagram",
    "circle-action",
    "polarizer",
    "polarization-condition",
    "polarization-leaves",
    "equivariant-functions",
    "covariant-constancy",
    "polarized-conditions",
    "polarized-wave-function",
    "momentum-polarized-space",
    "gamma-block-formula",
    "light-cone-measure",
    "light-cone-transform",
    "weyl-solutions",
    "two-component-form",
    "group-action",
    "momentum-action",
    "solution-representation",
];

#[test]
fn every_required_identity_has_a_check() {
    let anchors: BTreeSet<&str> = registry().iter().map(|c| c.anchor).collect();
    let missing: Vec<&&str> = REQUIRED.iter().filter(|a| !anchors.contains(**a)).collect();
    assert!(missing.is_empty(), "identities without a check: {missing:?}");
}

#[test]
fn names_are_unique_and_prefixed_by_suite() {
    let all = registry();
    let names: BTreeSet<&str> = all.iter().map(|c| c.name).collect();
    assert_eq!(names.len(), all.len());
    for c in &all {
        assert!(c.name.starts_with(&format!("{}.", c.suite.name())), "{}", c.name);
        assert!(c.tolerance >= 0.0 && c.samples > 0, "{}", c.name);
    }
    for s in Suite::ALL {
        assert!(all.iter().any(|c| c.suite == s), "empty suite {}", s.name());
    }
}

#[test]
fn prequantum_checks_repeat_at_second_hbar() {
    let names = instance_names(&[Suite::Prequantum], &ModelParams::default());
    let base: Vec<&String> = names.iter().filter(|n| !n.contains('@')).collect();
    assert!(!base.is_empty());
    for n in &base {
        assert!(names.contains(&format!("{n}@hbar0.7")), "{n}");
    }
    // nothing to repeat when the run is already at the second value
    let alt = ModelParams::new(gqweyl_core::Helicity::Negative, 0.7).unwrap();
    assert_eq!(instance_names(&[Suite::Prequantum], &alt).len(), base.len());
}
