//! JSON report. Field order is fixed by the struct declarations, so two
//! reports of the same configuration diff cleanly.

use std::collections::BTreeMap;
use std::path::Path;

use gqweyl_core::lightcone::Scheme;
use serde::Serialize;

use crate::checks::CheckResult;
use crate::config::SuiteConfig;
use crate::HarnessError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureEcho {
    pub e_min: f64,
    pub e_max: f64,
    pub n_radial: usize,
    pub n_angular: usize,
    pub scheme: &'static str,
    pub nodes: usize,
}

impl QuadratureEcho {
    pub fn of(q: &gqweyl_core::lightcone::QuadratureSpec) -> Self {
        QuadratureEcho {
            e_min: q.e_min,
            e_max: q.e_max,
            n_radial: q.n_radial,
            n_angular: q.n_angular,
            scheme: match q.scheme {
                Scheme::ProductGauss => "product-gauss",
                Scheme::MonteCarlo => "monte-carlo",
            },
            nodes: q.node_count(),
        }
    }
}

/// The configuration as it affects the numbers. The thread count is left
/// out on purpose: it must not change any result.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub suites: Vec<&'static str>,
    pub seed: u64,
    pub samples: Option<usize>,
    pub tolerances: BTreeMap<String, f64>,
    pub chi: i32,
    pub hbar: f64,
    pub quadrature: QuadratureEcho,
    pub elements: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub wall_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub version: &'static str,
    pub config: ConfigEcho,
    pub results: Vec<CheckResult>,
    pub summary: Summary,
}

impl Report {
    pub fn new(cfg: &SuiteConfig, results: Vec<CheckResult>, wall_ms: u64) -> Self {
        let passed = results.iter().filter(|r| r.pass).count();
        Report {
            version: env!("CARGO_PKG_VERSION"),
            config: ConfigEcho {
                suites: cfg.suites.iter().map(|s| s.name()).collect(),
                seed: cfg.seed,
                samples: cfg.samples,
                tolerances: cfg.tolerances.clone(),
                chi: cfg.params.chi.sign() as i32,
                hbar: cfg.params.hbar,
                quadrature: QuadratureEcho::of(&cfg.quadrature),
                elements: cfg.element_specs.clone(),
            },
            summary: Summary { passed, failed: results.len() - passed, wall_ms },
            results,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| !r.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &Path) -> Result<(), HarnessError> {
        std::fs::write(path, self.to_json()).map_err(|e| HarnessError::io(path, e))
    }

    /// One line per check for the terminal.
    pub fn table(&self) -> String {
        let width = self.results.iter().map(|r| r.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        for r in &self.results {
            let mark = if r.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{mark}  {:<width$}  err {:>10.3e}  tol {:>9.1e}  n {:>5}  {:>6} ms",
                r.name, r.max_abs_error, r.tolerance, r.samples, r.elapsed_ms
            ));
            if let Some(e) = &r.error {
                out.push_str(&format!("  ({e})"));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "{} passed, {} failed, {} ms\n",
            self.summary.passed, self.summary.failed, self.summary.wall_ms
        ));
        out
    }
}
