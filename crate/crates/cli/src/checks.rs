//! The check registry and the orchestrator that runs it.

use std::time::Instant;

use gqweyl_core::lightcone::QuadratureSpec;
use gqweyl_core::poincare::PoincareElement;
use gqweyl_core::rng::stream;
use gqweyl_core::{GqError, ModelParams};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Suite, SuiteConfig};
use crate::report::Report;
use crate::HarnessError;

/// The second reduced Planck constant every prequantum check is repeated at.
pub const ALT_HBAR: f64 = 0.7;
const ALT_SUFFIX: &str = "@hbar0.7";

/// What a check sees: its own labeled random streams and the model.
#[derive(Debug, Clone)]
pub struct Ctx {
    pub name: String,
    pub seed: u64,
    pub samples: usize,
    pub params: ModelParams,
    pub quadrature: QuadratureSpec,
    pub elements: Vec<PoincareElement>,
}

impl Ctx {
    /// Stream `index` of sub-stream `label`, keyed by seed and check name.
    pub fn rng(&self, label: &str, index: usize) -> ChaCha8Rng {
        stream(self.seed, &format!("{}/{label}", self.name), index as u64)
    }

    pub fn sub_seed(&self, label: &str) -> u64 {
        gqweyl_core::rng::label_hash(&format!("{}/{label}", self.name)) ^ self.seed
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome {
    pub max_err: f64,
    pub samples: usize,
}

impl Outcome {
    pub fn new(max_err: f64, samples: usize) -> Self {
        Outcome { max_err, samples }
    }
}

pub type CheckFn = fn(&Ctx) -> Result<Outcome, GqError>;

#[derive(Clone, Copy)]
pub struct CheckDef {
    pub name: &'static str,
    pub suite: Suite,
    /// Phrase of the source text the check verifies.
    pub anchor: &'static str,
    pub tolerance: f64,
    pub samples: usize,
    /// Whether `--samples` rescales this check.
    pub scalable: bool,
    pub run: CheckFn,
}

impl std::fmt::Debug for CheckDef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CheckDef").field("name", &self.name).field("anchor", &self.anchor).finish()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub anchor: String,
    pub samples: usize,
    /// `null` in JSON when the check could not produce a finite number
    pub max_abs_error: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub elapsed_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Every check, in report order.
pub fn registry() -> Vec<CheckDef> {
    let mut all = Vec::new();
    all.extend(crate::suites::clifford::checks());
    all.extend(crate::suites::spin::checks());
    all.extend(crate::suites::covering::checks());
    all.extend(crate::suites::symplectic::checks());
    all.extend(crate::suites::prequantum::checks());
    all.extend(crate::suites::polarization::checks());
    all.extend(crate::suites::weyl::checks());
    all.extend(crate::suites::poincare::checks());
    all
}

struct Instance {
    def: CheckDef,
    name: String,
    params: ModelParams,
}

fn instances(suites: &[Suite], params: &ModelParams) -> Vec<Instance> {
    let mut out = Vec::new();
    let repeat = params.hbar != ALT_HBAR;
    for def in registry().into_iter().filter(|d| suites.contains(&d.suite)) {
        out.push(Instance { def, name: def.name.to_string(), params: *params });
        if def.suite == Suite::Prequantum && repeat {
            let alt = ModelParams { hbar: ALT_HBAR, ..*params };
            out.push(Instance { def, name: format!("{}{ALT_SUFFIX}", def.name), params: alt });
        }
    }
    // repeated instances follow the whole first pass of their suite
    out.sort_by_key(|i| (i.def.suite, i.name.ends_with(ALT_SUFFIX)));
    out
}

/// Names of the check instances the given suites would run.
pub fn instance_names(suites: &[Suite], params: &ModelParams) -> Vec<String> {
    instances(suites, params).into_iter().map(|i| i.name).collect()
}

fn run_one(inst: &Instance, cfg: &SuiteConfig) -> CheckResult {
    let def = &inst.def;
    let samples = match cfg.samples {
        Some(n) if def.scalable => n,
        _ => def.samples,
    };
    let ctx = Ctx {
        name: inst.name.clone(),
        seed: cfg.seed,
        samples,
        params: inst.params,
        quadrature: cfg.quadrature,
        elements: cfg.elements.clone(),
    };
    let tolerance = cfg
        .tolerances
        .get(&inst.name)
        .or_else(|| cfg.tolerances.get(def.name))
        .copied()
        .unwrap_or(def.tolerance);
    let start = Instant::now();
    let outcome = (def.run)(&ctx);
    let elapsed_ms = if cfg.timestamps { start.elapsed().as_millis() as u64 } else { 0 };
    let (max_abs_error, samples, error) = match outcome {
        Ok(o) => (o.max_err, o.samples, None),
        Err(e) => (f64::NAN, samples, Some(e.to_string())),
    };
    CheckResult {
        name: inst.name.clone(),
        anchor: def.anchor.to_string(),
        samples,
        max_abs_error,
        tolerance,
        // NaN compares false, so a failed evaluation never passes
        pass: max_abs_error <= tolerance,
        elapsed_ms,
        error,
    }
}

/// Runs the selected suites. Results come back in registry order whatever
/// the thread count, and every number depends only on the configuration.
pub fn run_suites(cfg: &SuiteConfig) -> Result<Report, HarnessError> {
    let start = Instant::now();
    let list = instances(&cfg.suites, &cfg.params);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?;
    let results: Vec<CheckResult> = pool.install(|| list.par_iter().map(|i| run_one(i, cfg)).collect());
    let wall_ms = if cfg.timestamps { start.elapsed().as_millis() as u64 } else { 0 };
    Ok(Report::new(cfg, results, wall_ms))
}
