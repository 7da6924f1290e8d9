//! Suite configuration: built-in defaults, an optional flat TOML file, and
//! command-line overrides, merged in that order of increasing precedence.
//!
//! File grammar (every key optional, no tables):
//!
//! ```toml
//! suite = ["spin", "weyl"]         # or "all"
//! seed = 7
//! samples = 200
//! tol = ["weyl.fd_convergence=0.2"]
//! chi = -1
//! hbar = 0.7
//! e_min = 0.5
//! e_max = 2.5
//! n_radial = 48
//! n_angular = 32
//! element = ["boost:axis=0/0/1,rapidity=0.4"]
//! report = "report.json"
//! threads = 4
//! no_timestamps = true
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use gqweyl_core::lightcone::QuadratureSpec;
use gqweyl_core::poincare::PoincareElement;
use gqweyl_core::{Helicity, ModelParams};
use serde::{Deserialize, Serialize};

use crate::element::parse_element;
use crate::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Clifford,
    Spin,
    Covering,
    Symplectic,
    Prequantum,
    Polarization,
    Weyl,
    Poincare,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Clifford,
        Suite::Spin,
        Suite::Covering,
        Suite::Symplectic,
        Suite::Prequantum,
        Suite::Polarization,
        Suite::Weyl,
        Suite::Poincare,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Clifford => "clifford",
            Suite::Spin => "spin",
            Suite::Covering => "covering",
            Suite::Symplectic => "symplectic",
            Suite::Prequantum => "prequantum",
            Suite::Polarization => "polarization",
            Suite::Weyl => "weyl",
            Suite::Poincare => "poincare",
        }
    }

    /// Parses a suite name; `all` expands to every suite.
    pub fn parse(s: &str) -> Result<Vec<Suite>, HarnessError> {
        if s == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .map(|x| vec![x])
            .ok_or_else(|| {
                let known: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
                HarnessError::Config(format!("unknown suite '{s}' (known: {}, all)", known.join(", ")))
            })
    }
}

/// One configuration layer. Both the file and the command line produce one.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Layer {
    pub suite: Option<Vec<String>>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub tol: Option<Vec<String>>,
    pub chi: Option<i32>,
    pub hbar: Option<f64>,
    pub e_min: Option<f64>,
    pub e_max: Option<f64>,
    pub n_radial: Option<usize>,
    pub n_angular: Option<usize>,
    pub element: Option<Vec<String>>,
    pub report: Option<PathBuf>,
    pub threads: Option<usize>,
    pub no_timestamps: Option<bool>,
}

impl Layer {
    pub fn from_toml_str(text: &str, origin: &str) -> Result<Self, HarnessError> {
        toml::from_str(text).map_err(|e| HarnessError::Config(format!("{origin}: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_toml_str(&text, &path.display().to_string())
    }

    /// `self` wins wherever it sets a value; tolerance lists are merged by
    /// check name.
    fn over(self, base: Layer) -> Layer {
        let tol = match (base.tol, self.tol) {
            (Some(mut b), Some(s)) => {
                b.extend(s);
                Some(b)
            }
            (b, s) => s.or(b),
        };
        Layer {
            suite: self.suite.or(base.suite),
            seed: self.seed.or(base.seed),
            samples: self.samples.or(base.samples),
            tol,
            chi: self.chi.or(base.chi),
            hbar: self.hbar.or(base.hbar),
            e_min: self.e_min.or(base.e_min),
            e_max: self.e_max.or(base.e_max),
            n_radial: self.n_radial.or(base.n_radial),
            n_angular: self.n_angular.or(base.n_angular),
            element: self.element.or(base.element),
            report: self.report.or(base.report),
            threads: self.threads.or(base.threads),
            no_timestamps: self.no_timestamps.or(base.no_timestamps),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    /// Canonical order, no duplicates.
    pub suites: Vec<Suite>,
    pub seed: u64,
    /// Overrides the per-check default sample count of scalable checks.
    pub samples: Option<usize>,
    pub tolerances: BTreeMap<String, f64>,
    pub params: ModelParams,
    pub quadrature: QuadratureSpec,
    /// Element specifications as given, echoed in the report.
    pub element_specs: Vec<String>,
    pub elements: Vec<PoincareElement>,
    pub report: Option<PathBuf>,
    /// Worker threads; 0 lets the pool decide.
    pub threads: usize,
    pub timestamps: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suites: Suite::ALL.to_vec(),
            seed: 1,
            samples: None,
            tolerances: BTreeMap::new(),
            params: ModelParams::default(),
            quadrature: QuadratureSpec::default(),
            element_specs: Vec::new(),
            elements: Vec::new(),
            report: None,
            threads: 0,
            timestamps: true,
        }
    }
}

pub fn parse_tolerance(s: &str) -> Result<(String, f64), HarnessError> {
    let (name, value) = s
        .rsplit_once('=')
        .ok_or_else(|| HarnessError::Config(format!("tolerance '{s}' is not of the form name=value")))?;
    let v: f64 = value
        .trim()
        .parse()
        .map_err(|_| HarnessError::Config(format!("tolerance '{s}': '{value}' is not a number")))?;
    if !(v >= 0.0 && v.is_finite()) {
        return Err(HarnessError::Config(format!("tolerance '{s}' must be finite and non-negative")));
    }
    Ok((name.trim().to_string(), v))
}

impl SuiteConfig {
    /// Merges `cli` over `file` over the defaults and validates the result.
    pub fn resolve(file: Option<Layer>, cli: Layer) -> Result<Self, HarnessError> {
        let layer = match file {
            Some(f) => cli.over(f),
            None => cli,
        };
        let mut cfg = SuiteConfig::default();

        if let Some(names) = layer.suite.filter(|v| !v.is_empty()) {
            let mut suites = Vec::new();
            for n in &names {
                suites.extend(Suite::parse(n)?);
            }
            suites.sort();
            suites.dedup();
            cfg.suites = suites;
        }
        cfg.seed = layer.seed.unwrap_or(cfg.seed);
        if let Some(n) = layer.samples {
            if n == 0 {
                return Err(HarnessError::Config("samples must be at least 1".into()));
            }
            cfg.samples = Some(n);
        }

        let chi = match layer.chi {
            None => Helicity::Negative,
            Some(c) => Helicity::from_sign(c)
                .ok_or_else(|| HarnessError::Config(format!("chi must be -1 or +1, got {c}")))?,
        };
        let hbar = layer.hbar.unwrap_or(1.0);
        cfg.params = ModelParams::new(chi, hbar)
            .ok_or_else(|| HarnessError::Config(format!("hbar must be positive and finite, got {hbar}")))?;

        let q = &mut cfg.quadrature;
        q.e_min = layer.e_min.unwrap_or(q.e_min);
        q.e_max = layer.e_max.unwrap_or(q.e_max);
        q.n_radial = layer.n_radial.unwrap_or(q.n_radial);
        q.n_angular = layer.n_angular.unwrap_or(q.n_angular);
        q.validate()?;

        // tolerances may name checks outside the selected suites
        let all_known = crate::checks::instance_names(&Suite::ALL, &cfg.params);
        for t in layer.tol.unwrap_or_default() {
            let (name, v) = parse_tolerance(&t)?;
            if !all_known.contains(&name) {
                return Err(HarnessError::Config(format!("tolerance for unknown check '{name}'")));
            }
            cfg.tolerances.insert(name, v);
        }

        for spec in layer.element.unwrap_or_default() {
            cfg.elements.push(parse_element(&spec)?);
            cfg.element_specs.push(spec);
        }
        cfg.report = layer.report;
        cfg.threads = layer.threads.unwrap_or(0);
        cfg.timestamps = !layer.no_timestamps.unwrap_or(false);
        Ok(cfg)
    }
}
