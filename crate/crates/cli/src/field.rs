//! Export of a transformed field on a spacetime lattice as CSV, with a JSON
//! metadata file next to it.

use std::path::{Path, PathBuf};

use gqweyl_core::lightcone::{lattice, QuadratureSpec, SpacetimeField, TransformedField};
use gqweyl_core::poincare::{act_spacetime, PoincareElement};
use gqweyl_core::polarization::{PolarizedMomentum, Profile};
use gqweyl_core::{DiracSpinor, Helicity, MinkowskiVector, ModelParams};
use rayon::prelude::*;
use serde::Serialize;

use crate::element::{parse_element, parse_keyed};
use crate::report::QuadratureEcho;
use crate::HarnessError;

pub const CSV_HEADER: [&str; 12] =
    ["r1", "r2", "r3", "t", "re1", "im1", "re2", "im2", "re3", "im3", "re4", "im4"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub counts: [usize; 4],
    pub step: f64,
}

impl Default for Grid {
    fn default() -> Self {
        Grid { counts: [5; 4], step: 0.5 }
    }
}

impl Grid {
    /// `AxBxCxD:step`
    pub fn parse(s: &str) -> Result<Self, HarnessError> {
        let bad = |why: &str| HarnessError::Config(format!("grid '{s}': {why} (expected AxBxCxD:step)"));
        let (dims, step) = s.split_once(':').ok_or_else(|| bad("missing ':step'"))?;
        let parts: Vec<&str> = dims.split('x').collect();
        if parts.len() != 4 {
            return Err(bad("need four counts"));
        }
        let mut counts = [0; 4];
        for (c, p) in counts.iter_mut().zip(parts) {
            *c = p.trim().parse().ok().filter(|&n: &usize| n > 0).ok_or_else(|| bad("counts must be positive integers"))?;
        }
        let step: f64 = step.trim().parse().ok().filter(|x: &f64| *x > 0.0 && x.is_finite()).ok_or_else(|| bad("step must be positive"))?;
        Ok(Grid { counts, step })
    }

    pub fn points(&self) -> Vec<MinkowskiVector> {
        lattice(self.counts, self.step)
    }
}

fn param(spec: &str, map: &std::collections::BTreeMap<String, String>, key: &str, default: f64) -> Result<f64, HarnessError> {
    match map.get(key) {
        None => Ok(default),
        Some(v) => v
            .parse()
            .map_err(|_| HarnessError::Config(format!("profile '{spec}': '{key}={v}' is not a number"))),
    }
}

/// `bump:a=..,b=..`, `gaussian:center=..,width=..,a=..,b=..`,
/// `shell:energy=..,width=..` or `zero`.
pub fn parse_profile(spec: &str) -> Result<Profile, HarnessError> {
    let (name, map) = parse_keyed(spec)?;
    let allowed: &[&str] = match name.as_str() {
        "bump" => &["a", "b"],
        "gaussian" => &["center", "width", "a", "b"],
        "shell" => &["energy", "width"],
        "zero" => &[],
        other => {
            return Err(HarnessError::Config(format!(
                "unknown profile '{other}' (bump, gaussian, shell, zero)"
            )))
        }
    };
    if let Some(k) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(HarnessError::Config(format!("profile '{spec}': unknown parameter '{k}'")));
    }
    let p = |k, d| param(spec, &map, k, d);
    let profile = match name.as_str() {
        "bump" => Profile::Bump { a: p("a", 0.5)?, b: p("b", 2.5)? },
        "gaussian" => Profile::GaussianTruncated {
            center: p("center", 1.5)?,
            width: p("width", 0.4)?,
            a: p("a", 0.5)?,
            b: p("b", 2.5)?,
        },
        "shell" => Profile::SingleShell { energy: p("energy", 1.5)?, width: p("width", 0.25)? },
        _ => Profile::Zero,
    };
    profile.validate().map_err(|e| HarnessError::Config(format!("profile '{spec}': {e}")))?;
    Ok(profile)
}

#[derive(Debug, Clone)]
pub struct FieldConfig {
    pub profile_spec: String,
    pub profile: Profile,
    pub params: ModelParams,
    pub grid: Grid,
    /// Energy window; `None` means the profile support.
    pub window: Option<(f64, f64)>,
    pub n_radial: usize,
    pub n_angular: usize,
    pub seed: u64,
    pub element_spec: Option<String>,
    pub out: PathBuf,
    pub meta: Option<PathBuf>,
}

impl FieldConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        profile_spec: &str,
        chi: i32,
        hbar: f64,
        grid: Option<&str>,
        window: Option<(f64, f64)>,
        nodes: (Option<usize>, Option<usize>),
        seed: u64,
        element_spec: Option<String>,
        out: PathBuf,
        meta: Option<PathBuf>,
    ) -> Result<Self, HarnessError> {
        let chi = Helicity::from_sign(chi).ok_or_else(|| HarnessError::Config(format!("chi must be -1 or +1, got {chi}")))?;
        let params = ModelParams::new(chi, hbar)
            .ok_or_else(|| HarnessError::Config(format!("hbar must be positive and finite, got {hbar}")))?;
        let defaults = QuadratureSpec::default();
        let cfg = FieldConfig {
            profile_spec: profile_spec.to_string(),
            profile: parse_profile(profile_spec)?,
            params,
            grid: grid.map(Grid::parse).transpose()?.unwrap_or_default(),
            window,
            n_radial: nodes.0.unwrap_or(defaults.n_radial),
            n_angular: nodes.1.unwrap_or(defaults.n_angular),
            seed,
            element_spec,
            out,
            meta,
        };
        cfg.quadrature().validate()?;
        if let Some(e) = &cfg.element_spec {
            parse_element(e)?;
        }
        Ok(cfg)
    }

    pub fn quadrature(&self) -> QuadratureSpec {
        let d = QuadratureSpec::default();
        let (e_min, e_max) = self.window.or(self.profile.support()).unwrap_or((d.e_min, d.e_max));
        QuadratureSpec { e_min, e_max, n_radial: self.n_radial, n_angular: self.n_angular, seed: self.seed, ..d }
    }

    pub fn meta_path(&self) -> PathBuf {
        self.meta.clone().unwrap_or_else(|| {
            if self.out.extension().is_some_and(|e| e == "json") {
                self.out.with_extension("meta.json")
            } else {
                self.out.with_extension("json")
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridEcho {
    pub counts: [usize; 4],
    pub step: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldMetadata {
    pub version: &'static str,
    pub profile: String,
    pub chi: i32,
    pub hbar: f64,
    pub seed: u64,
    pub quadrature: QuadratureEcho,
    pub active_nodes: usize,
    pub grid: GridEcho,
    pub element: Option<String>,
    pub columns: Vec<&'static str>,
    pub csv: String,
    pub warnings: Vec<String>,
}

/// The field the configuration describes, before any group action.
pub fn build_field(cfg: &FieldConfig) -> Result<TransformedField, HarnessError> {
    let psi = PolarizedMomentum::new(cfg.profile, cfg.params.chi);
    Ok(TransformedField::from_spec(&psi, &cfg.quadrature(), &cfg.params)?)
}

/// Values on the grid, in lattice order.
pub fn field_values(cfg: &FieldConfig) -> Result<(Vec<MinkowskiVector>, Vec<DiracSpinor>, FieldMetadata), HarnessError> {
    let field = build_field(cfg)?;
    let points = cfg.grid.points();
    let values: Vec<DiracSpinor> = match &cfg.element_spec {
        Some(e) => {
            let g: PoincareElement = parse_element(e)?;
            let acted = act_spacetime(&g, &field);
            points.par_iter().map(|r| acted.eval(r)).collect()
        }
        None => points.par_iter().map(|r| field.eval(r)).collect(),
    };
    let meta = FieldMetadata {
        version: env!("CARGO_PKG_VERSION"),
        profile: cfg.profile_spec.clone(),
        chi: cfg.params.chi.sign() as i32,
        hbar: cfg.params.hbar,
        seed: cfg.seed,
        quadrature: QuadratureEcho::of(&cfg.quadrature()),
        active_nodes: field.active_nodes(),
        grid: GridEcho { counts: cfg.grid.counts, step: cfg.grid.step, points: points.len() },
        element: cfg.element_spec.clone(),
        columns: CSV_HEADER.to_vec(),
        csv: cfg.out.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default(),
        warnings: field.warnings().to_vec(),
    };
    Ok((points, values, meta))
}

fn write_csv(path: &Path, points: &[MinkowskiVector], values: &[DiracSpinor]) -> Result<(), HarnessError> {
    let io = |e: csv::Error| HarnessError::Config(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(CSV_HEADER).map_err(io)?;
    for (r, v) in points.iter().zip(values) {
        let mut row: Vec<String> = r.as_array().iter().map(|x| x.to_string()).collect();
        for c in v.0.iter() {
            row.push(c.re.to_string());
            row.push(c.im.to_string());
        }
        w.write_record(&row).map_err(io)?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}

/// Writes the CSV and the metadata; returns the metadata.
pub fn emit_field(cfg: &FieldConfig) -> Result<FieldMetadata, HarnessError> {
    let (points, values, meta) = field_values(cfg)?;
    write_csv(&cfg.out, &points, &values)?;
    let meta_path = cfg.meta_path();
    let mut text = serde_json::to_string_pretty(&meta).expect("metadata serializes");
    text.push('\n');
    std::fs::write(&meta_path, text).map_err(|e| HarnessError::io(&meta_path, e))?;
    Ok(meta)
}

/// Reads a field CSV back as `(point, spinor)` rows.
pub fn read_field_csv(path: &Path) -> Result<Vec<(MinkowskiVector, DiracSpinor)>, HarnessError> {
    let err = |e: String| HarnessError::Config(format!("{}: {e}", path.display()));
    let mut r = csv::Reader::from_path(path).map_err(|e| err(e.to_string()))?;
    let header: Vec<String> = r.headers().map_err(|e| err(e.to_string()))?.iter().map(String::from).collect();
    if header != CSV_HEADER {
        return Err(err(format!("unexpected header {header:?}")));
    }
    let mut out = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| err(e.to_string()))?;
        let x: Vec<f64> = rec
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| err(format!("row {}: {e}", line + 2)))?;
        if x.len() != 12 {
            return Err(err(format!("row {}: expected 12 columns", line + 2)));
        }
        let point = MinkowskiVector::new(x[0], x[1], x[2], x[3]);
        let spinor = DiracSpinor(nalgebra::Vector4::from_fn(|k, _| gqweyl_core::C64::new(x[4 + 2 * k], x[5 + 2 * k])));
        out.push((point, spinor));
    }
    Ok(out)
}

/// Field values read back from a file, looked up by exact coordinates.
/// Evaluating off the stored points is a bug in the caller and panics.
pub struct SampledField {
    chi: Helicity,
    values: std::collections::HashMap<[u64; 4], DiracSpinor>,
}

impl SampledField {
    pub fn new(chi: Helicity, rows: &[(MinkowskiVector, DiracSpinor)]) -> Self {
        SampledField { chi, values: rows.iter().map(|(r, v)| (Self::key(r), *v)).collect() }
    }

    fn key(r: &MinkowskiVector) -> [u64; 4] {
        // +0.0 and -0.0 name the same lattice point
        r.as_array().map(|x| (x + 0.0).to_bits())
    }
}

impl SpacetimeField for SampledField {
    fn chi(&self) -> Helicity {
        self.chi
    }

    fn eval(&self, r: &MinkowskiVector) -> DiracSpinor {
        *self.values.get(&Self::key(r)).unwrap_or_else(|| panic!("no stored value at {:?}", r.as_array()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_profiles_and_grids() {
        assert_eq!(parse_profile("bump:a=1,b=2").unwrap(), Profile::Bump { a: 1.0, b: 2.0 });
        assert_eq!(parse_profile("zero").unwrap(), Profile::Zero);
        assert!(matches!(parse_profile("shell:energy=1.2").unwrap(), Profile::SingleShell { energy, .. } if energy == 1.2));
        for bad in ["bump:a=2,b=1", "bump:c=1", "wave", "bump:a=x"] {
            assert!(parse_profile(bad).is_err(), "{bad}");
        }
        assert_eq!(Grid::parse("3x4x5x6:0.25").unwrap(), Grid { counts: [3, 4, 5, 6], step: 0.25 });
        for bad in ["3x4x5:0.1", "3x4x5x6", "3x4x0x6:0.1", "3x4x5x6:-1"] {
            assert!(Grid::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn window_follows_profile_support() {
        let cfg = FieldConfig::new("bump:a=1,b=2", -1, 1.0, None, None, (None, None), 0, None, "f.csv".into(), None).unwrap();
        let q = cfg.quadrature();
        assert_eq!((q.e_min, q.e_max), (1.0, 2.0));
        assert_eq!(cfg.meta_path(), PathBuf::from("f.json"));
    }
}
