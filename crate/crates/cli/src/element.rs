//! Textual Poincaré elements: `KIND:key=value,...` with vector components
//! separated by `/`.
//!
//! ```text
//! rotation:axis=0/0/1,angle=0.3
//! boost:axis=1/0/0,rapidity=0.8,shift=0/0/0/1
//! translation:c=1/0/0/0.5
//! sl2:a=1/0,b=0.5/0,c=0/0,d=1/0
//! ```

use std::collections::BTreeMap;

use gqweyl_core::clifford::ComplexMatrix2;
use gqweyl_core::poincare::PoincareElement;
use gqweyl_core::{MinkowskiVector, C64};

use crate::HarnessError;

fn bad(spec: &str, why: impl std::fmt::Display) -> HarnessError {
    HarnessError::Config(format!("element '{spec}': {why}"))
}

/// Splits `NAME:k=v,k=v` into the name and its parameters.
pub fn parse_keyed(spec: &str) -> Result<(String, BTreeMap<String, String>), HarnessError> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let mut map = BTreeMap::new();
    for part in rest.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| HarnessError::Config(format!("'{spec}': expected key=value, got '{part}'")))?;
        if map.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
            return Err(HarnessError::Config(format!("'{spec}': key '{}' repeated", k.trim())));
        }
    }
    Ok((name.trim().to_string(), map))
}

fn numbers<const N: usize>(spec: &str, key: &str, v: &str) -> Result<[f64; N], HarnessError> {
    let parts: Vec<&str> = v.split('/').collect();
    if parts.len() != N {
        return Err(bad(spec, format!("'{key}' needs {N} components separated by '/'")));
    }
    let mut out = [0.0; N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p
            .trim()
            .parse()
            .ok()
            .filter(|x: &f64| x.is_finite())
            .ok_or_else(|| bad(spec, format!("'{key}': '{p}' is not a finite number")))?;
    }
    Ok(out)
}

fn take<const N: usize>(spec: &str, map: &mut BTreeMap<String, String>, key: &str) -> Result<[f64; N], HarnessError> {
    let v = map.remove(key).ok_or_else(|| bad(spec, format!("missing '{key}'")))?;
    numbers(spec, key, &v)
}

pub fn parse_element(spec: &str) -> Result<PoincareElement, HarnessError> {
    let (kind, mut map) = parse_keyed(spec)?;
    let shift = match map.remove("shift") {
        Some(v) => {
            let c: [f64; 4] = numbers(spec, "shift", &v)?;
            MinkowskiVector::new(c[0], c[1], c[2], c[3])
        }
        None => MinkowskiVector::ZERO,
    };
    let g = match kind.as_str() {
        "rotation" => {
            let axis = take::<3>(spec, &mut map, "axis")?;
            let [angle] = take::<1>(spec, &mut map, "angle")?;
            PoincareElement::rotation(axis, angle).map_err(|e| bad(spec, e))?
        }
        "boost" => {
            let axis = take::<3>(spec, &mut map, "axis")?;
            let [rapidity] = take::<1>(spec, &mut map, "rapidity")?;
            PoincareElement::boost(axis, rapidity).map_err(|e| bad(spec, e))?
        }
        "translation" => {
            let c = take::<4>(spec, &mut map, "c")?;
            PoincareElement::translation(MinkowskiVector::new(c[0], c[1], c[2], c[3]))
        }
        "sl2" => {
            let mut e = [C64::new(0.0, 0.0); 4];
            for (slot, key) in e.iter_mut().zip(["a", "b", "c", "d"]) {
                let [re, im] = take::<2>(spec, &mut map, key)?;
                *slot = C64::new(re, im);
            }
            let m = ComplexMatrix2::new(e[0], e[1], e[2], e[3]);
            PoincareElement::from_sl2(&m, MinkowskiVector::ZERO).map_err(|e| bad(spec, e))?
        }
        other => return Err(bad(spec, format!("unknown kind '{other}' (rotation, boost, translation, sl2)"))),
    };
    if let Some(k) = map.keys().next() {
        return Err(bad(spec, format!("unexpected key '{k}'")));
    }
    let c = g.shift() + shift;
    Ok(g.with_shift(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_kind() {
        let r = parse_element("rotation:axis=0/0/1,angle=0.3").unwrap();
        let direct = PoincareElement::rotation([0.0, 0.0, 1.0], 0.3).unwrap();
        assert_eq!(r.max_abs_diff(&direct), 0.0);
        let b = parse_element("boost:axis=1/0/0,rapidity=0.8,shift=0/0/0/1").unwrap();
        assert_eq!(b.shift(), MinkowskiVector::new(0.0, 0.0, 0.0, 1.0));
        let t = parse_element("translation:c=1/2/3/4").unwrap();
        assert_eq!(t.shift(), MinkowskiVector::new(1.0, 2.0, 3.0, 4.0));
        let s = parse_element("sl2:a=1/0,b=0.5/0,c=0/0,d=1/0").unwrap();
        assert!(s.lorentz().metric_deviation() < 1e-12);
    }

    #[test]
    fn rejects_malformed() {
        for spec in [
            "spin:axis=0/0/1",
            "rotation:axis=0/0,angle=1",
            "rotation:angle=1",
            "boost:axis=0/0/1,rapidity=x",
            "translation:c=1/2/3/4,extra=1",
            "sl2:a=2/0,b=0/0,c=0/0,d=2/0",
            "rotation:axis=0/0/0,angle=1",
        ] {
            assert!(parse_element(spec).is_err(), "{spec}");
        }
    }
}
