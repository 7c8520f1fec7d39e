//! Run configuration: JSON parsing, validation and defaults.

use mps_core::{Dimension, Error as CoreError, Scatterer, Site};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{Map, Value};

pub const DEFAULT_NODES: usize = 64;
pub const DEFAULT_WAVES: usize = 16;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_ENERGY: f64 = 1.0;

const KNOWN_FIELDS: &[&str] = &[
    "dimension",
    "scatterers",
    "energy",
    "nodes",
    "waves",
    "tol",
    "seed",
];

/// Invalid configuration, located by a JSON pointer.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{pointer}: {message}")]
pub struct ConfigError {
    pub pointer: String,
    pub message: String,
}

fn err(pointer: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError {
        pointer: pointer.into(),
        message: message.into(),
    }
}

/// One site as written in the config file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SiteSpec {
    pub position: Vec<f64>,
    /// `None` encodes the inert strength `"inf"`.
    #[serde(serialize_with = "alpha_out")]
    pub alpha: Option<f64>,
}

fn alpha_out<S: serde::Serializer>(alpha: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match alpha {
        Some(a) => s.serialize_f64(*a),
        None => s.serialize_str("inf"),
    }
}

/// Validated configuration with every default filled in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub dimension: usize,
    pub scatterers: Vec<SiteSpec>,
    #[serde(serialize_with = "complex_out")]
    pub energy: Complex64,
    /// Requested node count `M` (d = 2) or its target (d = 3).
    pub nodes: usize,
    /// Plane-wave count `N` for the interior problem.
    pub waves: usize,
    pub tol: f64,
    pub seed: u64,
}

pub(crate) fn complex_out<S: serde::Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

impl RunConfig {
    pub fn dim(&self) -> Dimension {
        Dimension::new(self.dimension).expect("validated dimension")
    }

    pub fn scatterer(&self) -> Scatterer {
        build_scatterer(self.dim(), &self.scatterers).expect("validated scatterer")
    }
}

fn build_scatterer(d: Dimension, specs: &[SiteSpec]) -> Result<Scatterer, CoreError> {
    let sites = specs
        .iter()
        .map(|s| match s.alpha {
            Some(a) => Site::new(s.position.clone(), a),
            None => Site::inert(s.position.clone()),
        })
        .collect();
    Scatterer::new(d, sites)
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| err("", format!("invalid JSON: {e}")))?;
    let obj = root
        .as_object()
        .ok_or_else(|| err("", "expected a JSON object"))?;
    for key in obj.keys() {
        if !KNOWN_FIELDS.contains(&key.as_str()) {
            return Err(err(format!("/{key}"), "unknown field"));
        }
    }

    let dimension = obj
        .get("dimension")
        .ok_or_else(|| err("/dimension", "missing required field"))?
        .as_u64()
        .filter(|d| (1..=3).contains(d))
        .ok_or_else(|| err("/dimension", "expected 1, 2 or 3"))? as usize;
    let d = Dimension::new(dimension).map_err(|e| err("/dimension", e.to_string()))?;

    let raw_sites = obj
        .get("scatterers")
        .ok_or_else(|| err("/scatterers", "missing required field"))?
        .as_array()
        .ok_or_else(|| err("/scatterers", "expected an array"))?;
    if raw_sites.is_empty() {
        return Err(err("/scatterers", "at least one scatterer is required"));
    }
    let scatterers = raw_sites
        .iter()
        .enumerate()
        .map(|(i, v)| parse_site(i, v, dimension))
        .collect::<Result<Vec<_>, _>>()?;
    build_scatterer(d, &scatterers).map_err(|e| match e {
        CoreError::CoincidentSites { first, second, .. } => err(
            format!("/scatterers/{second}/position"),
            format!("scatterers {first} and {second} have the same position"),
        ),
        CoreError::NonFinite(i) => err(format!("/scatterers/{i}"), "non-finite value"),
        other => err("/scatterers", other.to_string()),
    })?;

    let energy = match obj.get("energy") {
        None => Complex64::new(DEFAULT_ENERGY, 0.0),
        Some(v) => parse_energy(v)?,
    };
    let nodes = positive_int(obj, "nodes", DEFAULT_NODES)?;
    let waves = positive_int(obj, "waves", DEFAULT_WAVES)?;
    let tol = match obj.get("tol") {
        None => DEFAULT_TOL,
        Some(v) => v
            .as_f64()
            .filter(|t| *t > 0.0 && *t < 1.0)
            .ok_or_else(|| err("/tol", "expected a number in (0, 1)"))?,
    };
    let seed = match obj.get("seed") {
        None => DEFAULT_SEED,
        Some(v) => v
            .as_u64()
            .ok_or_else(|| err("/seed", "expected a non-negative integer"))?,
    };
    Ok(RunConfig {
        dimension,
        scatterers,
        energy,
        nodes,
        waves,
        tol,
        seed,
    })
}

fn parse_site(i: usize, v: &Value, d: usize) -> Result<SiteSpec, ConfigError> {
    let at = |field: &str| format!("/scatterers/{i}/{field}");
    let obj = v
        .as_object()
        .ok_or_else(|| err(format!("/scatterers/{i}"), "expected an object"))?;
    for key in obj.keys() {
        if key != "position" && key != "alpha" {
            return Err(err(at(key), "unknown field"));
        }
    }
    let pos = obj
        .get("position")
        .ok_or_else(|| err(at("position"), "missing required field"))?
        .as_array()
        .ok_or_else(|| err(at("position"), "expected an array of numbers"))?;
    if pos.len() != d {
        return Err(err(
            at("position"),
            format!("expected {d} coordinates, got {}", pos.len()),
        ));
    }
    let position = pos
        .iter()
        .enumerate()
        .map(|(c, x)| {
            x.as_f64()
                .ok_or_else(|| err(format!("/scatterers/{i}/position/{c}"), "expected a number"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let alpha = match obj.get("alpha") {
        None => return Err(err(at("alpha"), "missing required field")),
        Some(Value::String(s)) if s == "inf" => None,
        Some(Value::Number(n)) => Some(
            n.as_f64()
                .ok_or_else(|| err(at("alpha"), "expected a number"))?,
        ),
        Some(_) => return Err(err(at("alpha"), "expected a number or \"inf\"")),
    };
    Ok(SiteSpec { position, alpha })
}

fn parse_energy(v: &Value) -> Result<Complex64, ConfigError> {
    match v {
        Value::Number(n) => Ok(Complex64::new(n.as_f64().unwrap_or(f64::NAN), 0.0)),
        Value::Object(o) => {
            for key in o.keys() {
                if key != "re" && key != "im" {
                    return Err(err(format!("/energy/{key}"), "unknown field"));
                }
            }
            let part = |key: &str| match o.get(key) {
                None => Ok(0.0),
                Some(x) => x
                    .as_f64()
                    .ok_or_else(|| err(format!("/energy/{key}"), "expected a number")),
            };
            Ok(Complex64::new(part("re")?, part("im")?))
        }
        _ => Err(err(
            "/energy",
            "expected a number or {\"re\": .., \"im\": ..}",
        )),
    }
}

fn positive_int(obj: &Map<String, Value>, key: &str, default: usize) -> Result<usize, ConfigError> {
    match obj.get(key) {
        None => Ok(default),
        Some(v) => v
            .as_u64()
            .filter(|n| *n >= 1)
            .map(|n| n as usize)
            .ok_or_else(|| err(format!("/{key}"), "expected a positive integer")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_line_config() {
        let c = parse_config(r#"{"dimension":1,"scatterers":[{"position":[0.0],"alpha":1.0}]}"#)
            .unwrap();
        assert_eq!(c.dimension, 1);
        assert_eq!(c.scatterers[0].alpha, Some(1.0));
        assert_eq!((c.nodes, c.waves, c.tol, c.seed), (64, 16, 1e-10, 42));
        assert_eq!(c.energy, Complex64::new(1.0, 0.0));
        assert_eq!(c.scatterer().n_active(), 1);
    }

    #[test]
    fn inert_alpha() {
        let c = parse_config(r#"{"dimension":2,"scatterers":[{"position":[0,1],"alpha":"inf"}]}"#)
            .unwrap();
        assert_eq!(c.scatterers[0].alpha, None);
        assert_eq!(c.scatterer().n_active(), 0);
        let echo = serde_json::to_value(&c).unwrap();
        assert_eq!(echo["scatterers"][0]["alpha"], "inf");
    }

    #[test]
    fn duplicate_positions_name_both_indices() {
        let e = parse_config(
            r#"{"dimension":2,"scatterers":[{"position":[1,2],"alpha":1},{"position":[1,2],"alpha":3}]}"#,
        )
        .unwrap_err();
        assert_eq!(e.pointer, "/scatterers/1/position");
        assert!(e.message.contains('0') && e.message.contains('1'), "{e}");
    }

    #[test]
    fn pointers_locate_the_offending_field() {
        let cases = [
            (r#"{"scatterers":[]}"#, "/dimension"),
            (r#"{"dimension":4,"scatterers":[]}"#, "/dimension"),
            (r#"{"dimension":1}"#, "/scatterers"),
            (r#"{"dimension":1,"scatterers":[]}"#, "/scatterers"),
            (
                r#"{"dimension":1,"scatterers":[{"position":[0,1],"alpha":1}]}"#,
                "/scatterers/0/position",
            ),
            (
                r#"{"dimension":1,"scatterers":[{"position":["a"],"alpha":1}]}"#,
                "/scatterers/0/position/0",
            ),
            (
                r#"{"dimension":1,"scatterers":[{"position":[0],"alpha":"big"}]}"#,
                "/scatterers/0/alpha",
            ),
            (
                r#"{"dimension":1,"scatterers":[{"position":[0]}]}"#,
                "/scatterers/0/alpha",
            ),
            (
                r#"{"dimension":1,"scatterers":[{"position":[0],"alpha":1}],"nodes":0}"#,
                "/nodes",
            ),
            (
                r#"{"dimension":1,"scatterers":[{"position":[0],"alpha":1}],"tol":2}"#,
                "/tol",
            ),
            (
                r#"{"dimension":1,"scatterers":[{"position":[0],"alpha":1}],"energy":{"re":"x"}}"#,
                "/energy/re",
            ),
            (
                r#"{"dimension":1,"scatterers":[{"position":[0],"alpha":1}],"colour":1}"#,
                "/colour",
            ),
            ("[1,2]", ""),
            ("{", ""),
        ];
        for (text, pointer) in cases {
            let e = parse_config(text).unwrap_err();
            assert_eq!(e.pointer, pointer, "{text}: {e}");
        }
    }

    #[test]
    fn complex_energy() {
        let c = parse_config(
            r#"{"dimension":3,"scatterers":[{"position":[0,0,0],"alpha":1}],"energy":{"re":1,"im":0.5}}"#,
        )
        .unwrap();
        assert_eq!(c.energy, Complex64::new(1.0, 0.5));
        let c = parse_config(
            r#"{"dimension":3,"scatterers":[{"position":[0,0,0],"alpha":1}],"energy":-2}"#,
        )
        .unwrap();
        assert_eq!(c.energy, Complex64::new(-2.0, 0.0));
    }
}
