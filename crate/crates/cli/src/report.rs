//! Report document and its JSON/CSV serialisation.

use mps_core::Error as CoreError;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;

pub const TOOL: &str = "mps";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `value ≤ tolerance`
    Le,
    /// `value ≥ tolerance`
    Ge,
}

/// One invariant check with the tolerance it was tested against.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub relation: Relation,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub fn le(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            value,
            relation: Relation::Le,
            tolerance,
            passed: value <= tolerance,
        }
    }

    pub fn ge(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            value,
            relation: Relation::Ge,
            tolerance,
            passed: value >= tolerance,
        }
    }
}

/// Output of one pipeline.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Section {
    pub command: String,
    pub results: Value,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Skipped {
    pub command: String,
    pub reason: String,
}

/// Numerical failure (resonance or singular system).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub command: String,
    pub kind: String,
    pub message: String,
    /// `|k|` at which the charge system broke down, when known.
    pub modulus: Option<f64>,
    pub condition: Option<f64>,
}

impl Failure {
    pub fn from_error(command: &str, e: &CoreError) -> Self {
        let (kind, modulus, condition) = match e {
            CoreError::Resonance { modulus, condition } => {
                ("resonance", Some(*modulus), Some(*condition))
            }
            CoreError::SingularMatrix { .. } => ("singular_matrix", None, None),
            _ => ("numerical", None, None),
        };
        Failure {
            command: command.into(),
            kind: kind.into(),
            message: e.to_string(),
            modulus,
            condition: condition.filter(|c| c.is_finite()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: RunConfig,
    pub sections: Vec<Section>,
    pub skipped: Vec<Skipped>,
    pub error: Option<Failure>,
    pub passed: bool,
}

impl Report {
    pub fn new(command: &str, config: RunConfig) -> Self {
        Report {
            tool: TOOL,
            version: VERSION,
            command: command.into(),
            config,
            sections: Vec::new(),
            skipped: Vec::new(),
            error: None,
            passed: true,
        }
    }

    pub fn push(&mut self, section: Section) {
        self.passed &= section.checks.iter().all(|c| c.passed);
        self.sections.push(section);
    }

    pub fn fail(&mut self, failure: Failure) {
        self.passed = false;
        self.error = Some(failure);
    }

    pub fn checks(&self) -> impl Iterator<Item = (&str, &Check)> {
        self.sections
            .iter()
            .flat_map(|s| s.checks.iter().map(move |c| (s.command.as_str(), c)))
    }

    /// 0 on success, 2 on numerical failure, 3 when a check failed.
    pub fn exit_code(&self) -> i32 {
        if self.error.is_some() {
            2
        } else if self.passed {
            0
        } else {
            3
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    /// Residual table: one row per check.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("command,check,value,relation,tolerance,passed\n");
        for (command, c) in self.checks() {
            let rel = match c.relation {
                Relation::Le => "le",
                Relation::Ge => "ge",
            };
            out.push_str(&format!(
                "{command},{},{:e},{rel},{:e},{}\n",
                c.name, c.value, c.tolerance, c.passed
            ));
        }
        out
    }
}

pub(crate) fn cjson(z: Complex64) -> Value {
    Value::from(vec![finite(z.re), finite(z.im)])
}

pub(crate) fn finite(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else {
        Value::Null
    }
}

pub(crate) fn cvec(v: &[Complex64]) -> Value {
    Value::from(v.iter().map(|&z| cjson(z)).collect::<Vec<_>>())
}

pub(crate) fn cmatrix(m: &mps_core::Matrix) -> Value {
    Value::from((0..m.rows()).map(|i| cvec(m.row(i))).collect::<Vec<_>>())
}
