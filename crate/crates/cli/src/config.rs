//! Flat `section.key=value` run configuration.

use crate::CliError;
use radial_integrator::io::fmt_f64;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Int,
    Float,
    Bool,
    Text,
}

/// Every key the driver understands.
pub const KEYS: &[(&str, Kind)] = &[
    ("params.n", Kind::Int),
    ("params.s", Kind::Float),
    ("params.mu", Kind::Float),
    ("params.q", Kind::Float),
    ("params.R", Kind::Float),
    ("bubble.eta", Kind::Float),
    ("bubble.rmin", Kind::Float),
    ("bubble.rmax", Kind::Float),
    ("bubble.per_decade", Kind::Int),
    ("shoot.gamma", Kind::Float),
    ("shoot.rmax", Kind::Float),
    ("shoot.rtol", Kind::Float),
    ("shoot.atol", Kind::Float),
    ("orbit.sigma", Kind::Float),
    ("cgs.sigma", Kind::Float),
    ("cgs.tau_angle", Kind::Float),
    ("cgs.horizon", Kind::Float),
    ("cgs.h", Kind::Float),
    ("cgs.tol", Kind::Float),
    ("nd.y20", Kind::Float),
    ("nd.z30", Kind::Float),
    ("nd.z30_sweep", Kind::Int),
    ("nd.decades", Kind::Float),
    ("nd.ny", Kind::Int),
    ("nd.nz", Kind::Int),
    ("nd.tol", Kind::Float),
    ("mb.Lambda", Kind::Float),
    ("mb.gamma_start", Kind::Float),
    ("mb.gamma_ratio", Kind::Float),
    ("mb.gamma_end", Kind::Float),
    ("mb.r_min", Kind::Float),
    ("mb.ell", Kind::Float),
    ("mb.save_members", Kind::Bool),
    ("pohozaev.input", Kind::Text),
    ("pohozaev.chart", Kind::Text),
    ("pohozaev.gamma", Kind::Float),
    ("pohozaev.rmax", Kind::Float),
    ("pohozaev.per_decade", Kind::Int),
    ("classify.input", Kind::Text),
    ("classify.chart", Kind::Text),
    ("output.dir", Kind::Text),
    ("output.csv", Kind::Bool),
    ("output.json", Kind::Bool),
    ("output.precision", Kind::Int),
];

pub fn kind_of(key: &str) -> Option<Kind> {
    KEYS.iter().find(|(k, _)| *k == key).map(|(_, t)| *t)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(u64),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Float(v) => f.write_str(&fmt_f64(*v)),
            Value::Bool(v) => write!(f, "{v}"),
            Value::Text(v) => f.write_str(v),
        }
    }
}

impl Value {
    fn parse(key: &str, kind: Kind, raw: &str) -> Result<Value, CliError> {
        let bad = |what: &str| CliError::Validation(format!("{key}: `{raw}` is not {what}"));
        Ok(match kind {
            Kind::Int => Value::Int(raw.parse().map_err(|_| bad("a non-negative integer"))?),
            Kind::Float => {
                let v: f64 = raw.parse().map_err(|_| bad("a number"))?;
                if !v.is_finite() {
                    return Err(bad("a finite number"));
                }
                Value::Float(v)
            }
            Kind::Bool => Value::Bool(raw.parse().map_err(|_| bad("true or false"))?),
            Kind::Text => {
                if raw.is_empty() || raw.contains('\n') {
                    return Err(bad("a single-line string"));
                }
                Value::Text(raw.to_string())
            }
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Int(v) => (*v).into(),
            Value::Float(v) => (*v).into(),
            Value::Bool(v) => (*v).into(),
            Value::Text(v) => v.clone().into(),
        }
    }
}

/// Validated configuration; keys are unique and known.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    values: BTreeMap<String, Value>,
}

impl RunConfig {
    /// Parses `key=value` lines. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Validation(format!("line {}: expected key=value", i + 1)))?;
            let k = k.trim();
            if cfg.values.contains_key(k) {
                return Err(CliError::Validation(format!("line {}: duplicate key `{k}`", i + 1)));
            }
            cfg.set(k, v.trim())?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, raw: &str) -> Result<(), CliError> {
        let kind = kind_of(key).ok_or_else(|| CliError::Validation(format!("unknown key `{key}`")))?;
        self.values.insert(key.to_string(), Value::parse(key, kind, raw)?);
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.values.get(key)
    }

    pub fn f64(&self, key: &str) -> Option<f64> {
        match self.values.get(key) {
            Some(Value::Float(v)) => Some(*v),
            Some(Value::Int(v)) => Some(*v as f64),
            _ => None,
        }
    }

    pub fn f64_or(&self, key: &str, default: f64) -> f64 {
        self.f64(key).unwrap_or(default)
    }

    pub fn int(&self, key: &str) -> Option<u64> {
        match self.values.get(key) {
            Some(Value::Int(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn bool_or(&self, key: &str, default: bool) -> bool {
        match self.values.get(key) {
            Some(Value::Bool(v)) => *v,
            _ => default,
        }
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        match self.values.get(key) {
            Some(Value::Text(v)) => Some(v),
            _ => None,
        }
    }

    pub fn require_f64(&self, key: &str) -> Result<f64, CliError> {
        self.f64(key).ok_or_else(|| CliError::Validation(format!("missing `{key}`")))
    }

    pub fn require_text(&self, key: &str) -> Result<&str, CliError> {
        self.text(key).ok_or_else(|| CliError::Validation(format!("missing `{key}`")))
    }

    pub fn to_text(&self) -> String {
        self.values.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Object(self.values.iter().map(|(k, v)| (k.clone(), v.to_json())).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}
