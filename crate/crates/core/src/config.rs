use std::collections::BTreeMap;
use std::path::Path;

use crate::error::CoreError;

/// One value in a flat run configuration.
#[derive(Debug, Clone, PartialEq)]
pub enum ConfigValue {
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
}

impl ConfigValue {
    fn to_toml(&self) -> String {
        match self {
            ConfigValue::Bool(b) => b.to_string(),
            ConfigValue::Int(i) => i.to_string(),
            ConfigValue::Float(f) => {
                let s = format!("{f:?}");
                // `{:?}` prints a shortest round-trip literal; ensure it parses as a float.
                if s.contains(['.', 'e', 'E']) || s.contains("inf") || s.contains("NaN") {
                    s
                } else {
                    format!("{s}.0")
                }
            }
            ConfigValue::Str(s) => format!("{:?}", s),
        }
    }
}

/// Flat key-value run configuration. Keys are sorted, so serialization is
/// canonical and reruns with the same configuration hash identically.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    map: BTreeMap<String, ConfigValue>,
}

impl RunConfig {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_toml_str(text: &str) -> Result<Self, CoreError> {
        let table: toml::Table = text
            .parse()
            .map_err(|e| CoreError::Config(format!("TOML parse error: {e}")))?;
        let mut cfg = RunConfig::new();
        for (k, v) in table {
            let cv = match v {
                toml::Value::Boolean(b) => ConfigValue::Bool(b),
                toml::Value::Integer(i) => ConfigValue::Int(i),
                toml::Value::Float(f) => ConfigValue::Float(f),
                toml::Value::String(s) => ConfigValue::Str(s),
                other => {
                    return Err(CoreError::Config(format!(
                        "key {k}: unsupported value type {} (config is flat keys only)",
                        other.type_str()
                    )))
                }
            };
            cfg.map.insert(k, cv);
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, CoreError> {
        let text = std::fs::read_to_string(path).map_err(|e| CoreError::io(path, e))?;
        Self::from_toml_str(&text)
    }

    /// Canonical TOML serialization (keys sorted).
    pub fn to_toml_string(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.map {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v.to_toml());
            out.push('\n');
        }
        out
    }

    pub fn set(&mut self, key: &str, value: ConfigValue) {
        self.map.insert(key.to_string(), value);
    }

    pub fn set_f64(&mut self, key: &str, v: f64) {
        self.set(key, ConfigValue::Float(v));
    }

    pub fn set_i64(&mut self, key: &str, v: i64) {
        self.set(key, ConfigValue::Int(v));
    }

    pub fn set_str(&mut self, key: &str, v: &str) {
        self.set(key, ConfigValue::Str(v.to_string()));
    }

    pub fn set_bool(&mut self, key: &str, v: bool) {
        self.set(key, ConfigValue::Bool(v));
    }

    /// Parses `value` with the loosest type that fits (bool, int, float, string)
    /// and stores it; used for `--set key=value` overrides.
    pub fn set_parsed(&mut self, key: &str, value: &str) {
        if let Ok(b) = value.parse::<bool>() {
            self.set_bool(key, b);
        } else if let Ok(i) = value.parse::<i64>() {
            self.set_i64(key, i);
        } else if let Ok(f) = value.parse::<f64>() {
            self.set_f64(key, f);
        } else {
            self.set_str(key, value);
        }
    }

    pub fn contains(&self, key: &str) -> bool {
        self.map.contains_key(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.map.keys().map(|s| s.as_str())
    }

    pub fn get_str(&self, key: &str) -> Result<&str, CoreError> {
        match self.map.get(key) {
            Some(ConfigValue::Str(s)) => Ok(s),
            Some(_) => Err(CoreError::Config(format!("key {key} is not a string"))),
            None => Err(CoreError::Config(format!("missing key {key}"))),
        }
    }

    pub fn get_f64(&self, key: &str) -> Result<f64, CoreError> {
        match self.map.get(key) {
            Some(ConfigValue::Float(f)) => Ok(*f),
            Some(ConfigValue::Int(i)) => Ok(*i as f64),
            Some(_) => Err(CoreError::Config(format!("key {key} is not a number"))),
            None => Err(CoreError::Config(format!("missing key {key}"))),
        }
    }

    pub fn get_usize(&self, key: &str) -> Result<usize, CoreError> {
        match self.map.get(key) {
            Some(ConfigValue::Int(i)) if *i >= 0 => Ok(*i as usize),
            Some(_) => Err(CoreError::Config(format!(
                "key {key} is not a non-negative integer"
            ))),
            None => Err(CoreError::Config(format!("missing key {key}"))),
        }
    }

    pub fn get_bool(&self, key: &str) -> Result<bool, CoreError> {
        match self.map.get(key) {
            Some(ConfigValue::Bool(b)) => Ok(*b),
            Some(_) => Err(CoreError::Config(format!("key {key} is not a bool"))),
            None => Err(CoreError::Config(format!("missing key {key}"))),
        }
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, CoreError> {
        if self.contains(key) {
            self.get_f64(key)
        } else {
            Ok(default)
        }
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, CoreError> {
        if self.contains(key) {
            self.get_usize(key)
        } else {
            Ok(default)
        }
    }

    pub fn str_or<'a>(&'a self, key: &str, default: &'a str) -> Result<&'a str, CoreError> {
        if self.contains(key) {
            self.get_str(key)
        } else {
            Ok(default)
        }
    }

    pub fn bool_or(&self, key: &str, default: bool) -> Result<bool, CoreError> {
        if self.contains(key) {
            self.get_bool(key)
        } else {
            Ok(default)
        }
    }

    /// Time step, final time and tolerances with the invariants checked.
    pub fn dt(&self) -> Result<f64, CoreError> {
        let dt = self.get_f64("dt")?;
        if !(dt > 0.0) {
            return Err(CoreError::Config(format!("dt = {dt} must be positive")));
        }
        Ok(dt)
    }

    pub fn t_end(&self) -> Result<f64, CoreError> {
        let t = self.get_f64("t_end")?;
        if !(t > 0.0) {
            return Err(CoreError::Config(format!("t_end = {t} must be positive")));
        }
        Ok(t)
    }

    pub fn newton_tol(&self) -> Result<f64, CoreError> {
        let tol = self.f64_or("newton_tol", 1e-10)?;
        if !(tol > 0.0) {
            return Err(CoreError::Config("newton_tol must be positive".into()));
        }
        Ok(tol)
    }

    pub fn steady_tol(&self) -> Result<f64, CoreError> {
        let tol = self.f64_or("steady_tol", 1e-8)?;
        if !(tol > 0.0) {
            return Err(CoreError::Config("steady_tol must be positive".into()));
        }
        Ok(tol)
    }

    /// Phase condition selector: `fixed` (default) or `orthogonal`.
    pub fn phase_condition(&self) -> Result<PhaseCondition, CoreError> {
        match self.str_or("phase_condition", "fixed")? {
            "fixed" => Ok(PhaseCondition::Fixed),
            "orthogonal" => Ok(PhaseCondition::Orthogonal),
            other => Err(CoreError::Config(format!(
                "unknown phase_condition {other:?} (expected \"fixed\" or \"orthogonal\")"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseCondition {
    Fixed,
    Orthogonal,
}
