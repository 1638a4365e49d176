//! Run-configuration parsing: a flat JSON object with a `command` field,
//! unit-suffixed quantity strings, and strict unknown-key rejection.

use crate::units::{parse_quantity, Unit};
use serde_json::Value;
use std::cell::RefCell;
use std::collections::BTreeSet;

/// Wrapper over the config object that records which keys were consumed so
/// leftovers can be rejected by name.
pub struct Cfg {
    map: serde_json::Map<String, Value>,
    used: RefCell<BTreeSet<String>>,
}

impl Cfg {
    pub fn from_value(v: Value) -> Result<Self, String> {
        match v {
            Value::Object(map) => Ok(Cfg {
                map,
                used: RefCell::new(BTreeSet::new()),
            }),
            _ => Err("config root must be a JSON object".into()),
        }
    }

    fn raw(&self, key: &str) -> Option<&Value> {
        let v = self.map.get(key);
        if v.is_some() {
            self.used.borrow_mut().insert(key.to_string());
        }
        v
    }

    pub fn quantity(&self, key: &str, unit: Unit) -> Result<f64, String> {
        match self.raw(key) {
            Some(Value::String(s)) => parse_quantity(s, unit),
            Some(other) => Err(format!(
                "key {key:?} must be a unit-suffixed string like \"780 nm\", got {other}"
            )),
            None => Err(format!("missing required key {key:?}")),
        }
    }

    pub fn quantity_or(&self, key: &str, unit: Unit, default: f64) -> Result<f64, String> {
        match self.raw(key) {
            Some(Value::String(s)) => parse_quantity(s, unit),
            Some(other) => Err(format!(
                "key {key:?} must be a unit-suffixed string, got {other}"
            )),
            None => Ok(default),
        }
    }

    /// Plain number (dimensionless, or a documented raw-SI field).
    pub fn number(&self, key: &str) -> Result<f64, String> {
        match self.raw(key) {
            Some(Value::Number(n)) => n
                .as_f64()
                .ok_or_else(|| format!("key {key:?} is not a finite number")),
            Some(other) => Err(format!("key {key:?} must be a plain number, got {other}")),
            None => Err(format!("missing required key {key:?}")),
        }
    }

    pub fn number_or(&self, key: &str, default: f64) -> Result<f64, String> {
        match self.raw(key) {
            Some(Value::Number(n)) => n
                .as_f64()
                .ok_or_else(|| format!("key {key:?} is not a finite number")),
            Some(other) => Err(format!("key {key:?} must be a plain number, got {other}")),
            None => Ok(default),
        }
    }

    pub fn integer_or(&self, key: &str, default: u64) -> Result<u64, String> {
        match self.raw(key) {
            Some(Value::Number(n)) => n
                .as_u64()
                .ok_or_else(|| format!("key {key:?} must be a non-negative integer")),
            Some(other) => Err(format!("key {key:?} must be an integer, got {other}")),
            None => Ok(default),
        }
    }

    pub fn string(&self, key: &str) -> Result<String, String> {
        match self.raw(key) {
            Some(Value::String(s)) => Ok(s.clone()),
            Some(other) => Err(format!("key {key:?} must be a string, got {other}")),
            None => Err(format!("missing required key {key:?}")),
        }
    }

    pub fn string_or(&self, key: &str, default: &str) -> Result<String, String> {
        match self.raw(key) {
            Some(Value::String(s)) => Ok(s.clone()),
            Some(other) => Err(format!("key {key:?} must be a string, got {other}")),
            None => Ok(default.to_string()),
        }
    }

    pub fn bool_or(&self, key: &str, default: bool) -> Result<bool, String> {
        match self.raw(key) {
            Some(Value::Bool(b)) => Ok(*b),
            Some(other) => Err(format!("key {key:?} must be a boolean, got {other}")),
            None => Ok(default),
        }
    }

    /// Three-component unit vector, e.g. "orientation": [1.0, 0.0, 0.0].
    pub fn vector3_or(&self, key: &str, default: [f64; 3]) -> Result<[f64; 3], String> {
        match self.raw(key) {
            Some(Value::Array(a)) if a.len() == 3 => {
                let mut out = [0.0; 3];
                for (i, v) in a.iter().enumerate() {
                    out[i] = v
                        .as_f64()
                        .ok_or_else(|| format!("key {key:?}[{i}] must be a number"))?;
                }
                Ok(out)
            }
            Some(other) => Err(format!(
                "key {key:?} must be a 3-element number array, got {other}"
            )),
            None => Ok(default),
        }
    }

    /// Pair of compact mode labels, e.g. "pair": ["HE11", "TM01"].
    pub fn mode_pair(&self, key: &str) -> Result<(String, String), String> {
        match self.raw(key) {
            Some(Value::Array(a)) if a.len() == 2 => {
                let first = a[0]
                    .as_str()
                    .ok_or_else(|| format!("key {key:?}[0] must be a string"))?;
                let second = a[1]
                    .as_str()
                    .ok_or_else(|| format!("key {key:?}[1] must be a string"))?;
                Ok((first.to_string(), second.to_string()))
            }
            Some(other) => Err(format!(
                "key {key:?} must be a 2-element string array like [\"HE11\", \"TM01\"], got {other}"
            )),
            None => Err(format!("missing required key {key:?}")),
        }
    }

    /// Fails with the offending names if any key was never consumed.
    pub fn reject_unknown(&self) -> Result<(), String> {
        let used = self.used.borrow();
        let unknown: Vec<&String> = self
            .map
            .keys()
            .filter(|k| !used.contains(*k))
            .collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(format!(
                "unknown configuration key(s): {}",
                unknown
                    .iter()
                    .map(|k| format!("{k:?}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            ))
        }
    }
}

/// Compact mode label ("HE11", "TM01", "EH11", ...) to ModeId. Single-digit
/// azimuthal order, remaining digits are the radial order.
pub fn parse_mode_label(label: &str) -> Result<onf_core::ModeId, String> {
    let s = label.trim();
    if s.len() < 4 {
        return Err(format!("mode label {label:?} too short (e.g. \"HE11\")"));
    }
    let family = onf_core::ModeFamily::parse(&s[..2]).map_err(|e| e.to_string())?;
    let digits = &s[2..];
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(format!("mode label {label:?} must end in digits"));
    }
    let l: u32 = digits[..1].parse().unwrap();
    let m: u32 = digits[1..]
        .parse()
        .map_err(|_| format!("bad radial order in {label:?}"))?;
    onf_core::ModeId::new(family, l, m, onf_core::Rotation::Plus).map_err(|e| e.to_string())
}
