//! Named numeric results with their parameters and the chain of
//! inequalities they rest on.

use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// A double that survives JSON: non-finite values are written as the
/// strings `"INFINITE"`, `"-INFINITE"` and `"NAN"`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v = self.0;
        if v.is_finite() {
            s.serialize_f64(v)
        } else if v.is_nan() {
            s.serialize_str("NAN")
        } else if v > 0.0 {
            s.serialize_str("INFINITE")
        } else {
            s.serialize_str("-INFINITE")
        }
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Real;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or INFINITE/-INFINITE/NAN")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Real, E> {
                Ok(Real(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Real, E> {
                Ok(Real(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Real, E> {
                Ok(Real(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Real, E> {
                match v {
                    "INFINITE" => Ok(Real(f64::INFINITY)),
                    "-INFINITE" => Ok(Real(f64::NEG_INFINITY)),
                    "NAN" => Ok(Real(f64::NAN)),
                    other => Err(E::custom(format!("unexpected string {other:?}"))),
                }
            }
        }
        d.deserialize_any(V)
    }
}

impl From<f64> for Real {
    fn from(v: f64) -> Self {
        Real(v)
    }
}

pub const FLAG_INFINITE: &str = "INFINITE";
pub const FLAG_EXTRAPOLATED: &str = "EXTRAPOLATED";
pub const FLAG_DEGENERATE: &str = "DEGENERATE";
pub const FLAG_TRUNCATED: &str = "TRUNCATED";
pub const FLAG_CERTIFIED: &str = "CERTIFIED";
pub const FLAG_UNCERTIFIED: &str = "UNCERTIFIED";
pub const FLAG_SAMPLED: &str = "SAMPLED";

/// A named bound value.
///
/// `quantities` holds every intermediate the value was assembled from and
/// `series` any per-level or per-tube sequences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub value: Real,
    #[serde(default)]
    pub params: BTreeMap<String, serde_json::Value>,
    pub provenance: Vec<String>,
    pub error_estimate: Real,
    #[serde(default)]
    pub flags: Vec<String>,
    #[serde(default)]
    pub quantities: BTreeMap<String, Real>,
    #[serde(default)]
    pub series: BTreeMap<String, Vec<Real>>,
}

impl BoundReport {
    pub fn new(name: impl Into<String>, value: f64, provenance: &[&str]) -> Self {
        assert!(!provenance.is_empty(), "a report needs at least one provenance entry");
        let mut r = BoundReport {
            name: name.into(),
            value: Real(value),
            params: BTreeMap::new(),
            provenance: provenance.iter().map(|s| s.to_string()).collect(),
            error_estimate: Real(0.0),
            flags: Vec::new(),
            quantities: BTreeMap::new(),
            series: BTreeMap::new(),
        };
        if value.is_infinite() {
            r.flag(FLAG_INFINITE);
        }
        r
    }

    pub fn value(&self) -> f64 {
        self.value.0
    }

    pub fn error(&self) -> f64 {
        self.error_estimate.0
    }

    pub fn with_error(mut self, e: f64) -> Self {
        self.error_estimate = Real(e);
        self
    }

    pub fn param(mut self, key: &str, v: impl Serialize) -> Self {
        self.params.insert(
            key.to_string(),
            serde_json::to_value(v).unwrap_or(serde_json::Value::Null),
        );
        self
    }

    pub fn set_quantity(&mut self, key: &str, v: f64) {
        self.quantities.insert(key.to_string(), Real(v));
    }

    pub fn quantity(&self, key: &str) -> Option<f64> {
        self.quantities.get(key).map(|r| r.0)
    }

    pub fn set_series(&mut self, key: &str, v: &[f64]) {
        self.series
            .insert(key.to_string(), v.iter().copied().map(Real).collect());
    }

    pub fn series(&self, key: &str) -> Option<Vec<f64>> {
        self.series.get(key).map(|v| v.iter().map(|r| r.0).collect())
    }

    pub fn flag(&mut self, f: &str) {
        if !self.has_flag(f) {
            self.flags.push(f.to_string());
        }
    }

    pub fn has_flag(&self, f: &str) -> bool {
        self.flags.iter().any(|x| x == f)
    }

    pub fn is_infinite(&self) -> bool {
        self.has_flag(FLAG_INFINITE)
    }
}
