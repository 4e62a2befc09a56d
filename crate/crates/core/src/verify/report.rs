//! Serializable verification reports.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportPoint {
    pub input: Value,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
    /// Signed distance to failure: positive iff the point passes.
    pub margin: f64,
}

impl ReportPoint {
    /// Passes when `value > bound`.
    pub fn above(input: Value, value: f64, bound: f64) -> Self {
        let margin = value - bound;
        Self {
            input,
            value,
            bound,
            pass: margin > 0.0,
            margin,
        }
    }

    /// Passes when `value < bound`.
    pub fn below(input: Value, value: f64, bound: f64) -> Self {
        let margin = bound - value;
        Self {
            input,
            value,
            bound,
            pass: margin > 0.0,
            margin,
        }
    }

    /// Passes when `lo < value < hi`; `bound` records the violated or
    /// nearer end.
    pub fn between(input: Value, value: f64, lo: f64, hi: f64) -> Self {
        let (margin, bound) = if value - lo < hi - value {
            (value - lo, lo)
        } else {
            (hi - value, hi)
        };
        Self {
            input,
            value,
            bound,
            pass: margin > 0.0,
            margin,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub params: Value,
    pub points: Vec<ReportPoint>,
    pub fitted_constants: BTreeMap<String, f64>,
    /// Smallest point margin; `+∞` for an empty report.
    pub min_margin: f64,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(check: &str, params: Value) -> Self {
        Self {
            check: check.to_string(),
            params,
            points: Vec::new(),
            fitted_constants: BTreeMap::new(),
            min_margin: f64::INFINITY,
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, point: ReportPoint) {
        self.min_margin = self.min_margin.min(point.margin);
        self.points.push(point);
    }

    pub fn fit(&mut self, name: &str, value: f64) {
        self.fitted_constants.insert(name.to_string(), value);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn passed(&self) -> bool {
        self.points.iter().all(|p| p.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportPoint> {
        self.points.iter().filter(|p| !p.pass)
    }

    /// Appends all points, constants (prefixed) and notes of `other`.
    pub fn merge(&mut self, prefix: &str, other: VerificationReport) {
        for p in other.points {
            self.push(p);
        }
        for (k, v) in other.fitted_constants {
            self.fitted_constants.insert(format!("{prefix}.{k}"), v);
        }
        self.notes.extend(other.notes);
    }

    pub fn to_json(&self) -> String {
        // finite-safe: serde_json maps non-finite floats to null
        serde_json::to_string_pretty(self).expect("report is serializable")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n").map_err(|e| Error::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn margins_and_serialization() {
        let mut r = VerificationReport::new("demo", json!({"n": 2}));
        assert!(r.passed());
        r.push(ReportPoint::above(json!({"x": 1}), 2.0, 0.5));
        r.push(ReportPoint::between(json!({"x": 2}), 3.365, 3.36, 3.37));
        assert!(r.passed());
        assert!((r.min_margin - 0.005).abs() < 1e-12);
        r.push(ReportPoint::below(json!({"x": 3}), 2.0, 1.0));
        assert!(!r.passed());
        assert_eq!(r.failures().count(), 1);
        r.fit("C", 1.5);
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["check"], "demo");
        assert_eq!(v["points"].as_array().unwrap().len(), 3);
        assert_eq!(v["points"][2]["pass"], false);
        assert_eq!(v["fitted_constants"]["C"], 1.5);
        assert_eq!(v["min_margin"], -1.0);
    }
}
