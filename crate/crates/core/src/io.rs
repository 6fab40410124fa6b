//! File formats: metric JSON, measure JSON, and rational serialization.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::metric::{validate_metric, MetricSpace};
use crate::norms::SignedMeasure;
use crate::rational::{parse_rational, Rational};

pub(crate) fn serialize_rational<S: Serializer>(
    v: &Rational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub(crate) fn serialize_rationals<S: Serializer>(
    v: &[Rational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .serialize(s)
}

fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(crate::rational::integer(i)),
            None => Err(Error::Parse(format!(
                "{n} is not an integer; write fractions as \"p/q\""
            ))),
        },
        other => Err(Error::Parse(format!(
            "expected integer or \"p/q\" string, got {other}"
        ))),
    }
}

/// Parses `{"points": k, "dist": [[...]]}` and validates the metric.
pub fn parse_metric_json(text: &str) -> Result<MetricSpace> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let rows = doc
        .get("dist")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing \"dist\" array".into()))?;
    let matrix = rows
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Error::Parse("\"dist\" rows must be arrays".into()))?
                .iter()
                .map(rational_from_json)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(points) = doc.get("points") {
        let points = points
            .as_u64()
            .ok_or_else(|| Error::Parse("\"points\" must be a non-negative integer".into()))?;
        if points as usize != matrix.len() {
            return Err(Error::DimensionMismatch {
                expected: points as usize,
                found: matrix.len(),
            });
        }
    }
    validate_metric(&matrix)
}

pub fn metric_to_json(ms: &MetricSpace) -> Value {
    let dist: Vec<Vec<Value>> = ms
        .matrix()
        .iter()
        .map(|row| {
            row.iter()
                .map(
                    |v| match v.is_integer().then(|| v.to_integer().to_i64()).flatten() {
                        Some(i) => Value::from(i),
                        None => Value::String(v.to_string()),
                    },
                )
                .collect()
        })
        .collect();
    serde_json::json!({ "points": ms.n_points(), "dist": dist })
}

/// Parses `{"coeffs": {"1": "1", "4": "-1"}}` with one-based labels; missing
/// points get coefficient zero.
pub fn parse_measure_json(text: &str, n_points: usize) -> Result<SignedMeasure> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let coeffs = doc
        .get("coeffs")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::Parse("missing \"coeffs\" object".into()))?;
    let mut values = vec![Rational::from_integer(0.into()); n_points];
    for (label, v) in coeffs {
        let p: usize = label
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad point label {label:?}")))?;
        if p == 0 || p > n_points {
            return Err(Error::UnknownPoint(p.wrapping_sub(1)));
        }
        values[p - 1] = rational_from_json(v)?;
    }
    SignedMeasure::new(values)
}

pub fn measure_to_json(mu: &SignedMeasure) -> Value {
    let coeffs: BTreeMap<String, String> = mu
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
        .map(|(p, c)| ((p + 1).to_string(), c.to_string()))
        .collect();
    serde_json::json!({ "coeffs": coeffs })
}
