//! JSON encodings for elements, vectors and matrices.
//!
//! Element: `{"ring": n, "coeffs": [..]}`. Vector: `{"ring", "denom_exp",
//! "entries": [coeff-list, ..]}`. Matrix: `{"ring", "denom_exp", "rows":
//! [[coeff-list, ..], ..]}`. Integers are written without a size limit.

use num_bigint::BigInt;
use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};
use crate::loc::{LocMatrix, LocVector};
use crate::ring::{CycInt, RingSpec};

fn big_to_json(v: &BigInt) -> Value {
    Value::Number(v.to_string().parse::<Number>().expect("decimal integer is a JSON number"))
}

fn json_to_big(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .to_string()
            .parse::<BigInt>()
            .map_err(|_| Error::Malformed(format!("not an integer: {n}"))),
        other => Err(Error::Malformed(format!("expected integer, got {other}"))),
    }
}

fn coeffs_to_json(a: &CycInt) -> Value {
    Value::Array(a.coeffs().iter().map(big_to_json).collect())
}

fn json_to_coeffs(spec: RingSpec, v: &Value) -> Result<CycInt> {
    let arr = v.as_array().ok_or_else(|| Error::Malformed("coefficient list must be an array".into()))?;
    if arr.len() != spec.phi() {
        return Err(Error::Malformed(format!(
            "expected {} coefficients for ring {}, got {}",
            spec.phi(),
            spec.n(),
            arr.len()
        )));
    }
    let c = arr.iter().map(json_to_big).collect::<Result<Vec<_>>>()?;
    Ok(CycInt::from_coeffs(spec, c))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::Malformed(format!("missing field \"{key}\"")))
}

fn object(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::Malformed("expected a JSON object".into()))
}

fn read_ring(obj: &Map<String, Value>) -> Result<RingSpec> {
    let n = field(obj, "ring")?
        .as_u64()
        .ok_or_else(|| Error::Malformed("\"ring\" must be a small integer".into()))?;
    RingSpec::new(u32::try_from(n).map_err(|_| Error::UnsupportedRing(u32::MAX))?)
}

fn read_denom(obj: &Map<String, Value>) -> Result<u32> {
    let k = field(obj, "denom_exp")?
        .as_u64()
        .ok_or_else(|| Error::Malformed("\"denom_exp\" must be a nonnegative integer".into()))?;
    u32::try_from(k).map_err(|_| Error::Malformed("\"denom_exp\" too large".into()))
}

pub fn elem_to_json(a: &CycInt) -> Value {
    let mut m = Map::new();
    m.insert("ring".into(), Value::from(a.spec().n()));
    m.insert("coeffs".into(), coeffs_to_json(a));
    Value::Object(m)
}

pub fn elem_from_json(v: &Value) -> Result<CycInt> {
    let obj = object(v)?;
    let spec = read_ring(obj)?;
    json_to_coeffs(spec, field(obj, "coeffs")?)
}

pub fn vector_to_json(v: &LocVector) -> Value {
    let mut m = Map::new();
    m.insert("ring".into(), Value::from(v.spec().n()));
    m.insert("denom_exp".into(), Value::from(v.denom_exp()));
    m.insert("entries".into(), Value::Array(v.entries().iter().map(coeffs_to_json).collect()));
    Value::Object(m)
}

pub fn vector_from_json(v: &Value) -> Result<LocVector> {
    let obj = object(v)?;
    let spec = read_ring(obj)?;
    let k = read_denom(obj)?;
    let entries = field(obj, "entries")?
        .as_array()
        .ok_or_else(|| Error::Malformed("\"entries\" must be an array".into()))?
        .iter()
        .map(|e| json_to_coeffs(spec, e))
        .collect::<Result<Vec<_>>>()?;
    LocVector::new(spec, entries, k)
}

pub fn matrix_to_json(m: &LocMatrix) -> Value {
    let mut o = Map::new();
    o.insert("ring".into(), Value::from(m.spec().n()));
    o.insert("denom_exp".into(), Value::from(m.denom_exp()));
    o.insert(
        "rows".into(),
        Value::Array(m.rows().iter().map(|r| Value::Array(r.iter().map(coeffs_to_json).collect())).collect()),
    );
    Value::Object(o)
}

pub fn matrix_from_json(v: &Value) -> Result<LocMatrix> {
    let obj = object(v)?;
    let spec = read_ring(obj)?;
    let k = read_denom(obj)?;
    let rows = field(obj, "rows")?
        .as_array()
        .ok_or_else(|| Error::Malformed("\"rows\" must be an array".into()))?
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::Malformed("each row must be an array".into()))?
                .iter()
                .map(|e| json_to_coeffs(spec, e))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    LocMatrix::new(spec, rows, k)
}

/// Compact single-line rendering.
pub fn to_line(v: &Value) -> String {
    serde_json::to_string(v).expect("values always serialize")
}

pub fn parse(text: &str) -> Result<Value> {
    Ok(serde_json::from_str(text)?)
}
