//! JSON documents: operators, curves, series dumps, certificates and
//! commuting reports. Scalars travel as canonical `"p/q"` strings
//! (`"3"`, `"-1/2"`); unknown keys are ignored on input.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::commuting::{DecompositionData, ScalingConstant};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::operator::{DifferenceOperator, PeriodicSequence};
use crate::poly::{BivariatePolynomial, Polynomial};
use crate::scalar::Scalar;
use crate::series::InfinityExpansion;
use crate::superperiodic::{GaleDualPair, SuperperiodicCertificate};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn scalar_to_value<T: Scalar>(x: &T) -> Value {
    Value::String(x.to_text())
}

/// Accepts `"p/q"` strings and plain JSON integers.
pub fn scalar_from_value<T: Scalar>(v: &Value) -> Result<T> {
    match v {
        Value::String(s) => T::from_text(s),
        Value::Number(n) if n.is_i64() => Ok(T::from_int(n.as_i64().expect("checked"))),
        other => Err(parse_err(format!("expected a \"p/q\" string, found {other}"))),
    }
}

fn scalars_from_value<T: Scalar>(v: &Value) -> Result<Vec<T>> {
    v.as_array()
        .ok_or_else(|| parse_err(format!("expected an array, found {v}")))?
        .iter()
        .map(scalar_from_value)
        .collect()
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| parse_err(format!("missing key \"{key}\"")))
}

fn usize_field(v: &Value, key: &str) -> Result<usize> {
    field(v, key)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| parse_err(format!("\"{key}\" must be a non-negative integer")))
}

pub fn operator_to_value<T: Scalar>(l: &DifferenceOperator<T>) -> Value {
    let terms: Map<String, Value> = l
        .terms()
        .map(|(p, c)| (p.to_string(), Value::Array(c.values().iter().map(scalar_to_value).collect())))
        .collect();
    json!({ "n": l.period(), "terms": terms })
}

pub fn operator_from_value<T: Scalar>(v: &Value) -> Result<DifferenceOperator<T>> {
    let n = usize_field(v, "n")?;
    if n == 0 {
        return Err(Error::ZeroPeriod);
    }
    let terms = field(v, "terms")?.as_object().ok_or_else(|| parse_err("\"terms\" must be an object"))?;
    let mut parsed = Vec::with_capacity(terms.len());
    for (key, values) in terms {
        let p: i64 = key.trim().parse().map_err(|_| parse_err(format!("power key {key:?} is not an integer")))?;
        let values: Vec<T> = scalars_from_value(values)?;
        if values.len() != n {
            return Err(parse_err(format!("term {p} has {} values, expected {n}", values.len())));
        }
        parsed.push((p, PeriodicSequence::new(values)?));
    }
    DifferenceOperator::from_terms(n, parsed)
}

/// Reads either an operator document or a quiddity document
/// `{"n": 5, "quiddity": [1, 3, 1, 2, 2]}`.
pub fn operator_document<T: Scalar>(v: &Value) -> Result<DifferenceOperator<T>> {
    if v.get("quiddity").is_some() {
        let q = quiddity_from_value(v)?;
        let row: Vec<T> = q.iter().map(|&a| T::from_int(a)).collect();
        return DifferenceOperator::triangular(q.len(), &[row]);
    }
    operator_from_value(v)
}

pub fn quiddity_to_value(q: &[i64]) -> Value {
    json!({ "n": q.len(), "quiddity": q })
}

pub fn quiddity_from_value(v: &Value) -> Result<Vec<i64>> {
    let n = usize_field(v, "n")?;
    let q = field(v, "quiddity")?
        .as_array()
        .ok_or_else(|| parse_err("\"quiddity\" must be an array"))?
        .iter()
        .map(|x| x.as_i64().ok_or_else(|| parse_err(format!("quiddity entry {x} is not an integer"))))
        .collect::<Result<Vec<_>>>()?;
    if q.len() != n || n == 0 {
        return Err(parse_err(format!("quiddity has {} entries, expected n = {n}", q.len())));
    }
    Ok(q)
}

pub fn curve_to_value<T: Scalar>(r: &BivariatePolynomial<T>) -> Value {
    let coeffs: Vec<Value> = r.terms().map(|(&(i, j), c)| json!([i, j, c.to_text()])).collect();
    json!({ "vars": ["w", "E"], "coeffs": coeffs })
}

pub fn curve_from_value<T: Scalar>(v: &Value) -> Result<BivariatePolynomial<T>> {
    let mut terms = BTreeMap::new();
    for entry in field(v, "coeffs")?.as_array().ok_or_else(|| parse_err("\"coeffs\" must be an array"))? {
        let e = entry.as_array().filter(|e| e.len() == 3).ok_or_else(|| parse_err("coefficient must be [i, j, c]"))?;
        let exp = |x: &Value| {
            x.as_u64()
                .and_then(|x| u32::try_from(x).ok())
                .ok_or_else(|| parse_err(format!("bad exponent {x}")))
        };
        let key = (exp(&e[0])?, exp(&e[1])?);
        if terms.insert(key, scalar_from_value::<T>(&e[2])?).is_some() {
            return Err(parse_err(format!("duplicate monomial {key:?}")));
        }
    }
    Ok(BivariatePolynomial::from_terms(terms))
}

/// Coefficients from degree zero upward.
pub fn polynomial_to_value<T: Scalar>(p: &Polynomial<T>) -> Value {
    if p.is_zero() {
        return json!(["0"]);
    }
    Value::Array(p.coeffs().iter().map(scalar_to_value).collect())
}

pub fn polynomial_from_value<T: Scalar>(v: &Value) -> Result<Polynomial<T>> {
    Ok(Polynomial::new(scalars_from_value(v)?))
}

pub fn matrix_to_value<T: Scalar>(m: &Matrix<T>) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(scalar_to_value).collect()))
            .collect(),
    )
}

pub fn series_to_value<T: Scalar>(s: &InfinityExpansion<T>) -> Value {
    json!({
        "S": s.truncation(),
        "e": s.e.iter().map(scalar_to_value).collect::<Vec<_>>(),
        "xi": s.xi.iter().map(|x| x.values().iter().map(scalar_to_value).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

/// `(S, e, xi)` of a series dump.
pub fn series_from_value<T: Scalar>(v: &Value) -> Result<(usize, Vec<T>, Vec<Vec<T>>)> {
    let s = usize_field(v, "S")?;
    let e = scalars_from_value(field(v, "e")?)?;
    let xi = field(v, "xi")?
        .as_array()
        .ok_or_else(|| parse_err("\"xi\" must be an array"))?
        .iter()
        .map(scalars_from_value)
        .collect::<Result<Vec<_>>>()?;
    if e.len() != s || xi.len() != s {
        return Err(parse_err(format!("series lengths do not match S = {s}")));
    }
    Ok((s, e, xi))
}

pub fn gale_pair_to_value<T: Scalar>(pair: &GaleDualPair<T>) -> Value {
    json!({
        "dual_commuting": operator_to_value(&pair.dual_commuting),
        "gale": operator_to_value(&pair.gale),
    })
}

pub fn certificate_to_value<T: Scalar>(c: &SuperperiodicCertificate<T>) -> Value {
    json!({
        "superperiodic": c.superperiodic,
        "monodromy": matrix_to_value(&c.monodromy),
        "remainder_left": operator_to_value(&c.remainder_left),
        "remainder_right": operator_to_value(&c.remainder_right),
        "gale_dual": c.gale_dual.as_ref().map_or(Value::Null, gale_pair_to_value),
    })
}

pub fn scaling_to_value(c: &ScalingConstant) -> Value {
    match c {
        ScalingConstant::Exact(c) => json!({ "exact": c.to_text() }),
        ScalingConstant::Approx { value, tolerance } => json!({ "approx": value, "tolerance": tolerance }),
    }
}

pub fn commuting_report_to_value(d: &DecompositionData) -> Value {
    json!({
        "e": d.e.to_text(),
        "Q": polynomial_to_value(&d.q),
        "mu": d.mu.to_text(),
        "c": scaling_to_value(&d.c),
        "P": polynomial_to_value(&d.p),
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}

pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))
}
