//! JSON forms of exact values. Exact numbers are written as decimal strings
//! so that no reader truncates them.
//!
//! A rational function is `{"var":"n","num":[c0,c1,...],"den":[d0,d1,...]}`
//! with the integer coefficients of its canonical form in ascending degree;
//! zero has an empty numerator.

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::arith::{BigRational, LaurentSeries, Matrix, Poly, RatFunc};
use crate::error::{Error, Result};
use crate::montecarlo::MCEstimate;
use crate::pairings::ExponentMatrix;
use crate::zonal::PoleReport;

pub fn rational_to_json(x: &BigRational) -> Value {
    Value::String(x.to_string())
}

pub fn rational_from_str(s: &str) -> Result<BigRational> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|_| Error::Parse(format!("not an exact rational: {s:?}")))
}

pub fn ratfunc_to_json(f: &RatFunc) -> Value {
    let integers = |p: &Poly| {
        p.coeffs()
            .iter()
            .map(|c| c.to_integer())
            .collect::<Vec<_>>()
    };
    let (num, den) = (integers(f.num()), integers(f.den()));
    let strings =
        |v: Vec<BigInt>| Value::Array(v.iter().map(|c| Value::String(c.to_string())).collect());
    json!({"var": "n", "num": strings(num), "den": strings(den)})
}

fn coefficient_list(v: &Value, field: &str) -> Result<Poly> {
    let items = v
        .get(field)
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse(format!("missing array field {field:?}")))?;
    let coeffs = items
        .iter()
        .enumerate()
        .map(|(i, c)| match c {
            Value::String(s) => s
                .parse::<BigInt>()
                .map(BigRational::from_integer)
                .map_err(|_| Error::Parse(format!("{field}[{i}] is not an integer: {s:?}"))),
            _ => Err(Error::Parse(format!(
                "{field}[{i}] must be a decimal string"
            ))),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::new(coeffs))
}

pub fn ratfunc_from_json(v: &Value) -> Result<RatFunc> {
    match v.get("var").and_then(Value::as_str) {
        Some("n") => {}
        _ => return Err(Error::Parse("expected \"var\": \"n\"".into())),
    }
    RatFunc::new(coefficient_list(v, "num")?, coefficient_list(v, "den")?)
}

pub fn laurent_to_json(s: &LaurentSeries) -> Value {
    let terms: Vec<Value> = s
        .coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| json!({"order": -(s.leading_order + j as i64), "coeff": rational_to_json(c)}))
        .collect();
    json!({
        "leading_order": if s.is_zero() { Value::Null } else { json!(-s.leading_order) },
        "truncation_order": -s.truncation_order,
        "terms": terms,
    })
}

pub fn matrix_to_json<T>(m: &Matrix<T>, entry: impl Fn(&T) -> Value) -> Value
where
    T: crate::arith::Field,
{
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(&entry).collect()))
            .collect(),
    )
}

pub fn pole_report_to_json(r: &PoleReport) -> Value {
    json!({
        "k": r.k,
        "candidates": r.candidates.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "actual": r.actual.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "contained": r.contained,
    })
}

pub fn mc_estimate_to_json(e: &MCEstimate) -> Value {
    json!({"mean": e.mean, "std_error": e.std_error, "samples": e.samples})
}

pub fn exponent_matrix_to_json(a: &ExponentMatrix) -> Value {
    json!(a.rows())
}

/// Parses a rectangular JSON array of arrays of nonnegative integers.
pub fn parse_matrix(text: &str) -> Result<ExponentMatrix> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Parse("expected an array of rows".into()))?;
    if rows.is_empty() {
        return Err(Error::Parse("matrix has no rows".into()));
    }
    let mut out = Vec::with_capacity(rows.len());
    let mut width = None;
    for (i, row) in rows.iter().enumerate() {
        let cells = row
            .as_array()
            .ok_or_else(|| Error::Parse(format!("row {} is not an array", i + 1)))?;
        if *width.get_or_insert(cells.len()) != cells.len() {
            return Err(Error::Parse(format!("ragged row {}", i + 1)));
        }
        let parsed = cells
            .iter()
            .enumerate()
            .map(|(j, c)| entry(c, i + 1, j + 1))
            .collect::<Result<Vec<u64>>>()?;
        out.push(parsed);
    }
    if width == Some(0) {
        return Err(Error::Parse("matrix has no columns".into()));
    }
    ExponentMatrix::new(out)
}

fn entry(c: &Value, row: usize, col: usize) -> Result<u64> {
    if let Some(x) = c.as_u64() {
        return Ok(x);
    }
    let reason = match c {
        Value::Number(x) if x.as_i64().is_some() => "negative entry",
        Value::Number(_) => "non-integer entry",
        _ => "entry is not a number",
    };
    Err(Error::Parse(format!(
        "{reason} {c} at row {row}, column {col}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratfunc_serialization() {
        let f = RatFunc::new(Poly::from_ints([-1]), Poly::from_ints([0, -2, 1, 1])).unwrap();
        assert_eq!(
            ratfunc_to_json(&f).to_string(),
            r#"{"var":"n","num":["-1"],"den":["0","-2","1","1"]}"#
        );
        assert_eq!(ratfunc_from_json(&ratfunc_to_json(&f)).unwrap(), f);
        let zero = ratfunc_to_json(&RatFunc::zero());
        assert_eq!(zero["num"], json!([]));
        assert_eq!(zero["den"], json!(["1"]));
        assert!(ratfunc_from_json(&json!({"var":"m","num":[],"den":["1"]})).is_err());
        assert!(ratfunc_from_json(&json!({"var":"n","num":["1"],"den":[]})).is_err());
    }

    #[test]
    fn matrix_parsing() {
        let a = parse_matrix("[[2,0],[0,2]]").unwrap();
        assert_eq!((a.p(), a.q()), (2, 2));
        let a = parse_matrix("[[1,2,3]]").unwrap();
        assert_eq!((a.p(), a.q()), (1, 3));
        assert_eq!(
            parse_matrix("[[1],[1,2]]").unwrap_err().to_string(),
            "parse error: ragged row 2"
        );
        let msg = parse_matrix("[[1,-1]]").unwrap_err().to_string();
        assert!(
            msg.contains("negative") && msg.contains("row 1, column 2"),
            "{msg}"
        );
        let msg = parse_matrix("[[1],[1.5]]").unwrap_err().to_string();
        assert!(
            msg.contains("non-integer") && msg.contains("row 2, column 1"),
            "{msg}"
        );
        assert!(parse_matrix("[1,2]").is_err());
        assert!(parse_matrix("[]").is_err());
        assert!(parse_matrix("[[]]").is_err());
        assert!(parse_matrix("not json").is_err());
    }
}
