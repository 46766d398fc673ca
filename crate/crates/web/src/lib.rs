//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every entry point takes and returns JSON strings; errors surface as
//! JavaScript exceptions carrying the message.

use num_traits::ToPrimitive;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use weingarten::arith::{laurent_at_infinity, BigRational};
use weingarten::brauer::{e_of_a, mobius_matrix, mu_of_a};
use weingarten::json::{
    laurent_to_json, parse_matrix, pole_report_to_json, ratfunc_to_json, rational_to_json,
};
use weingarten::pairings::enumerate_pairings_with_limit;
use weingarten::weingarten::{integral, Mode};
use weingarten::zonal::pole_report;
use weingarten::Error;

/// Largest `k` offered by the page; keeps every call well under a second.
pub const MAX_K: usize = 4;

fn guard_k(k: usize) -> Result<(), String> {
    if k == 0 || k > MAX_K {
        return Err(format!("k must be between 1 and {MAX_K}"));
    }
    Ok(())
}

/// `I(a)` with its expansion at infinity and its poles.
pub fn exact_summary(matrix: &str) -> Result<Value, String> {
    let a = parse_matrix(matrix).map_err(|e| e.to_string())?;
    guard_k((a.total() / 2).max(1) as usize)?;
    let result = integral(&a, Mode::Symbolic).map_err(|e| e.to_string())?;
    let f = result.value.symbolic().expect("symbolic mode");
    let k = result.k;
    let series = laurent_at_infinity(f, k as i64 + 3).map_err(|e| e.to_string())?;
    let poles = pole_report(k.max(1), f).map_err(|e| e.to_string())?;
    Ok(json!({
        "k": k,
        "admissible": result.admissible,
        "text": f.to_string(),
        "value": ratfunc_to_json(f),
        "series_text": series.to_string(),
        "series": laurent_to_json(&series),
        "poles": pole_report_to_json(&poles),
    }))
}

/// `n^(k + e) I(a)` for `n` in `from..=to`, which tends to `mu(a)`.
pub fn scaled_curve(matrix: &str, from: u32, to: u32) -> Result<Value, String> {
    let a = parse_matrix(matrix).map_err(|e| e.to_string())?;
    guard_k((a.total() / 2).max(1) as usize)?;
    let result = integral(&a, Mode::Symbolic).map_err(|e| e.to_string())?;
    let f = result.value.symbolic().expect("symbolic mode");
    let (e, mu) = match (e_of_a(&a), mu_of_a(&a)) {
        (Ok(e), Ok(mu)) => (e, mu),
        (Err(Error::NoAdmissiblePairings), _) | (_, Err(Error::NoAdmissiblePairings)) => {
            return Err("I(a) vanishes identically for this matrix".into())
        }
        (Err(err), _) | (_, Err(err)) => return Err(err.to_string()),
    };
    let scale = result.k + e;
    let start = from.max(a.p().max(a.q()) as u32).max(1);
    let mut points = Vec::new();
    for n in start..=to.max(start) {
        let x = BigRational::from_integer(n.into());
        // skip integer poles of the rational function
        let Ok(v) = f.eval(&x) else { continue };
        let scaled = v * num_traits::pow(x, scale);
        points.push(json!({
            "n": n,
            "exact": rational_to_json(&scaled),
            "value": scaled.to_f64().unwrap_or(f64::NAN),
        }));
    }
    Ok(json!({
        "k": result.k,
        "e": e,
        "mu": mu.to_string(),
        "limit": mu.to_f64().unwrap_or(f64::NAN),
        "points": points,
    }))
}

/// Distance and Moebius matrices of the Brauer space `D_k`.
pub fn brauer_tables(k: usize) -> Result<Value, String> {
    guard_k(k)?;
    let labels = enumerate_pairings_with_limit(k, MAX_K).map_err(|e| e.to_string())?;
    let (dist, mu) = mobius_matrix(k).map_err(|e| e.to_string())?;
    Ok(json!({
        "k": k,
        "pairings": labels.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "distance": dist,
        "mobius": mu.iter().map(|r| r.iter().map(|x| x.to_i64().unwrap_or(0)).collect::<Vec<_>>()).collect::<Vec<_>>(),
    }))
}

fn to_js(v: Result<Value, String>) -> Result<String, JsError> {
    v.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = exactIntegral)]
pub fn exact_integral(matrix: &str) -> Result<String, JsError> {
    to_js(exact_summary(matrix))
}

#[wasm_bindgen(js_name = scaledCurve)]
pub fn scaled_curve_js(matrix: &str, from: u32, to: u32) -> Result<String, JsError> {
    to_js(scaled_curve(matrix, from, to))
}

#[wasm_bindgen(js_name = brauerTables)]
pub fn brauer_tables_js(k: usize) -> Result<String, JsError> {
    to_js(brauer_tables(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_summary_fields() {
        let v = exact_summary("[[2,0],[0,2]]").unwrap();
        assert_eq!(v["text"], "(n + 1)/(n^3 + n^2 - 2*n)");
        assert_eq!(v["poles"]["actual"], json!(["-2", "0", "1"]));
        assert!(exact_summary("[[1],[1,2]]").is_err());
        assert!(exact_summary("[[10]]").is_err());
    }

    #[test]
    fn curve_tends_to_mobius_value() {
        let v = scaled_curve("[[1,1],[1,1]]", 2, 400).unwrap();
        assert_eq!(v["mu"], "-1");
        let last = v["points"].as_array().unwrap().last().unwrap()["value"]
            .as_f64()
            .unwrap();
        assert!((last + 1.0).abs() < 0.01);
        assert!(scaled_curve("[[1,0],[0,1]]", 2, 10).is_err());
    }

    #[test]
    fn brauer_tables_shape() {
        let v = brauer_tables(3).unwrap();
        assert_eq!(v["distance"].as_array().unwrap().len(), 15);
        assert_eq!(v["mobius"][0][0], 1);
        assert!(brauer_tables(5).is_err());
    }
}
