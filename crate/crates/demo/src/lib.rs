//! Browser bindings: series solution, regularity certificate and lifting.
//! Every function takes a system as JSON text and returns a JSON document.

use wasm_bindgen::prelude::*;

use mahler_core::lift::lift_with_escalation;
use mahler_core::scalar::{format_rational, parse_rational};
use mahler_core::MahlerSystem;

const MAX_ORDER: usize = 512;
const MAX_LIFT_DEGREE: usize = 8;

fn system(text: &str) -> Result<MahlerSystem, String> {
    MahlerSystem::from_json(text).map_err(|e| e.to_string())
}

fn rational(text: &str) -> Result<mahler_core::Rational, String> {
    parse_rational(text.trim()).map_err(|e| e.to_string())
}

pub fn solve_json(system_json: &str, order: usize) -> Result<String, String> {
    if order > MAX_ORDER {
        return Err(format!("order is capped at {MAX_ORDER} in the browser"));
    }
    let sys = system(system_json)?;
    let f = sys.solve_series(order).map_err(|e| e.to_string())?;
    let series: Vec<Vec<String>> = f.iter().map(|s| s.coeffs().iter().map(format_rational).collect()).collect();
    let pretty: Vec<String> = f.iter().map(|s| format!("{} + O(z^{order})", s.to_poly().to_pretty("z"))).collect();
    Ok(serde_json::json!({ "series": series, "pretty": pretty }).to_string())
}

pub fn regular_json(system_json: &str, alpha: &str) -> Result<String, String> {
    let sys = system(system_json)?;
    let cert = sys.certify_regular(&rational(alpha)?).map_err(|e| e.to_string())?;
    serde_json::to_string(&cert).map_err(|e| e.to_string())
}

pub fn lift_json(system_json: &str, alpha: &str, tau: &str, degree: usize, order: usize) -> Result<String, String> {
    if order > MAX_ORDER {
        return Err(format!("order is capped at {MAX_ORDER} in the browser"));
    }
    let sys = system(system_json)?;
    let alpha = rational(alpha)?;
    let tau = tau.split(',').map(rational).collect::<Result<Vec<_>, _>>()?;
    let r = lift_with_escalation(&sys, &alpha, &tau, degree.max(1), order, MAX_LIFT_DEGREE).map_err(|e| e.to_string())?;
    let pretty: Vec<String> = r.coefficients.iter().map(|p| p.to_pretty("z")).collect();
    Ok(serde_json::json!({ "lift": r, "pretty": pretty }).to_string())
}

#[wasm_bindgen]
pub fn solve(system_json: &str, order: usize) -> Result<String, JsValue> {
    solve_json(system_json, order).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn regular(system_json: &str, alpha: &str) -> Result<String, JsValue> {
    regular_json(system_json, alpha).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn lift(system_json: &str, alpha: &str, tau: &str, degree: usize, order: usize) -> Result<String, JsValue> {
    lift_json(system_json, alpha, tau, degree, order).map_err(|e| JsValue::from_str(&e))
}
