//! Browser demo: three operations of the workbench exposed to JavaScript.
//! Each returns a JSON string; errors come back as JS strings.

use rwb_core::catalog::{get_class, structure_alias, CLASS_NAMES};
use rwb_core::fraisse::{enumerate_models, ClassSpec};
use rwb_core::order::find_order_types;
use rwb_core::ramsey::decide_arrow;
use rwb_core::{SearchLimits, Structure};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest catalog size the page will build; keeps the tab responsive.
pub const MAX_DEMO_SIZE: usize = 6;
const DEMO_BUDGET: u64 = 2_000_000;

fn limits() -> SearchLimits {
    SearchLimits::default().with_budget(DEMO_BUDGET)
}

fn class(name: &str) -> Result<ClassSpec, String> {
    get_class(name).map_err(|e| e.to_string())
}

fn bounded(n: usize) -> Result<usize, String> {
    if n > MAX_DEMO_SIZE {
        return Err(format!("the demo stops at size {MAX_DEMO_SIZE}"));
    }
    Ok(n)
}

fn structure(spec: &ClassSpec, text: &str) -> Result<Structure, String> {
    match structure_alias(text.trim(), spec).map_err(|e| e.to_string())? {
        Some(s) => Ok(s),
        None => Structure::from_json(text).map_err(|e| format!("`{text}`: {e}")),
    }
}

pub fn class_names_json() -> String {
    json!(CLASS_NAMES).to_string()
}

/// Model counts per size, and the models of the largest size.
pub fn enumerate_json(name: &str, max_size: usize) -> Result<String, String> {
    let spec = class(name)?;
    let catalog = enumerate_models(&spec, bounded(max_size)?, limits()).map_err(|e| e.to_string())?;
    let top: Vec<&Structure> = catalog.models(max_size).iter().map(|m| &m.structure).take(64).collect();
    Ok(json!({ "class": name, "counts": catalog.counts(), "largest": top }).to_string())
}

/// Decides `C -> (B)^A_k`; structures are aliases or Structure JSON.
pub fn arrow_json(name: &str, a: &str, b: &str, c: &str, k: usize) -> Result<String, String> {
    let spec = class(name)?;
    let (sa, sb, sc) = (structure(&spec, a)?, structure(&spec, b)?, structure(&spec, c)?);
    if sc.size() > 12 {
        return Err("the demo keeps C at 12 elements or fewer".into());
    }
    if k == 0 {
        return Err("k must be at least 1".into());
    }
    let v = decide_arrow(&sc, &sb, &sa, k, limits()).map_err(|e| e.to_string())?;
    Ok(serde_json::to_string(&v).expect("verdict serializes"))
}

/// Definable orders as unions of 2-types, with human-readable types.
pub fn order_json(name: &str, max_size: usize) -> Result<String, String> {
    let spec = class(name)?;
    let n = bounded(max_size)?;
    let catalog = enumerate_models(&spec, n, limits()).map_err(|e| e.to_string())?;
    let r = find_order_types(&catalog, n, limits()).map_err(|e| e.to_string())?;
    let pretty: Vec<Vec<String>> =
        r.candidates.iter().map(|c| c.types.iter().map(ToString::to_string).collect()).collect();
    let types: Vec<String> = r.irreflexive_types.iter().map(ToString::to_string).collect();
    Ok(json!({ "class": name, "bound": n, "irreflexive_types": types, "candidates": pretty }).to_string())
}

#[wasm_bindgen(js_name = classNames)]
pub fn class_names() -> String {
    class_names_json()
}

#[wasm_bindgen]
pub fn enumerate(name: &str, max_size: usize) -> Result<String, JsValue> {
    enumerate_json(name, max_size).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn arrow(name: &str, a: &str, b: &str, c: &str, k: usize) -> Result<String, JsValue> {
    arrow_json(name, a, b, c, k).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = orderTypes)]
pub fn order_types(name: &str, max_size: usize) -> Result<String, JsValue> {
    order_json(name, max_size).map_err(|e| JsValue::from_str(&e))
}
