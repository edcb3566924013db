//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export takes and returns JSON strings; errors surface as thrown
//! strings on the JavaScript side.

pub mod demo;

use serde::Serialize;
use wasm_bindgen::prelude::*;

fn to_js<T: Serialize>(result: Result<T, String>) -> Result<String, JsValue> {
    result
        .map(|v| serde_json::to_string(&v).expect("views serialize"))
        .map_err(|e| JsValue::from_str(&e))
}

/// `kind` is one of `path`, `star`, `random`, `wazewski`.
#[wasm_bindgen(js_name = generateTree)]
pub fn generate_tree(kind: &str, size: usize, seed: u32) -> Result<String, JsValue> {
    to_js(demo::generate_tree(kind, size, u64::from(seed)))
}

#[wasm_bindgen(js_name = omegaAt)]
pub fn omega_at(document: &str, p: &str, q: &str, r: &str, p_norm: &str) -> Result<String, JsValue> {
    to_js(demo::omega_at(document, [p, q, r], p_norm))
}

#[wasm_bindgen]
pub fn peel(document: &str) -> Result<String, JsValue> {
    to_js(demo::peel(document))
}
