//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export is a thin shim over a plain function that is tested natively.

use fewcopy::detector::{self, ProtocolConfig};
use fewcopy::states::{
    self, observable_set_from_witness, parse_edge_list, parse_named_graph, GraphState, NoisyState,
    STABILIZER_SEPARABLE_BOUND,
};
use wasm_bindgen::prelude::*;

/// `c4`, `linear:N`, or an edge list with one `u v` pair per line.
pub fn graph_from_spec(spec: &str) -> Result<GraphState, String> {
    let spec = spec.trim();
    match parse_named_graph(spec) {
        Some(g) => g.map_err(|e| e.to_string()),
        None => parse_edge_list(spec).map_err(|e| e.to_string()),
    }
}

/// Theoretical C_min for N = 1..=max_copies.
pub fn curve(lambda: f64, n_qubits: usize, max_copies: u64) -> Result<Vec<f64>, String> {
    detector::confidence_curve(lambda, n_qubits, STABILIZER_SEPARABLE_BOUND, max_copies)
        .map(|pts| pts.into_iter().map(|(_, c)| c).collect())
        .map_err(|e| e.to_string())
}

/// Measured C_min after each copy of one simulated run; NaN while the run is
/// inconclusive.
pub fn trace(lambda: f64, graph: &str, copies: u64, seed: u64) -> Result<Vec<f64>, String> {
    let g = graph_from_spec(graph)?;
    let state = NoisyState::new(g.clone(), lambda).map_err(|e| e.to_string())?;
    let cfg = ProtocolConfig::new(observable_set_from_witness(&g), state, copies).with_seed(seed);
    let t = detector::run_protocol(&cfg).map_err(|e| e.to_string())?;
    Ok(t.records.iter().map(|r| r.c_min.unwrap_or(f64::NAN)).collect())
}

/// `[lambda_limit, n_max]` for `n_qubits` at noise `lambda` and target `c0`;
/// `n_max` is infinite at or beyond the limit.
pub fn budget(lambda: f64, n_qubits: usize, c0: f64) -> Result<Vec<f64>, String> {
    if n_qubits == 0 {
        return Err("need at least one qubit".into());
    }
    let limit = states::lambda_limit(n_qubits);
    let n_max = if lambda < limit {
        detector::max_copies_for_noise(c0, lambda, n_qubits, STABILIZER_SEPARABLE_BOUND)
            .map_err(|e| e.to_string())?
    } else {
        f64::INFINITY
    };
    Ok(vec![limit, n_max])
}

#[wasm_bindgen(js_name = confidenceCurve)]
pub fn confidence_curve_js(lambda: f64, n_qubits: usize, max_copies: u32) -> Result<Vec<f64>, JsValue> {
    curve(lambda, n_qubits, max_copies.into()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = simulateTrace)]
pub fn simulate_trace_js(lambda: f64, graph: &str, copies: u32, seed: u32) -> Result<Vec<f64>, JsValue> {
    trace(lambda, graph, copies.into(), seed.into()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = copyBudget)]
pub fn copy_budget_js(lambda: f64, n_qubits: usize, c0: f64) -> Result<Vec<f64>, JsValue> {
    budget(lambda, n_qubits, c0).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = graphQubits)]
pub fn graph_qubits_js(graph: &str) -> Result<usize, JsValue> {
    graph_from_spec(graph)
        .map(|g| g.n_qubits())
        .map_err(|e| JsValue::from_str(&e))
}
