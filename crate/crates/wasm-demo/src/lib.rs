//! Browser bindings for three interactive views. Every export takes plain
//! numbers or arrays and returns a JSON string; errors come back as
//! `{"error": "..."}` so the page never has to catch exceptions.

use wasm_bindgen::prelude::*;

pub mod api;

fn to_json(r: Result<serde_json::Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => serde_json::json!({ "error": e }).to_string(),
    }
}

/// Stationary autocorrelation of a reflected ±1 walk: exact curve, shape
/// certificate, and a Monte Carlo estimate with standard errors.
#[wasm_bindgen]
pub fn walk_autocorrelation(p: f64, max_state: u32, horizon: u32, n_paths: u32, seed: u32) -> String {
    to_json(api::walk_autocorrelation(
        p,
        max_state as usize,
        horizon as usize,
        n_paths as usize,
        seed as u64,
    ))
}

/// Mean and variance of `min(N_t, m)` for a Poisson process of rate `lambda`.
#[wasm_bindgen]
pub fn capped_poisson(m: u32, lambda: f64, dt: f64, horizon: u32) -> String {
    to_json(api::capped_poisson(m, lambda, dt, horizon as usize))
}

/// Checks a nearest-neighbour walk with up/down probabilities `p`, `q` and
/// runs coupled paths from every state.
#[wasm_bindgen]
pub fn coupled_walk(p: Vec<f64>, q: Vec<f64>, steps: u32, seed: u32) -> String {
    to_json(api::coupled_walk(p, q, steps as usize, seed as u64))
}
