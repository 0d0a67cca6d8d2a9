//! The computations behind the exports, callable natively.

use monotone_markov::analysis::{transient_mean_curve, transient_variance_curve};
use monotone_markov::zoo::{absorbed_poisson, reflected_walk, state_dependent_walk, IncrementDistribution, WalkSpec};
use monotone_markov::{certify_shape, check_kernel, covariance_curve, simulate_coupled, stationary, PathEnsemble};
use serde_json::{json, Value};

const SHAPE_TOL: f64 = 1e-10;
const CHECK_TOL: f64 = 1e-10;

// Limits keep a single call interactive in the browser.
const MAX_STATES: usize = 400;
const MAX_HORIZON: usize = 500;
const MAX_PATHS: usize = 50_000;
const MAX_STEPS: usize = 2_000;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn bounded(name: &str, v: usize, max: usize) -> Result<(), String> {
    if v == 0 || v > max {
        Err(format!("{name} must be between 1 and {max}"))
    } else {
        Ok(())
    }
}

pub fn walk_autocorrelation(p: f64, max_state: usize, horizon: usize, n_paths: usize, seed: u64) -> Result<Value, String> {
    bounded("max_state", max_state, MAX_STATES)?;
    bounded("horizon", horizon, MAX_HORIZON)?;
    if n_paths > MAX_PATHS {
        return Err(format!("paths must be at most {MAX_PATHS}"));
    }
    let model = reflected_walk(&IncrementDistribution::simple(p).map_err(err)?, max_state).map_err(err)?;
    let k = &model.kernel;
    let (mono, c1) = check_kernel(k, CHECK_TOL);
    let pi = stationary(k, 1e-11).map_err(err)?;
    let exact = covariance_curve(k, &pi, |x| x, |x| x, horizon)
        .and_then(|c| c.normalized())
        .map_err(err)?;
    let cert = certify_shape(&exact, SHAPE_TOL);
    let mc = if n_paths >= 2 {
        let est = PathEnsemble::simulate(k, &pi, horizon, n_paths, seed)
            .and_then(|e| e.autocorrelation(horizon))
            .map_err(err)?;
        json!({
            "value": est.iter().map(|e| e.value).collect::<Vec<_>>(),
            "std_error": est.iter().map(|e| e.std_error).collect::<Vec<_>>(),
        })
    } else {
        Value::Null
    };
    Ok(json!({
        "times": exact.times,
        "exact": exact.values,
        "certificate": cert,
        "monotone": mono,
        "condition1": c1,
        "mc": mc,
        "stationary_mean": pi.mean(),
    }))
}

pub fn capped_poisson(m: u32, lambda: f64, dt: f64, horizon: usize) -> Result<Value, String> {
    bounded("m", m as usize, MAX_STATES)?;
    bounded("horizon", horizon, MAX_HORIZON)?;
    let model = absorbed_poisson(0, m, lambda, dt).map_err(err)?;
    let var = transient_variance_curve(&model.kernel, 0.0, horizon)
        .map_err(err)?
        .with_time_step(dt);
    let mean = transient_mean_curve(&model.kernel, 0.0, horizon)
        .map_err(err)?
        .with_time_step(dt);
    Ok(json!({
        "times": var.times,
        "variance": var.values,
        "mean": mean.values,
        "variance_certificate": certify_shape(&var, SHAPE_TOL),
        "mean_certificate": certify_shape(&mean, SHAPE_TOL),
    }))
}

pub fn coupled_walk(p: Vec<f64>, q: Vec<f64>, steps: usize, seed: u64) -> Result<Value, String> {
    bounded("states", p.len(), MAX_STATES)?;
    bounded("steps", steps, MAX_STEPS)?;
    let spec = WalkSpec::from_up_down(p, q).map_err(err)?;
    let model = state_dependent_walk(&spec).map_err(err)?;
    let k = &model.kernel;
    let (mono, c1) = check_kernel(k, CHECK_TOL);
    let starts = k.space().states().to_vec();
    let paths = simulate_coupled(k, &starts, steps, seed).map_err(err)?;
    Ok(json!({
        "monotone": mono,
        "condition1": c1,
        "initial_states": paths.initial_states,
        "trajectories": paths.trajectories,
        "ordering_violations": paths.ordering_violations(),
        "increment_violations": paths.increment_violations(1e-9),
    }))
}
