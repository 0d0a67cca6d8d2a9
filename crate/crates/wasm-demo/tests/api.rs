use monotone_markov_wasm::api;
use monotone_markov_wasm::{capped_poisson, coupled_walk};
use serde_json::Value;

#[test]
fn walk_autocorrelation_starts_at_one_and_is_certified() {
    let v = api::walk_autocorrelation(0.3, 20, 30, 2000, 1).unwrap();
    let exact: Vec<f64> = serde_json::from_value(v["exact"].clone()).unwrap();
    assert_eq!(exact.len(), 31);
    assert!((exact[0] - 1.0).abs() < 1e-12);
    assert_eq!(v["certificate"]["convex"], true);
    assert_eq!(v["certificate"]["nonincreasing"], true);
    assert_eq!(v["monotone"]["passed"], true);
    let mc: Vec<f64> = serde_json::from_value(v["mc"]["value"].clone()).unwrap();
    let se: Vec<f64> = serde_json::from_value(v["mc"]["std_error"].clone()).unwrap();
    for t in 1..exact.len() {
        assert!((mc[t] - exact[t]).abs() <= 5.0 * se[t] + 1e-12, "t={t}");
    }
    // no paths requested: exact curve only
    assert!(api::walk_autocorrelation(0.3, 20, 30, 0, 1).unwrap()["mc"].is_null());
}

#[test]
fn capped_poisson_variance_rises_then_falls() {
    let v: Value = serde_json::from_str(&capped_poisson(2, 1.0, 0.25, 32)).unwrap();
    assert_eq!(v["variance_certificate"]["nonincreasing"], false);
    assert_eq!(v["variance_certificate"]["nondecreasing"], false);
    assert_eq!(v["mean_certificate"]["concave"], true);
    assert_eq!(v["times"][4], 1.0);
}

#[test]
fn coupled_walk_reports_checks_and_ordered_paths() {
    let p = vec![0.4, 0.35, 0.3, 0.25, 0.0];
    let q = vec![0.0, 0.3, 0.35, 0.4, 0.45];
    let v: Value = serde_json::from_str(&coupled_walk(p, q, 200, 3)).unwrap();
    assert_eq!(v["condition1"]["passed"], true);
    assert_eq!(v["ordering_violations"], 0);
    assert_eq!(v["increment_violations"], 0);
    assert_eq!(v["trajectories"].as_array().unwrap().len(), 5);

    // up-probability jumping from 0.1 to 0.8 breaks monotonicity
    let bad: Value = serde_json::from_str(&coupled_walk(vec![0.1, 0.8, 0.0], vec![0.0, 0.1, 0.9], 10, 3)).unwrap();
    assert_eq!(bad["monotone"]["passed"], false);
    assert!(bad["monotone"]["witness"].is_object());
}

#[test]
fn bad_input_returns_an_error_object() {
    let v: Value = serde_json::from_str(&coupled_walk(vec![0.9], vec![0.5], 10, 1)).unwrap();
    assert!(v["error"].is_string());
    let v: Value = serde_json::from_str(&capped_poisson(2, -1.0, 0.25, 10)).unwrap();
    assert!(v["error"].is_string());
    assert!(api::walk_autocorrelation(0.3, 0, 10, 0, 1).is_err());
    assert!(api::walk_autocorrelation(0.3, 10, 10, 1_000_000, 1).is_err());
}
