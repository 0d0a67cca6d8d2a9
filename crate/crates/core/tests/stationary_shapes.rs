use monotone_markov::zoo::{two_sided_reflected_walk, IncrementDistribution};
use monotone_markov::{certify_shape, covariance_curve, stationary, FiniteKernel};

/// `Cov(f(X_0), g(X_t))` under `π` by summing over the joint law of
/// `(X_0, X_t)` built from explicit matrix powers.
fn covariance_oracle(k: &FiniteKernel, pi: &[f64], f: &dyn Fn(f64) -> f64, g: &dyn Fn(f64) -> f64, t: u32) -> f64 {
    let pt = k.n_step(t);
    let s = k.space().states();
    let n = s.len();
    let (mut ef, mut eg, mut efg) = (0.0, 0.0, 0.0);
    for i in 0..n {
        ef += pi[i] * f(s[i]);
        for j in 0..n {
            let w = pi[i] * pt.prob(i, j);
            eg += w * g(s[j]);
            efg += w * f(s[i]) * g(s[j]);
        }
    }
    efg - ef * eg
}

fn walk() -> FiniteKernel {
    let inc = IncrementDistribution::simple(0.5).unwrap();
    two_sided_reflected_walk(&inc, 5).unwrap().kernel
}

#[test]
fn covariance_with_identity_is_convex() {
    let k = walk();
    let pi = stationary(&k, 1e-11).unwrap();
    for c in [-2.0, 0.0, 3.0] {
        let step = move |x: f64| if x >= c { 1.0 } else { 0.0 };
        let curve = covariance_curve(&k, &pi, step, |x| x, 40).unwrap();
        for t in [0, 1, 5, 20] {
            let oracle = covariance_oracle(&k, pi.mass(), &step, &|x| x, t);
            assert!((curve.values[t as usize] - oracle).abs() < 1e-12);
        }
        let cert = certify_shape(&curve, 1e-10);
        assert!(cert.nonnegative && cert.nonincreasing && cert.convex, "c={c}: {cert:?}");
    }
}

/// With a step in the second slot the covariance is still nonnegative and
/// nonincreasing but need not be convex; this walk bends the wrong way at
/// small lags.
#[test]
fn covariance_with_step_can_be_concave() {
    let k = walk();
    let pi = stationary(&k, 1e-11).unwrap();
    let step = |x: f64| if x >= 4.0 { 1.0 } else { 0.0 };
    let curve = covariance_curve(&k, &pi, step, step, 40).unwrap();
    for t in 0..6 {
        let oracle = covariance_oracle(&k, pi.mass(), &step, &step, t);
        assert!((curve.values[t as usize] - oracle).abs() < 1e-12);
    }
    let cert = certify_shape(&curve, 1e-10);
    assert!(cert.nonnegative && cert.nonincreasing);
    assert!(!cert.convex);
    let v = &curve.values;
    let worst = (1..v.len() - 1).map(|t| v[t + 1] - 2.0 * v[t] + v[t - 1]).fold(f64::INFINITY, f64::min);
    assert!(worst < -1e-2, "worst second difference {worst}");
}
