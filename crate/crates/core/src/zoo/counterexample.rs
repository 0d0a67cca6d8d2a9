use super::{poisson_weights, Prediction, ZooModel};
use crate::analysis::Distribution;
use crate::error::{Error, Result};
use crate::kernel::FiniteKernel;
use crate::space::OrderedStateSpace;

/// Skeleton of `X_t = min(k + N_t, m)` for a Poisson process `N` of rate
/// `lambda`, observed every `dt`.
///
/// Rows are exact: the Poisson tail beyond `m − i` is absorbed into `m`, so
/// `P(dt)^n = P(n dt)` up to rounding.
pub fn absorbed_poisson(k: u32, m: u32, lambda: f64, dt: f64) -> Result<ZooModel> {
    if k > m {
        return Err(Error::Domain(format!("start {k} exceeds cap {m}")));
    }
    if !(lambda > 0.0 && lambda.is_finite() && dt >= 0.0 && dt.is_finite()) {
        return Err(Error::Domain("rate must be positive and dt >= 0".into()));
    }
    let space = OrderedStateSpace::integers(k as i64, m as i64)?;
    let n = (m - k) as usize + 1;
    let weights = poisson_weights(lambda * dt, 1e-300);
    let kernel = FiniteKernel::from_fn(space, |i| {
        let mut row = vec![0.0; n];
        let room = n - 1 - i;
        let below: f64 = weights.iter().take(room).sum();
        for (j, &w) in weights.iter().take(room).enumerate() {
            row[i + j] = w;
        }
        row[n - 1] += (1.0 - below).max(0.0);
        row
    })?;
    let mut model = ZooModel::new(
        format!("absorbed-poisson(k={k}, m={m}, rate={lambda}, dt={dt})"),
        kernel,
        Prediction::BOTH,
    );
    model.init = Some(Distribution::point(model.kernel.space().clone(), k as f64)?);
    Ok(model)
}

/// The constant process `X_t = ξ`: identity kernel started from the law of `ξ`.
pub fn constant_xi(values: Vec<f64>, probs: Vec<f64>) -> Result<ZooModel> {
    let space = OrderedStateSpace::new(values)?;
    let init = Distribution::new(space.clone(), probs)?;
    let mut model = ZooModel::new("constant-xi", FiniteKernel::identity(space), Prediction::BOTH);
    model.init = Some(init);
    model
        .notes
        .push("every law is invariant; the initial law is the law of xi".into());
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_step_is_identity() {
        assert!(absorbed_poisson(0, 3, 2.0, 0.0).unwrap().kernel.is_identity());
    }

    #[test]
    fn skeleton_powers_match_longer_steps() {
        let a = absorbed_poisson(1, 4, 1.3, 0.25).unwrap().kernel;
        let b = absorbed_poisson(1, 4, 1.3, 1.0).unwrap().kernel;
        assert!(a.n_step(4).max_abs_diff(&b).unwrap() < 1e-14);
    }

    #[test]
    fn constant_xi_has_its_law_attached() {
        let m = constant_xi(vec![0.0, 1.0, 5.0], vec![0.2, 0.5, 0.3]).unwrap();
        assert!(m.kernel.is_identity());
        assert_eq!(m.init.unwrap().mass(), &[0.2, 0.5, 0.3]);
    }
}
