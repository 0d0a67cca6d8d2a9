//! Reference models. Each constructor returns a [`ZooModel`]: the kernel, the
//! check verdicts the theory predicts for it, and how much probability mass
//! the finite truncation moved.

mod battery;
mod birth_death;
mod counterexample;
mod storage;
mod walks;

use serde::{Deserialize, Serialize};

use crate::analysis::Distribution;
use crate::error::{Error, Result};
use crate::kernel::FiniteKernel;
use crate::matrix::Matrix;

pub use battery::standard_battery;
pub use birth_death::{
    bd_coupled_generator, birth_death_skeleton, default_skeleton_step, BirthDeathSpec,
    JointBDGenerator,
};
pub use counterexample::{absorbed_poisson, constant_xi};
pub use storage::{dam_skeleton, shot_noise_skeleton, GridRounding, JumpDistribution};
pub use walks::{reflected_walk, state_dependent_walk, two_sided_reflected_walk, IncrementDistribution, WalkSpec};

/// Poisson-tail cutoff used by uniformization unless overridden.
pub const DEFAULT_TRUNC_TOL: f64 = 1e-12;

/// Verdicts implied by the theory. `None` means no prediction is made for
/// these parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub monotone: Option<bool>,
    pub condition1: Option<bool>,
}

impl Prediction {
    pub const BOTH: Prediction = Prediction {
        monotone: Some(true),
        condition1: Some(true),
    };
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZooModel {
    pub name: String,
    pub kernel: FiniteKernel,
    pub predicted: Prediction,
    /// Largest per-row probability redirected by truncation of the state
    /// space or of a series.
    pub truncation_mass: f64,
    /// Preferred initial law; `None` means the stationary law.
    pub init: Option<Distribution>,
    pub notes: Vec<String>,
}

impl ZooModel {
    fn new(name: impl Into<String>, kernel: FiniteKernel, predicted: Prediction) -> Self {
        ZooModel {
            name: name.into(),
            kernel,
            predicted,
            truncation_mass: 0.0,
            init: None,
            notes: Vec::new(),
        }
    }
}

/// Poisson(mean) probabilities `w_0, ..., w_K` with `K` the first index past
/// the mean at which the remaining tail is at most `tail_tol`.
///
/// Weights are built by the ratio recurrence outward from the mode and
/// normalized by their total, which avoids underflow of `e^{-mean}` and the
/// rounding drift of log-factorials.
pub fn poisson_weights(mean: f64, tail_tol: f64) -> Vec<f64> {
    if mean == 0.0 {
        return vec![1.0];
    }
    let mode = mean.floor() as usize;
    let mut w = vec![0.0; mode + 1];
    w[mode] = 1.0;
    for k in (0..mode).rev() {
        w[k] = w[k + 1] * (k + 1) as f64 / mean;
    }
    let mut k = mode;
    loop {
        let next = w[k] * mean / (k + 1) as f64;
        if next < 1e-20 * w[mode] && (k + 1) as f64 > mean {
            break;
        }
        w.push(next);
        k += 1;
    }
    // summing from the smallest terms up keeps the total accurate
    let total: f64 = w.iter().rev().sum::<f64>();
    w.iter_mut().for_each(|v| *v /= total);
    let mut tail: f64 = 0.0;
    let mut cut = w.len();
    for (i, v) in w.iter().enumerate().rev() {
        if tail + v > tail_tol || (i as f64) <= mean {
            break;
        }
        tail += v;
        cut = i;
    }
    w.truncate(cut);
    w
}

/// Sparse generator rows: `(column, rate)` off-diagonal entries per state.
pub(crate) type SparseRates = Vec<Vec<(usize, f64)>>;

/// `exp(Q t)` by uniformization: `Σ_k Poisson(Λt)_k · P_u^k` with
/// `P_u = I + Q / Λ`, cut where the Poisson tail is at most `trunc_tol`.
/// Returns the matrix and the dropped tail mass. Rows are rescaled by the
/// retained mass so each sums to one.
pub(crate) fn uniformize(rates: &SparseRates, t: f64, trunc_tol: f64) -> Result<(Matrix, f64)> {
    let n = rates.len();
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("time {t} must be positive and finite")));
    }
    let exit: Vec<f64> = rates.iter().map(|r| r.iter().map(|(_, q)| q).sum()).collect();
    let lambda = exit.iter().cloned().fold(0.0, f64::max);
    if lambda == 0.0 {
        return Ok((Matrix::identity(n), 0.0));
    }
    // P_u rows, including the diagonal
    let pu: SparseRates = rates
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<(usize, f64)> = r.iter().map(|&(j, q)| (j, q / lambda)).collect();
            row.push((i, 1.0 - exit[i] / lambda));
            row
        })
        .collect();
    let weights = poisson_weights(lambda * t, trunc_tol);
    let kept: f64 = weights.iter().sum();
    let mut power = Matrix::identity(n);
    let mut acc = Matrix::zeros(n);
    for (k, &w) in weights.iter().enumerate() {
        if k > 0 {
            power = sparse_right_mul(&power, &pu);
        }
        for (a, p) in acc.as_mut_slice().iter_mut().zip(power.as_slice()) {
            *a += w * p;
        }
    }
    for i in 0..n {
        acc.row_mut(i).iter_mut().for_each(|v| *v /= kept);
    }
    Ok((acc, 1.0 - kept))
}

fn sparse_right_mul(m: &Matrix, sparse: &SparseRates) -> Matrix {
    let n = m.dim();
    let mut out = Matrix::zeros(n);
    for i in 0..n {
        let src = m.row(i);
        let dst = out.row_mut(i);
        for (k, &v) in src.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            for &(j, p) in &sparse[k] {
                dst[j] += v * p;
            }
        }
    }
    out
}
