#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::{Curve, Distribution};
use crate::error::{Error, Result};
use crate::kernel::FiniteKernel;

pub(super) fn same_space(kernel: &FiniteKernel, init: &Distribution) -> Result<()> {
    if kernel.space() != init.space() {
        return Err(Error::Shape(
            "initial distribution lives on a different state space".into(),
        ));
    }
    Ok(())
}

pub(super) fn tabulate(kernel: &FiniteKernel, f: impl Fn(f64) -> f64) -> Vec<f64> {
    kernel.space().states().iter().map(|&x| f(x)).collect()
}

/// Rows `e_x P^t` for each `x` in `starts`, advanced one step at a time.
pub(super) struct RowPropagator<'a> {
    kernel: &'a FiniteKernel,
    pub starts: Vec<usize>,
    pub rows: Vec<Vec<f64>>,
}

impl<'a> RowPropagator<'a> {
    pub fn new(kernel: &'a FiniteKernel, starts: Vec<usize>) -> Self {
        let n = kernel.len();
        let rows = starts
            .iter()
            .map(|&x| {
                let mut r = vec![0.0; n];
                r[x] = 1.0;
                r
            })
            .collect();
        RowPropagator {
            kernel,
            starts,
            rows,
        }
    }

    pub fn step(&mut self) {
        let k = self.kernel;
        #[cfg(feature = "parallel")]
        {
            self.rows.par_iter_mut().for_each(|r| *r = k.push_forward(r));
        }
        #[cfg(not(feature = "parallel"))]
        {
            self.rows.iter_mut().for_each(|r| *r = k.push_forward(r));
        }
    }
}

fn support(init: &Distribution) -> Vec<usize> {
    init.mass()
        .iter()
        .enumerate()
        .filter(|(_, &m)| m > 0.0)
        .map(|(i, _)| i)
        .collect()
}

/// `Cov(f1(X_0), f2(X_t))` for `t = 0..=t_max` with `X_0 ~ init`.
///
/// Uses `Cov = Σ_x init(x) (f1(x) − E f1) (P^t f2c)(x)` with `f2` centred
/// under `init`, which avoids the cancellation of `E[XY] − E[X]E[Y]`.
pub fn covariance_curve(
    kernel: &FiniteKernel,
    init: &Distribution,
    f1: impl Fn(f64) -> f64,
    f2: impl Fn(f64) -> f64,
    t_max: usize,
) -> Result<Curve> {
    same_space(kernel, init)?;
    let pi = init.mass();
    let f1v = tabulate(kernel, f1);
    let mut g = tabulate(kernel, f2);
    let m1: f64 = pi.iter().zip(&f1v).map(|(p, f)| p * f).sum();
    let m2: f64 = pi.iter().zip(&g).map(|(p, f)| p * f).sum();
    g.iter_mut().for_each(|v| *v -= m2);
    let weights: Vec<f64> = pi.iter().zip(&f1v).map(|(p, f)| p * (f - m1)).collect();
    let mut values = Vec::with_capacity(t_max + 1);
    for t in 0..=t_max {
        if t > 0 {
            g = kernel.apply(&g);
        }
        values.push(weights.iter().zip(&g).map(|(w, v)| w * v).sum());
    }
    Curve::from_steps(values, "covariance Cov(f1(X_0), f2(X_t))")
}

/// `E h(X_0, X_t)` for `t = 0..=t_max` with `X_0 ~ init`.
pub fn supermod_curve(
    kernel: &FiniteKernel,
    init: &Distribution,
    h: impl Fn(f64, f64) -> f64,
    t_max: usize,
) -> Result<Curve> {
    same_space(kernel, init)?;
    let states = kernel.space().states();
    let starts = support(init);
    let h_rows: Vec<Vec<f64>> = starts
        .iter()
        .map(|&x| states.iter().map(|&y| h(states[x], y)).collect())
        .collect();
    let mut prop = RowPropagator::new(kernel, starts);
    let mut values = Vec::with_capacity(t_max + 1);
    for t in 0..=t_max {
        if t > 0 {
            prop.step();
        }
        let v: f64 = prop
            .starts
            .iter()
            .zip(&prop.rows)
            .zip(&h_rows)
            .map(|((&x, row), hx)| {
                init.mass()[x] * row.iter().zip(hx).map(|(p, h)| p * h).sum::<f64>()
            })
            .sum();
        values.push(v);
    }
    Curve::from_steps(values, "supermodular expectation E h(X_0, X_t)")
}

/// `E h(X_0, X_t − X_{t+s})` for `t = 0..=t_max` with `X_0 ~ init`.
pub fn difference_curve(
    kernel: &FiniteKernel,
    init: &Distribution,
    h: impl Fn(f64, f64) -> f64,
    s: u32,
    t_max: usize,
) -> Result<Curve> {
    same_space(kernel, init)?;
    if s == 0 {
        return Err(Error::Domain("lag s must be positive".into()));
    }
    let states = kernel.space().states();
    let n = states.len();
    let ps = kernel.n_step(s);
    let starts = support(init);
    // w[k][y] = Σ_z P^s(y, z) h(x_k, y − z) for the k-th start x_k
    let w: Vec<Vec<f64>> = starts
        .iter()
        .map(|&x| {
            (0..n)
                .map(|y| {
                    ps.row(y)
                        .iter()
                        .zip(states)
                        .map(|(&p, &z)| if p == 0.0 { 0.0 } else { p * h(states[x], states[y] - z) })
                        .sum()
                })
                .collect()
        })
        .collect();
    let mut prop = RowPropagator::new(kernel, starts);
    let mut values = Vec::with_capacity(t_max + 1);
    for t in 0..=t_max {
        if t > 0 {
            prop.step();
        }
        let v: f64 = prop
            .starts
            .iter()
            .zip(&prop.rows)
            .zip(&w)
            .map(|((&x, row), wx)| {
                init.mass()[x] * row.iter().zip(wx).map(|(p, w)| p * w).sum::<f64>()
            })
            .sum();
        values.push(v);
    }
    Curve::from_steps(values, format!("difference expectation E h(X_0, X_t - X_(t+{s}))"))
}
