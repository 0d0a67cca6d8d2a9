use super::curves::RowPropagator;
use super::Curve;
use crate::check::{check_stoch_monotone, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::kernel::FiniteKernel;

/// Verifies the start-below-the-future hypothesis `x0 <= X_t`: the row at
/// `x0` carries no mass strictly below `x0` and the kernel is stochastically
/// monotone (induction then gives every `t`).
fn start_index(kernel: &FiniteKernel, x0: f64) -> Result<usize> {
    let i = kernel
        .space()
        .index_of(x0)
        .ok_or_else(|| Error::Domain(format!("{x0} is not a grid state")))?;
    let below: f64 = kernel.row(i)[..i].iter().sum();
    if below > 0.0 {
        return Err(Error::Precondition(format!(
            "row at x0 = {x0} puts mass {below:e} strictly below x0"
        )));
    }
    let mono = check_stoch_monotone(kernel, DEFAULT_TOL);
    if !mono.passed {
        return Err(Error::Precondition(format!(
            "kernel is not stochastically monotone: {mono}"
        )));
    }
    Ok(i)
}

fn marginal_moments(kernel: &FiniteKernel, x0: f64, t_max: usize) -> Result<Vec<(f64, f64)>> {
    let i = start_index(kernel, x0)?;
    let states = kernel.space().states();
    let mut prop = RowPropagator::new(kernel, vec![i]);
    let mut out = Vec::with_capacity(t_max + 1);
    for t in 0..=t_max {
        if t > 0 {
            prop.step();
        }
        let row = &prop.rows[0];
        let mean: f64 = row.iter().zip(states).map(|(p, x)| p * x).sum();
        let var: f64 = row
            .iter()
            .zip(states)
            .map(|(p, x)| p * (x - mean) * (x - mean))
            .sum();
        out.push((mean, var));
    }
    Ok(out)
}

/// `E_{x0} X_t` for `t = 0..=t_max`.
pub fn transient_mean_curve(kernel: &FiniteKernel, x0: f64, t_max: usize) -> Result<Curve> {
    let m = marginal_moments(kernel, x0, t_max)?;
    Curve::from_steps(
        m.into_iter().map(|(mean, _)| mean).collect(),
        format!("transient mean E X_t from x0={x0}"),
    )
}

/// `Var_{x0}(X_t)` for `t = 0..=t_max`. No shape is claimed for this curve.
pub fn transient_variance_curve(kernel: &FiniteKernel, x0: f64, t_max: usize) -> Result<Curve> {
    let m = marginal_moments(kernel, x0, t_max)?;
    Curve::from_steps(
        m.into_iter().map(|(_, var)| var).collect(),
        format!("transient variance Var X_t from x0={x0}"),
    )
}

/// `E_{x0} h(X_s, X_t)` as a function of `s = 0..=t`.
pub fn transient_pair_profile(
    kernel: &FiniteKernel,
    x0: f64,
    h: impl Fn(f64, f64) -> f64,
    t: u32,
) -> Result<Curve> {
    transient_profile(kernel, x0, t, 0, |y, z, _| h(y, z))
}

/// `E_{x0} h(X_s, X_t − X_{t+δ})` as a function of `s = 0..=t`.
pub fn transient_difference_profile(
    kernel: &FiniteKernel,
    x0: f64,
    h: impl Fn(f64, f64) -> f64,
    t: u32,
    delta: u32,
) -> Result<Curve> {
    if delta == 0 {
        return Err(Error::Domain("delta must be positive".into()));
    }
    transient_profile(kernel, x0, t, delta, |y, z, w| h(y, z - w))
}

/// Sums `μ_s(y) P^{t-s}(y, z) P^δ(z, w) g(y, z, w)` over `y, z, w` for each `s`.
fn transient_profile(
    kernel: &FiniteKernel,
    x0: f64,
    t: u32,
    delta: u32,
    g: impl Fn(f64, f64, f64) -> f64,
) -> Result<Curve> {
    let i = start_index(kernel, x0)?;
    let s = kernel.space().states();
    let n = s.len();
    let pd = kernel.n_step(delta);
    // inner[y][z] = Σ_w P^δ(z, w) g(y, z, w)
    let inner: Vec<Vec<f64>> = (0..n)
        .map(|y| {
            (0..n)
                .map(|z| {
                    pd.row(z)
                        .iter()
                        .enumerate()
                        .filter(|(_, &p)| p > 0.0)
                        .map(|(w, &p)| p * g(s[y], s[z], s[w]))
                        .sum()
                })
                .collect()
        })
        .collect();
    let mut powers = vec![FiniteKernel::identity(kernel.space().clone())];
    powers.extend(kernel.powers(t));
    let mut prop = RowPropagator::new(kernel, vec![i]);
    let mut values = Vec::with_capacity(t as usize + 1);
    for step in 0..=t {
        if step > 0 {
            prop.step();
        }
        let mu = &prop.rows[0];
        let pt = &powers[(t - step) as usize];
        let mut v = 0.0;
        for y in 0..n {
            if mu[y] == 0.0 {
                continue;
            }
            let row = pt.row(y);
            v += mu[y] * row.iter().zip(&inner[y]).map(|(p, q)| p * q).sum::<f64>();
        }
        values.push(v);
    }
    let what = if delta == 0 {
        format!("E h(X_s, X_{t}) from x0={x0}")
    } else {
        format!("E h(X_s, X_{t} - X_{}) from x0={x0}", t + delta)
    };
    Curve::from_steps(values, what)
}
