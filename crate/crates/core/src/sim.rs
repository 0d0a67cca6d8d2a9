//! Seeded Monte Carlo through the generalized-inverse coupling
//! `X_n = G(X_{n-1}, U_n)`.
//!
//! Randomness comes from ChaCha8 keyed by the user seed, with one 64-bit
//! stream id per (role, index) pair. A coupled bundle shares a single uniform
//! stream across all of its starting states; independent estimator paths
//! each get their own stream, plus a separate stream for the `X_0` draw.
//! Output depends only on the inputs, never on thread scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::Distribution;
use crate::error::{Error, Result};
use crate::ginv::GeneralizedInverseTable;
use crate::kernel::{FiniteKernel, KernelSequence};

const ROLE_COUPLING: u64 = 1;
const ROLE_PATH: u64 = 2;
const ROLE_INIT: u64 = 3;

/// Independent generator for `(role, index)` under `seed`.
pub fn stream(seed: u64, role: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((role << 48) ^ index);
    rng
}

/// A uniform draw on `(0, 1]`.
#[inline]
pub fn uniform_open_closed<R: Rng>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

/// Paths from several starting states driven by one shared uniform stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoupledPaths {
    pub initial_states: Vec<f64>,
    pub steps: usize,
    /// `trajectories[k][t]` is the state at time `t` of the path started at
    /// `initial_states[k]`.
    pub trajectories: Vec<Vec<f64>>,
    pub seed: u64,
}

impl CoupledPaths {
    /// Count of `(t, k)` with `X_t(x_k) > X_t(x_{k+1})`, for starting states
    /// sorted ascending.
    pub fn ordering_violations(&self) -> usize {
        let order = self.sorted_order();
        (0..=self.steps)
            .map(|t| {
                order
                    .windows(2)
                    .filter(|w| self.trajectories[w[0]][t] > self.trajectories[w[1]][t])
                    .count()
            })
            .sum()
    }

    /// Count of `(t, k)` with `X_t(x) − x < X_t(y) − y` for consecutive `x < y`.
    pub fn increment_violations(&self, eps: f64) -> usize {
        let order = self.sorted_order();
        (0..=self.steps)
            .map(|t| {
                order
                    .windows(2)
                    .filter(|w| {
                        let (a, b) = (w[0], w[1]);
                        let da = self.trajectories[a][t] - self.initial_states[a];
                        let db = self.trajectories[b][t] - self.initial_states[b];
                        da < db - eps
                    })
                    .count()
            })
            .sum()
    }

    fn sorted_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.initial_states.len()).collect();
        order.sort_by(|&a, &b| self.initial_states[a].total_cmp(&self.initial_states[b]));
        order
    }
}

fn start_indices(kernel_space: &crate::space::OrderedStateSpace, xs: &[f64]) -> Result<Vec<usize>> {
    xs.iter()
        .map(|&x| {
            kernel_space
                .index_of(x)
                .ok_or_else(|| Error::Domain(format!("initial state {x} is not a grid state")))
        })
        .collect()
}

/// Runs every starting state through `X_n = G(X_{n-1}, U_n)` with the same
/// `U_1, ..., U_steps`.
pub fn simulate_coupled(
    kernel: &FiniteKernel,
    initial_states: &[f64],
    steps: usize,
    seed: u64,
) -> Result<CoupledPaths> {
    let seq = KernelSequence::new(vec![kernel.clone()])?;
    simulate_coupled_seq(&seq, initial_states, steps, seed)
}

/// As [`simulate_coupled`] for a time-inhomogeneous chain; step `n` uses
/// `seq.at(n)`, cycling through the sequence.
pub fn simulate_coupled_seq(
    seq: &KernelSequence,
    initial_states: &[f64],
    steps: usize,
    seed: u64,
) -> Result<CoupledPaths> {
    let space = seq.space();
    let mut current = start_indices(space, initial_states)?;
    let tables: Vec<GeneralizedInverseTable> =
        seq.kernels().iter().map(GeneralizedInverseTable::new).collect();
    let mut trajectories: Vec<Vec<f64>> = current
        .iter()
        .map(|&i| {
            let mut v = Vec::with_capacity(steps + 1);
            v.push(space.state(i));
            v
        })
        .collect();
    let mut rng = stream(seed, ROLE_COUPLING, 0);
    for n in 1..=steps {
        let u = uniform_open_closed(&mut rng);
        let table = &tables[(n - 1) % tables.len()];
        for (k, idx) in current.iter_mut().enumerate() {
            *idx = table.query_index_unchecked(*idx, u);
            trajectories[k].push(space.state(*idx));
        }
    }
    Ok(CoupledPaths {
        initial_states: initial_states.to_vec(),
        steps,
        trajectories,
        seed,
    })
}

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
    pub n_samples: usize,
}

impl Estimate {
    /// Sample mean and standard error of `xs`.
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n as f64 - 1.0);
        Estimate {
            value: mean,
            std_error: (var / n as f64).sqrt(),
            n_samples: n,
        }
    }

    /// `|value − exact| <= k · std_error`, with a floating-point floor for
    /// zero-variance estimates.
    pub fn agrees_with(&self, exact: f64, k: f64) -> bool {
        let floor = 1e-12 * exact.abs().max(1.0);
        (self.value - exact).abs() <= k * self.std_error + floor
    }

    /// Distance from `exact` in standard errors.
    pub fn z_score(&self, exact: f64) -> f64 {
        let d = (self.value - exact).abs();
        if self.std_error > 0.0 {
            d / self.std_error
        } else if d <= 1e-12 * exact.abs().max(1.0) {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// Independent paths `X_0 ~ init`, stored time-major so that each time slice
/// is contiguous.
#[derive(Debug, Clone)]
pub struct PathEnsemble {
    n_paths: usize,
    len: usize,
    values: Vec<f64>,
    pub seed: u64,
}

fn draw_index(cdf: &[f64], u: f64) -> usize {
    cdf.partition_point(|&c| c < u).min(cdf.len() - 1)
}

impl PathEnsemble {
    /// `n_paths` independent chains of `steps` transitions each.
    pub fn simulate(
        kernel: &FiniteKernel,
        init: &Distribution,
        steps: usize,
        n_paths: usize,
        seed: u64,
    ) -> Result<Self> {
        if n_paths < 2 {
            return Err(Error::Domain("need at least two paths".into()));
        }
        if kernel.space() != init.space() {
            return Err(Error::Shape("initial distribution on a different space".into()));
        }
        let table = GeneralizedInverseTable::new(kernel);
        let mut init_cdf: Vec<f64> = init
            .mass()
            .iter()
            .scan(0.0, |acc, m| {
                *acc += m;
                Some(*acc)
            })
            .collect();
        if let Some(last) = init.mass().iter().rposition(|&m| m > 0.0) {
            init_cdf[last..].iter_mut().for_each(|c| *c = 1.0);
        }
        let len = steps + 1;
        let mut idx = vec![0u32; n_paths * len];
        let run = |(p, path): (usize, &mut [u32])| {
            let mut init_rng = stream(seed, ROLE_INIT, p as u64);
            let mut rng = stream(seed, ROLE_PATH, p as u64);
            let mut x = draw_index(&init_cdf, uniform_open_closed(&mut init_rng));
            path[0] = x as u32;
            for slot in path.iter_mut().skip(1) {
                x = table.query_index_unchecked(x, uniform_open_closed(&mut rng));
                *slot = x as u32;
            }
        };
        #[cfg(feature = "parallel")]
        idx.par_chunks_mut(len).enumerate().for_each(run);
        #[cfg(not(feature = "parallel"))]
        idx.chunks_mut(len).enumerate().for_each(run);
        let states = kernel.space().states();
        let mut values = vec![0.0; n_paths * len];
        for (p, path) in idx.chunks(len).enumerate() {
            for (t, &i) in path.iter().enumerate() {
                values[t * n_paths + p] = states[i as usize];
            }
        }
        Ok(PathEnsemble {
            n_paths,
            len,
            values,
            seed,
        })
    }

    pub fn n_paths(&self) -> usize {
        self.n_paths
    }

    pub fn steps(&self) -> usize {
        self.len - 1
    }

    #[inline]
    pub fn state(&self, path: usize, t: usize) -> f64 {
        self.values[t * self.n_paths + path]
    }

    /// States of every path at time `t`.
    pub fn slice(&self, t: usize) -> &[f64] {
        &self.values[t * self.n_paths..(t + 1) * self.n_paths]
    }

    /// Evaluates `f` at `t = 0..=t_max`; each point is reduced sequentially,
    /// so results do not depend on scheduling.
    fn per_time(&self, t_max: usize, f: impl Fn(usize) -> Estimate + Sync + Send) -> Vec<Estimate> {
        #[cfg(feature = "parallel")]
        {
            (0..=t_max).into_par_iter().map(f).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            (0..=t_max).map(f).collect()
        }
    }

    fn check_horizon(&self, t_max: usize) -> Result<()> {
        if t_max >= self.len {
            return Err(Error::Domain(format!(
                "horizon {t_max} exceeds simulated steps {}",
                self.len - 1
            )));
        }
        Ok(())
    }

    /// Estimates of `E h(X_0, X_t)`, `t = 0..=t_max`.
    pub fn supermod(&self, h: impl Fn(f64, f64) -> f64 + Sync, t_max: usize) -> Result<Vec<Estimate>> {
        self.check_horizon(t_max)?;
        Ok(self.per_time(t_max, |t| {
            let buf: Vec<f64> = self
                .slice(0)
                .iter()
                .zip(self.slice(t))
                .map(|(&x, &y)| h(x, y))
                .collect();
            Estimate::from_samples(&buf)
        }))
    }

    /// Estimates of `E h(X_0, X_t − X_{t+s})`, `t = 0..=t_max`.
    pub fn difference(
        &self,
        h: impl Fn(f64, f64) -> f64 + Sync,
        s: usize,
        t_max: usize,
    ) -> Result<Vec<Estimate>> {
        self.check_horizon(t_max + s)?;
        Ok(self.per_time(t_max, |t| {
            let buf: Vec<f64> = self
                .slice(0)
                .iter()
                .zip(self.slice(t).iter().zip(self.slice(t + s)))
                .map(|(&x, (&y, &z))| h(x, y - z))
                .collect();
            Estimate::from_samples(&buf)
        }))
    }

    fn centred(&self, f: &(impl Fn(f64) -> f64 + ?Sized), t: usize) -> Vec<f64> {
        let vals: Vec<f64> = self.slice(t).iter().map(|&x| f(x)).collect();
        let mean = vals.iter().sum::<f64>() / self.n_paths as f64;
        vals.into_iter().map(|v| v - mean).collect()
    }

    /// Plug-in estimates of `Cov(f1(X_0), f2(X_t))`; standard errors from the
    /// influence values `(a_i − ā)(b_i − b̄)`.
    pub fn covariance(
        &self,
        f1: impl Fn(f64) -> f64,
        f2: impl Fn(f64) -> f64 + Sync,
        t_max: usize,
    ) -> Result<Vec<Estimate>> {
        self.check_horizon(t_max)?;
        let a = self.centred(&f1, 0);
        Ok(self.per_time(t_max, |t| {
            let b = self.centred(&f2, t);
            let psi: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
            Estimate::from_samples(&psi)
        }))
    }

    /// Estimates of `R(t)/R(0)` for `f1 = f2 = id`, with delta-method errors.
    pub fn autocorrelation(&self, t_max: usize) -> Result<Vec<Estimate>> {
        self.check_horizon(t_max)?;
        let a = self.centred(&|x| x, 0);
        let psi0: Vec<f64> = a.iter().map(|x| x * x).collect();
        let c0 = psi0.iter().sum::<f64>() / self.n_paths as f64;
        if c0 <= 0.0 {
            return Err(Error::Domain("zero sample variance at t = 0".into()));
        }
        Ok(self.per_time(t_max, |t| {
            let b = self.centred(&|x| x, t);
            let psi: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
            let ct = psi.iter().sum::<f64>() / self.n_paths as f64;
            let rho = ct / c0;
            let phi: Vec<f64> = psi
                .iter()
                .zip(&psi0)
                .map(|(pt, p0)| (pt - rho * p0) / c0)
                .collect();
            let mut e = Estimate::from_samples(&phi);
            e.value = rho;
            e
        }))
    }
}

/// Monte Carlo `E h(X_0, X_t)` with `X_0 ~ init`.
pub fn mc_supermod_curve(
    kernel: &FiniteKernel,
    init: &Distribution,
    h: impl Fn(f64, f64) -> f64 + Sync,
    t_max: usize,
    n_paths: usize,
    seed: u64,
) -> Result<Vec<Estimate>> {
    PathEnsemble::simulate(kernel, init, t_max, n_paths, seed)?.supermod(h, t_max)
}

/// Monte Carlo `Cov(X_0, X_t)` with plug-in means.
pub fn mc_autocovariance(
    kernel: &FiniteKernel,
    init: &Distribution,
    t_max: usize,
    n_paths: usize,
    seed: u64,
) -> Result<Vec<Estimate>> {
    PathEnsemble::simulate(kernel, init, t_max, n_paths, seed)?.covariance(|x| x, |x| x, t_max)
}
