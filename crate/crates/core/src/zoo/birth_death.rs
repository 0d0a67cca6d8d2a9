use serde::{Deserialize, Serialize};

use super::{uniformize, Prediction, SparseRates, ZooModel};
use crate::error::{Error, Result};
use crate::kernel::{FiniteKernel, DEFAULT_ROW_TOL};
use crate::matrix::Matrix;
use crate::sim::simulate_coupled;
use crate::space::OrderedStateSpace;

/// Birth and death rates on `{0, ..., N}`.
///
/// A birth rate at the top state has nowhere to go on the finite grid and is
/// ignored; [`BirthDeathSpec::effective_lambdas`] reports what is used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BirthDeathSpec {
    pub lambdas: Vec<f64>,
    pub mus: Vec<f64>,
    #[serde(default)]
    pub truncation_note: String,
}

impl BirthDeathSpec {
    pub fn new(lambdas: Vec<f64>, mus: Vec<f64>) -> Result<Self> {
        let spec = BirthDeathSpec {
            lambdas,
            mus,
            truncation_note: String::new(),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Constant rates `λ` and `μ` (with `μ_0 = 0`) on `{0, ..., n − 1}`.
    pub fn constant(lambda: f64, mu: f64, n: usize) -> Result<Self> {
        let mut mus = vec![mu; n];
        if let Some(m) = mus.first_mut() {
            *m = 0.0;
        }
        Self::new(vec![lambda; n], mus)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.lambdas.len();
        if n < 2 || self.mus.len() != n {
            return Err(Error::Shape("need matching birth and death rates for at least two states".into()));
        }
        if self
            .lambdas
            .iter()
            .chain(&self.mus)
            .any(|r| !(*r >= 0.0 && r.is_finite()))
        {
            return Err(Error::Domain("rates must be finite and >= 0".into()));
        }
        if self.mus[0] != 0.0 {
            return Err(Error::Domain("death rate at the minimal state must be 0".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    pub fn effective_lambdas(&self) -> Vec<f64> {
        let mut l = self.lambdas.clone();
        if let Some(top) = l.last_mut() {
            *top = 0.0;
        }
        l
    }

    /// `max_i (λ_i + μ_i)` over the effective rates.
    pub fn max_rate(&self) -> f64 {
        self.effective_lambdas()
            .iter()
            .zip(&self.mus)
            .map(|(l, m)| l + m)
            .fold(0.0, f64::max)
    }

    /// `λ` nonincreasing and `μ` nondecreasing.
    pub fn predicts_condition1(&self) -> bool {
        let l = self.effective_lambdas();
        l.windows(2).all(|w| w[1] <= w[0]) && self.mus.windows(2).all(|w| w[1] >= w[0])
    }

    fn rates(&self) -> SparseRates {
        let l = self.effective_lambdas();
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut row = Vec::with_capacity(2);
                if i + 1 < n && l[i] > 0.0 {
                    row.push((i + 1, l[i]));
                }
                if i > 0 && self.mus[i] > 0.0 {
                    row.push((i - 1, self.mus[i]));
                }
                row
            })
            .collect()
    }
}

/// Skeleton step with `‖Q Δt‖∞ <= 0.1`.
pub fn default_skeleton_step(spec: &BirthDeathSpec) -> f64 {
    let lambda = spec.max_rate();
    if lambda == 0.0 {
        1.0
    } else {
        0.05 / lambda
    }
}

/// `P(t) = exp(Q t)` of the birth–death chain, by uniformization.
///
/// Stochastic monotonicity is always predicted; Condition 1 is predicted to
/// hold when `λ` is nonincreasing and `μ` nondecreasing. A violating profile
/// fails Condition 1 for small `t` but may pass at larger `t`, so no
/// prediction is attached to it.
pub fn birth_death_skeleton(spec: &BirthDeathSpec, t: f64, trunc_tol: f64) -> Result<ZooModel> {
    spec.validate()?;
    let space = OrderedStateSpace::integers(0, spec.len() as i64 - 1)?;
    let (matrix, tail) = uniformize(&spec.rates(), t, trunc_tol)?;
    let kernel = FiniteKernel::from_matrix(space, matrix, DEFAULT_ROW_TOL)?;
    let predicted = Prediction {
        monotone: Some(true),
        condition1: spec.predicts_condition1().then_some(true),
    };
    let mut model = ZooModel::new(format!("birth-death(n={}, t={t})", spec.len()), kernel, predicted);
    model.truncation_mass = tail;
    if spec.max_rate() == 0.0 {
        model.notes.push("all rates vanish: identity kernel".into());
    }
    if spec.lambdas.last().is_some_and(|&l| l > 0.0) {
        model
            .notes
            .push("birth rate at the top state ignored; the top state stands in for +inf".into());
    }
    if !spec.truncation_note.is_empty() {
        model.notes.push(spec.truncation_note.clone());
    }
    Ok(model)
}

/// Generator of an ordered pair `(X¹, X²)` of birth–death chains on the full
/// product grid. Pairs with `i <= j` move as follows: off the diagonal both
/// coordinates move independently; on the diagonal the coordinates jump up
/// together at `λ¹_i`, the upper one alone at `λ²_i − λ¹_i`, down together at
/// `μ²_i`, and the lower one alone at `μ¹_i − μ²_i`. Pairs with `i > j` are
/// given no rates.
#[derive(Debug, Clone, PartialEq)]
pub struct JointBDGenerator {
    n: usize,
    rates: SparseRates,
}

/// Builds the ordered coupling of two birth–death chains; requires
/// `λ¹_i <= λ²_i` and `μ¹_i >= μ²_i` at every state.
pub fn bd_coupled_generator(spec1: &BirthDeathSpec, spec2: &BirthDeathSpec) -> Result<JointBDGenerator> {
    spec1.validate()?;
    spec2.validate()?;
    let n = spec1.len();
    if spec2.len() != n {
        return Err(Error::Shape("the two chains need the same number of states".into()));
    }
    let (l1, l2) = (spec1.effective_lambdas(), spec2.effective_lambdas());
    let (m1, m2) = (&spec1.mus, &spec2.mus);
    for i in 0..n {
        if l1[i] > l2[i] {
            return Err(Error::Ordering {
                index: i,
                message: format!("birth rate {} of the lower chain exceeds {}", l1[i], l2[i]),
            });
        }
        if m1[i] < m2[i] {
            return Err(Error::Ordering {
                index: i,
                message: format!("death rate {} of the lower chain is below {}", m1[i], m2[i]),
            });
        }
    }
    let idx = |i: usize, j: usize| i * n + j;
    let mut rates: SparseRates = vec![Vec::new(); n * n];
    for i in 0..n {
        for j in i..n {
            let row = &mut rates[idx(i, j)];
            let mut add = |to: usize, r: f64| {
                if r > 0.0 {
                    row.push((to, r));
                }
            };
            if i < j {
                if i + 1 < n {
                    add(idx(i + 1, j), l1[i]);
                }
                if i > 0 {
                    add(idx(i - 1, j), m1[i]);
                }
                if j + 1 < n {
                    add(idx(i, j + 1), l2[j]);
                }
                add(idx(i, j - 1), m2[j]);
            } else {
                if i + 1 < n {
                    add(idx(i + 1, i + 1), l1[i]);
                    add(idx(i, i + 1), l2[i] - l1[i]);
                }
                if i > 0 {
                    add(idx(i - 1, i - 1), m2[i]);
                    add(idx(i - 1, i), m1[i] - m2[i]);
                }
            }
        }
    }
    Ok(JointBDGenerator { n, rates })
}

impl JointBDGenerator {
    /// Number of states of each coordinate.
    pub fn marginal_len(&self) -> usize {
        self.n
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n + j
    }

    pub fn pair(&self, k: usize) -> (usize, usize) {
        (k / self.n, k % self.n)
    }

    /// Dense generator with diagonal `−Σ_{k≠l} q(k, l)`.
    pub fn generator(&self) -> Matrix {
        let m = self.n * self.n;
        let mut q = Matrix::zeros(m);
        for (k, row) in self.rates.iter().enumerate() {
            let mut exit = 0.0;
            for &(l, r) in row {
                q.set(k, l, q.get(k, l) + r);
                exit += r;
            }
            q.set(k, k, q.get(k, k) - exit);
        }
        q
    }

    /// True when some rate leads from `{i <= j}` to `{i > j}`.
    pub fn leaks_out_of_order(&self) -> bool {
        self.rates.iter().enumerate().any(|(k, row)| {
            let (i, j) = self.pair(k);
            i <= j && row.iter().any(|&(l, _)| {
                let (a, b) = self.pair(l);
                a > b
            })
        })
    }

    /// Uniformized skeleton on the pair index `i · n + j` and its dropped
    /// Poisson tail.
    pub fn skeleton(&self, t: f64, trunc_tol: f64) -> Result<(FiniteKernel, f64)> {
        let space = OrderedStateSpace::integers(0, (self.n * self.n) as i64 - 1)?;
        let (matrix, tail) = uniformize(&self.rates, t, trunc_tol)?;
        Ok((FiniteKernel::from_matrix(space, matrix, DEFAULT_ROW_TOL)?, tail))
    }

    /// Law of coordinate `coord` (0 or 1) after one skeleton step from `(i, j)`.
    pub fn project_row(&self, skeleton: &FiniteKernel, i: usize, j: usize, coord: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (l, &p) in skeleton.row(self.index(i, j)).iter().enumerate() {
            let (a, b) = self.pair(l);
            out[if coord == 0 { a } else { b }] += p;
        }
        out
    }

    /// Largest row-wise deviation, over pairs `i <= j`, between the projected
    /// skeleton and the marginal skeletons `p1` (first coordinate) and `p2`.
    pub fn projection_error(&self, skeleton: &FiniteKernel, p1: &FiniteKernel, p2: &FiniteKernel) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                for (coord, marginal, from) in [(0, p1, i), (1, p2, j)] {
                    let proj = self.project_row(skeleton, i, j, coord);
                    for (a, b) in proj.iter().zip(marginal.row(from)) {
                        worst = worst.max((a - b).abs());
                    }
                }
            }
        }
        worst
    }

    /// Runs the skeleton chain from `start` and decodes the pairs.
    pub fn simulate(
        &self,
        skeleton: &FiniteKernel,
        start: (usize, usize),
        steps: usize,
        seed: u64,
    ) -> Result<Vec<(usize, usize)>> {
        let k = self.index(start.0, start.1) as f64;
        let paths = simulate_coupled(skeleton, &[k], steps, seed)?;
        Ok(paths.trajectories[0].iter().map(|&x| self.pair(x as usize)).collect())
    }
}
