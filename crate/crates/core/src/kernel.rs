use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::space::OrderedStateSpace;

pub const DEFAULT_ROW_TOL: f64 = 1e-12;

/// A row-stochastic transition matrix over an [`OrderedStateSpace`].
///
/// Row `i` is the law `p(x_i, ·)`. Rows off by at most `row_tol` from
/// summing to one are renormalized at construction; anything worse is rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KernelRepr", into = "KernelRepr")]
pub struct FiniteKernel {
    space: OrderedStateSpace,
    matrix: Matrix,
    row_tol: f64,
}

#[derive(Serialize, Deserialize)]
struct KernelRepr {
    states: Vec<f64>,
    rows: Vec<Vec<f64>>,
    #[serde(default = "default_row_tol")]
    row_tol: f64,
}

fn default_row_tol() -> f64 {
    DEFAULT_ROW_TOL
}

impl TryFrom<KernelRepr> for FiniteKernel {
    type Error = Error;

    fn try_from(r: KernelRepr) -> Result<Self> {
        FiniteKernel::with_tolerance(OrderedStateSpace::new(r.states)?, r.rows, r.row_tol)
    }
}

impl From<FiniteKernel> for KernelRepr {
    fn from(k: FiniteKernel) -> Self {
        KernelRepr {
            states: k.space.states().to_vec(),
            rows: k.matrix.to_rows(),
            row_tol: k.row_tol,
        }
    }
}

impl FiniteKernel {
    pub fn new(space: OrderedStateSpace, rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::with_tolerance(space, rows, DEFAULT_ROW_TOL)
    }

    pub fn with_tolerance(
        space: OrderedStateSpace,
        rows: Vec<Vec<f64>>,
        row_tol: f64,
    ) -> Result<Self> {
        let n = space.len();
        if rows.len() != n {
            return Err(Error::Shape(format!("{} rows for {n} states", rows.len())));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::Shape(format!(
                "row {i} has {} entries, expected {n}",
                r.len()
            )));
        }
        Self::from_matrix(space, Matrix::from_rows(&rows), row_tol)
    }

    pub fn from_matrix(space: OrderedStateSpace, mut matrix: Matrix, row_tol: f64) -> Result<Self> {
        let n = space.len();
        if matrix.dim() != n {
            return Err(Error::Shape(format!(
                "{}x{} matrix for {n} states",
                matrix.dim(),
                matrix.dim()
            )));
        }
        if !(row_tol >= 0.0 && row_tol.is_finite()) {
            return Err(Error::InvalidKernel(format!("row_tol must be finite and >= 0, got {row_tol}")));
        }
        for i in 0..n {
            let row = matrix.row_mut(i);
            for (j, p) in row.iter_mut().enumerate() {
                if !p.is_finite() || *p < -row_tol || *p > 1.0 + row_tol {
                    return Err(Error::InvalidKernel(format!(
                        "entry ({i},{j}) = {p} outside [0,1]"
                    )));
                }
                *p = p.clamp(0.0, 1.0);
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > row_tol {
                return Err(Error::InvalidKernel(format!(
                    "row {i} sums to {sum:.17} (tolerance {row_tol:e})"
                )));
            }
            if sum != 1.0 {
                row.iter_mut().for_each(|p| *p /= sum);
            }
        }
        Ok(FiniteKernel {
            space,
            matrix,
            row_tol,
        })
    }

    /// Build row `i` from a closure returning the full probability vector.
    pub fn from_fn(
        space: OrderedStateSpace,
        mut row: impl FnMut(usize) -> Vec<f64>,
    ) -> Result<Self> {
        let rows = (0..space.len()).map(&mut row).collect();
        Self::new(space, rows)
    }

    pub fn identity(space: OrderedStateSpace) -> Self {
        let n = space.len();
        FiniteKernel {
            space,
            matrix: Matrix::identity(n),
            row_tol: DEFAULT_ROW_TOL,
        }
    }

    #[inline]
    pub fn space(&self) -> &OrderedStateSpace {
        &self.space
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.space.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn row_tol(&self) -> f64 {
        self.row_tol
    }

    #[inline]
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        self.matrix.row(i)
    }

    #[inline]
    pub fn prob(&self, i: usize, j: usize) -> f64 {
        self.matrix.get(i, j)
    }

    /// Tail `p(x_i, (x_j, ∞))`, summed from the top for accuracy.
    pub fn tail(&self, i: usize, j: usize) -> f64 {
        self.row(i)[j + 1..].iter().rev().sum()
    }

    pub fn is_identity(&self) -> bool {
        (0..self.len()).all(|i| self.prob(i, i) == 1.0)
    }

    /// Kernel of two steps: first `self`, then `next`.
    pub fn compose(&self, next: &FiniteKernel) -> Result<FiniteKernel> {
        if self.space != next.space {
            return Err(Error::Shape(
                "cannot compose kernels over different state spaces".into(),
            ));
        }
        let product = self.matrix.matmul(&next.matrix);
        FiniteKernel::from_matrix(
            self.space.clone(),
            product,
            self.row_tol + next.row_tol,
        )
    }

    /// `n`-fold composition; `n = 0` is the identity kernel.
    pub fn n_step(&self, n: u32) -> FiniteKernel {
        let mut result: Option<FiniteKernel> = None;
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.compose(&base).expect("same space"),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base).expect("same space");
            }
        }
        match result {
            Some(mut r) => {
                // Tolerance budget grows linearly in the step count.
                r.row_tol = self.row_tol * n as f64;
                r
            }
            None => FiniteKernel::identity(self.space.clone()),
        }
    }

    /// Successive powers `P^1, ..., P^n_max`.
    pub fn powers(&self, n_max: u32) -> Vec<FiniteKernel> {
        let mut out = Vec::with_capacity(n_max as usize);
        let mut cur = self.clone();
        for n in 1..=n_max {
            if n > 1 {
                cur = cur.compose(self).expect("same space");
            }
            out.push(cur.clone());
        }
        out
    }

    /// Expected value of `f(X_1)` from each starting state: `P f`.
    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        self.matrix.mul_vec(f)
    }

    /// Distribution after one step from `mass`: `mass P`.
    pub fn push_forward(&self, mass: &[f64]) -> Vec<f64> {
        self.matrix.vec_mul(mass)
    }

    /// Largest absolute entry-wise difference; `None` if spaces differ.
    pub fn max_abs_diff(&self, other: &FiniteKernel) -> Option<f64> {
        (self.space == other.space).then(|| self.matrix.max_abs_diff(&other.matrix))
    }
}

/// Possibly time-dependent kernels `p_1, p_2, ...` over one shared space.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSequence {
    kernels: Vec<FiniteKernel>,
}

impl KernelSequence {
    pub fn new(kernels: Vec<FiniteKernel>) -> Result<Self> {
        let first = kernels
            .first()
            .ok_or_else(|| Error::Shape("kernel sequence is empty".into()))?;
        if let Some(i) = kernels.iter().position(|k| k.space() != first.space()) {
            return Err(Error::Shape(format!(
                "kernel {i} does not share the sequence's state space"
            )));
        }
        Ok(KernelSequence { kernels })
    }

    pub fn repeated(kernel: &FiniteKernel, n: usize) -> Result<Self> {
        Self::new(vec![kernel.clone(); n])
    }

    pub fn kernels(&self) -> &[FiniteKernel] {
        &self.kernels
    }

    pub fn len(&self) -> usize {
        self.kernels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kernels.is_empty()
    }

    pub fn space(&self) -> &OrderedStateSpace {
        self.kernels[0].space()
    }

    /// Kernel at 1-based time `n`, cycling through the sequence.
    pub fn at(&self, n: usize) -> &FiniteKernel {
        &self.kernels[(n.max(1) - 1) % self.kernels.len()]
    }

    /// The composed kernel `p_1 ∘ p_2 ∘ ... ∘ p_n` (first step first).
    pub fn product(&self) -> FiniteKernel {
        let mut acc = self.kernels[0].clone();
        for k in &self.kernels[1..] {
            acc = acc.compose(k).expect("validated shared space");
        }
        acc
    }
}
