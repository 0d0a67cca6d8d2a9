use serde::{Deserialize, Serialize};

use super::{Prediction, ZooModel};
use crate::check::DEFAULT_TOL;
use crate::error::{Error, Result};
use crate::kernel::FiniteKernel;
use crate::space::OrderedStateSpace;

/// A finitely supported law on the integers, atoms sorted and merged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(i64, f64)>", into = "Vec<(i64, f64)>")]
pub struct IncrementDistribution {
    atoms: Vec<(i64, f64)>,
}

impl IncrementDistribution {
    pub fn new(mut atoms: Vec<(i64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::Domain("increment distribution has no atoms".into()));
        }
        if atoms.iter().any(|&(_, p)| !(p >= 0.0 && p.is_finite())) {
            return Err(Error::Domain("increment probabilities must be finite and >= 0".into()));
        }
        let total: f64 = atoms.iter().map(|(_, p)| p).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("increment probabilities sum to {total}")));
        }
        atoms.sort_by_key(|&(y, _)| y);
        let mut merged: Vec<(i64, f64)> = Vec::with_capacity(atoms.len());
        for (y, p) in atoms {
            match merged.last_mut() {
                Some((last, q)) if *last == y => *q += p,
                _ => merged.push((y, p)),
            }
        }
        merged.retain(|&(_, p)| p > 0.0);
        Ok(IncrementDistribution { atoms: merged })
    }

    /// `+1` with probability `p`, `−1` otherwise.
    pub fn simple(p: f64) -> Result<Self> {
        Self::new(vec![(-1, 1.0 - p), (1, p)])
    }

    pub fn atoms(&self) -> &[(i64, f64)] {
        &self.atoms
    }

    pub fn mean(&self) -> f64 {
        self.atoms.iter().map(|&(y, p)| y as f64 * p).sum()
    }
}

impl TryFrom<Vec<(i64, f64)>> for IncrementDistribution {
    type Error = Error;
    fn try_from(v: Vec<(i64, f64)>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<IncrementDistribution> for Vec<(i64, f64)> {
    fn from(d: IncrementDistribution) -> Self {
        d.atoms
    }
}

/// Rows of `x ↦ min(max(x + Y, 0), top)` on `{0, ..., top}`, with the
/// largest per-row mass pushed onto `top`.
fn clamped_walk(inc: &IncrementDistribution, top: usize) -> Result<(FiniteKernel, f64)> {
    let space = OrderedStateSpace::integers(0, top as i64)?;
    let mut overflow: f64 = 0.0;
    let kernel = FiniteKernel::from_fn(space, |x| {
        let mut row = vec![0.0; top + 1];
        let mut over = 0.0;
        for &(y, p) in inc.atoms() {
            let target = x as i64 + y;
            if target > top as i64 {
                over += p;
            }
            row[target.clamp(0, top as i64) as usize] += p;
        }
        overflow = overflow.max(over);
        row
    })?;
    Ok((kernel, overflow))
}

/// Random walk reflected at the origin, truncated at `max_state`.
///
/// Row `x` is the law of `min(max(x + Y, 0), max_state)`. The upper clamp is
/// the finite stand-in for the unbounded walk; the largest per-row mass it
/// moves is reported as the truncation mass.
pub fn reflected_walk(inc: &IncrementDistribution, max_state: usize) -> Result<ZooModel> {
    let (kernel, overflow) = clamped_walk(inc, max_state)?;
    let mut model = ZooModel::new(
        format!("reflected-walk(max={max_state})"),
        kernel,
        Prediction::BOTH,
    );
    model.truncation_mass = overflow;
    if overflow > 0.0 {
        model
            .notes
            .push(format!("upper truncation at {max_state} moves up to {overflow:e} per row"));
    }
    Ok(model)
}

/// Random walk reflected at both `0` and `b`; the clamp is part of the model,
/// so nothing is truncated.
pub fn two_sided_reflected_walk(inc: &IncrementDistribution, b: usize) -> Result<ZooModel> {
    if b < 1 {
        return Err(Error::Domain("upper barrier b must be at least 1".into()));
    }
    let (kernel, _) = clamped_walk(inc, b)?;
    Ok(ZooModel::new(
        format!("two-sided-reflected-walk(b={b})"),
        kernel,
        Prediction::BOTH,
    ))
}

/// Per-state up (`p`), down (`q`) and stay (`r`) probabilities of a
/// nearest-neighbour walk on `{0, ..., N}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkSpec {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub r: Vec<f64>,
}

impl WalkSpec {
    pub fn new(p: Vec<f64>, q: Vec<f64>, r: Vec<f64>) -> Result<Self> {
        let spec = WalkSpec { p, q, r };
        spec.validate()?;
        Ok(spec)
    }

    /// Fills in `r = 1 − p − q`.
    pub fn from_up_down(p: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        if p.len() != q.len() {
            return Err(Error::Shape("p and q differ in length".into()));
        }
        let r = p.iter().zip(&q).map(|(a, b)| (1.0 - a - b).max(0.0)).collect();
        Self::new(p, q, r)
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.p.len();
        if n < 2 || self.q.len() != n || self.r.len() != n {
            return Err(Error::Shape("p, q, r need one entry per state and at least two states".into()));
        }
        for i in 0..n {
            let (p, q, r) = (self.p[i], self.q[i], self.r[i]);
            if [p, q, r].iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
                return Err(Error::Domain(format!("negative or non-finite probability at state {i}")));
            }
            if (p + q + r - 1.0).abs() > 1e-12 {
                return Err(Error::Domain(format!("p + q + r = {} at state {i}", p + q + r)));
            }
        }
        if self.q[0] != 0.0 {
            return Err(Error::Domain("q at the minimal state must be 0".into()));
        }
        Ok(())
    }

    /// `p_{i−1} <= 1 − q_i` for all `i >= 1`.
    pub fn predicts_monotone(&self, tol: f64) -> bool {
        (1..self.len()).all(|i| self.p[i - 1] <= 1.0 - self.q[i] + tol)
    }

    /// `q` nondecreasing and `p` nonincreasing, with the top state's up move
    /// already folded into staying put.
    pub fn predicts_condition1(&self, tol: f64) -> bool {
        let n = self.len();
        let p_eff = |i: usize| if i + 1 == n { 0.0 } else { self.p[i] };
        (1..n).all(|i| self.q[i] >= self.q[i - 1] - tol && p_eff(i) <= p_eff(i - 1) + tol)
    }
}

/// Tridiagonal kernel on `{0, ..., N}` with `p(i, i−1) = q_i`,
/// `p(i, i) = r_i`, `p(i, i+1) = p_i`. An up move at the top state is folded
/// into staying put and reported as truncation mass.
pub fn state_dependent_walk(spec: &WalkSpec) -> Result<ZooModel> {
    spec.validate()?;
    let n = spec.len();
    let space = OrderedStateSpace::integers(0, n as i64 - 1)?;
    let kernel = FiniteKernel::from_fn(space, |i| {
        let mut row = vec![0.0; n];
        if i > 0 {
            row[i - 1] = spec.q[i];
        }
        row[i] += spec.r[i];
        if i + 1 < n {
            row[i + 1] = spec.p[i];
        } else {
            row[i] += spec.p[i];
        }
        row
    })?;
    let predicted = Prediction {
        monotone: Some(spec.predicts_monotone(DEFAULT_TOL)),
        condition1: Some(spec.predicts_condition1(DEFAULT_TOL)),
    };
    let mut model = ZooModel::new(format!("state-dependent-walk(n={n})"), kernel, predicted);
    let top_up = spec.p[n - 1];
    model.truncation_mass = top_up;
    if top_up > 0.0 {
        model
            .notes
            .push(format!("up move {top_up} at the top state folded into staying put"));
    }
    Ok(model)
}
