//! Exact linear-algebra computations on finite kernels: stationary laws,
//! covariance and supermodular-expectation curves, the three- and four-point
//! inequalities, transient moments, and shape certification.

mod curves;
mod inequality;
mod shape;
mod stationary;
mod transient;

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::OrderedStateSpace;

pub use curves::{covariance_curve, difference_curve, supermod_curve};
pub use inequality::{four_point_check, three_point_check, InequalityCheck};
pub use shape::{certify_refined, certify_shape, ShapeCertificate, ShapeWitnesses};
pub use stationary::{closed_classes, stationary};
pub use transient::{
    transient_difference_profile, transient_mean_curve, transient_pair_profile,
    transient_variance_curve,
};

/// A probability vector over a state space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    space: OrderedStateSpace,
    mass: Vec<f64>,
    tol: f64,
    /// Set by [`stationary`] when the kernel has more than one invariant law
    /// and this is only the solver's canonical choice.
    #[serde(default)]
    pub non_unique: bool,
    /// `‖πP − π‖∞` when produced by [`stationary`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

pub const DEFAULT_MASS_TOL: f64 = 1e-9;

impl Distribution {
    pub fn new(space: OrderedStateSpace, mass: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(space, mass, DEFAULT_MASS_TOL)
    }

    pub fn with_tolerance(space: OrderedStateSpace, mass: Vec<f64>, tol: f64) -> Result<Self> {
        if mass.len() != space.len() {
            return Err(Error::Shape(format!(
                "{} masses for {} states",
                mass.len(),
                space.len()
            )));
        }
        if let Some(i) = mass.iter().position(|m| !(m.is_finite() && *m >= 0.0)) {
            return Err(Error::Domain(format!("mass {i} = {} is not a probability", mass[i])));
        }
        let sum: f64 = mass.iter().sum();
        if (sum - 1.0).abs() > tol {
            return Err(Error::Domain(format!("masses sum to {sum} (tolerance {tol:e})")));
        }
        Ok(Distribution {
            space,
            mass,
            tol,
            non_unique: false,
            residual: None,
        })
    }

    /// Point mass at grid state `x`.
    pub fn point(space: OrderedStateSpace, x: f64) -> Result<Self> {
        let i = space
            .index_of(x)
            .ok_or_else(|| Error::Domain(format!("{x} is not a grid state")))?;
        let mut mass = vec![0.0; space.len()];
        mass[i] = 1.0;
        Self::new(space, mass)
    }

    pub fn uniform(space: OrderedStateSpace) -> Self {
        let n = space.len();
        Self::new(space, vec![1.0 / n as f64; n]).expect("uniform masses are valid")
    }

    pub fn space(&self) -> &OrderedStateSpace {
        &self.space
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// `E f(X)`.
    pub fn expect(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.space
            .states()
            .iter()
            .zip(&self.mass)
            .map(|(&s, &m)| m * f(s))
            .sum()
    }

    pub fn mean(&self) -> f64 {
        self.expect(|x| x)
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.expect(|x| (x - m) * (x - m))
    }
}

/// A sampled curve `(t_k, v_k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub meta: String,
}

impl Curve {
    pub fn new(times: Vec<f64>, values: Vec<f64>, meta: impl Into<String>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::Shape(format!(
                "{} times for {} values",
                times.len(),
                values.len()
            )));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("curve times must be strictly increasing".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("curve value {i} is not finite")));
        }
        Ok(Curve {
            times,
            values,
            meta: meta.into(),
        })
    }

    /// Values on the integer time grid `0, 1, ..., len-1`.
    pub fn from_steps(values: Vec<f64>, meta: impl Into<String>) -> Result<Self> {
        let times = (0..values.len()).map(|t| t as f64).collect();
        Self::new(times, values, meta)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Multiply every time by `dt` (step index to physical time).
    pub fn with_time_step(mut self, dt: f64) -> Self {
        self.times.iter_mut().for_each(|t| *t *= dt);
        self
    }

    /// Divide every value by `values[0]` (autocorrelation from autocovariance).
    pub fn normalized(&self) -> Result<Curve> {
        let v0 = *self
            .values
            .first()
            .ok_or_else(|| Error::Domain("empty curve".into()))?;
        if v0 == 0.0 {
            return Err(Error::Domain("cannot normalize a curve starting at 0".into()));
        }
        Curve::new(
            self.times.clone(),
            self.values.iter().map(|v| v / v0).collect(),
            format!("{} / value(0)", self.meta),
        )
    }

    /// Value at time `t` (exact match up to 1e-9).
    pub fn value_at(&self, t: f64) -> Option<f64> {
        self.times
            .iter()
            .position(|&s| (s - t).abs() <= 1e-9 * t.abs().max(1.0))
            .map(|i| self.values[i])
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,value")?;
        for (t, v) in self.times.iter().zip(&self.values) {
            writeln!(w, "{t},{v}")?;
        }
        Ok(())
    }
}
