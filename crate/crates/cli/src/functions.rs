//! Named test functions and tabulated custom functions.
//!
//! One-variable names: `id`, `square`, `power:k`, `step:c` (`1{x >= c}`).
//! Two-variable names: `product` (`xy`), `min`, `separable` (`f1(x) f2(y)`).
//! Custom functions are tables over the model grid: `{ table = [...] }` for
//! `f`, and an `n × n` matrix for `h`.

use monotone_markov::OrderedStateSpace;
use serde::{Deserialize, Serialize};

use crate::config::ConfigError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FnSpec {
    Named(String),
    Table { table: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HSpec {
    Named(String),
    Table { table: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Func {
    Id,
    Power(f64),
    Step(f64),
    Table(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Bivariate {
    Product,
    Min,
    Separable,
    Table(Vec<Vec<f64>>),
}

impl FnSpec {
    pub fn identity() -> Self {
        FnSpec::Named("id".into())
    }

    pub fn resolve(&self) -> Result<Func, ConfigError> {
        match self {
            FnSpec::Table { table } => Ok(Func::Table(table.clone())),
            FnSpec::Named(name) => parse_named(name),
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.resolve(), Ok(Func::Id))
    }
}

fn parse_named(name: &str) -> Result<Func, ConfigError> {
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| ConfigError(format!("bad number in function {name:?}")))
    };
    match name.split_once(':') {
        None => match name {
            "id" => Ok(Func::Id),
            "square" => Ok(Func::Power(2.0)),
            _ => Err(ConfigError(format!(
                "unknown function {name:?}; expected id, square, power:k, step:c or a table"
            ))),
        },
        Some(("power", k)) => {
            let k = num(k)?;
            if k <= 0.0 {
                return Err(ConfigError(format!("power {k} must be positive")));
            }
            Ok(Func::Power(k))
        }
        Some(("step", c)) => Ok(Func::Step(num(c)?)),
        Some(_) => Err(ConfigError(format!("unknown function {name:?}"))),
    }
}

impl HSpec {
    pub fn product() -> Self {
        HSpec::Named("product".into())
    }

    pub fn resolve(&self) -> Result<Bivariate, ConfigError> {
        match self {
            HSpec::Table { table } => Ok(Bivariate::Table(table.clone())),
            HSpec::Named(name) => match name.as_str() {
                "product" => Ok(Bivariate::Product),
                "min" => Ok(Bivariate::Min),
                "separable" => Ok(Bivariate::Separable),
                _ => Err(ConfigError(format!(
                    "unknown bivariate function {name:?}; expected product, min, separable or a table"
                ))),
            },
        }
    }
}

/// A one-variable function bound to a grid. Tables are looked up by state,
/// so they are only defined on grid points.
#[derive(Debug, Clone)]
pub struct BoundFn {
    func: Func,
    space: OrderedStateSpace,
}

impl BoundFn {
    pub fn new(func: Func, space: &OrderedStateSpace) -> Result<Self, ConfigError> {
        if let Func::Table(t) = &func {
            if t.len() != space.len() {
                return Err(ConfigError(format!(
                    "function table has {} entries for {} states",
                    t.len(),
                    space.len()
                )));
            }
        }
        Ok(BoundFn {
            func,
            space: space.clone(),
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.func {
            Func::Id => x,
            Func::Power(k) if *k == 2.0 => x * x,
            Func::Power(k) => x.signum() * x.abs().powf(*k),
            Func::Step(c) => {
                if x >= *c {
                    1.0
                } else {
                    0.0
                }
            }
            Func::Table(t) => self.space.index_of(x).map_or(f64::NAN, |i| t[i]),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.func == Func::Id
    }

    pub fn is_table(&self) -> bool {
        matches!(self.func, Func::Table(_))
    }
}

#[derive(Debug, Clone)]
pub struct BoundH {
    h: Bivariate,
    f1: BoundFn,
    f2: BoundFn,
    space: OrderedStateSpace,
}

impl BoundH {
    pub fn new(h: Bivariate, f1: BoundFn, f2: BoundFn, space: &OrderedStateSpace) -> Result<Self, ConfigError> {
        if let Bivariate::Table(t) = &h {
            let n = space.len();
            if t.len() != n || t.iter().any(|r| r.len() != n) {
                return Err(ConfigError(format!("h table must be {n} × {n}")));
            }
        }
        Ok(BoundH {
            h,
            f1,
            f2,
            space: space.clone(),
        })
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match &self.h {
            Bivariate::Product => x * y,
            Bivariate::Min => x.min(y),
            Bivariate::Separable => self.f1.eval(x) * self.f2.eval(y),
            Bivariate::Table(t) => match (self.space.index_of(x), self.space.index_of(y)) {
                (Some(i), Some(j)) => t[i][j],
                _ => f64::NAN,
            },
        }
    }

    /// Tables (directly or through `separable`) cannot take a difference
    /// `X_t − X_{t+s}` as the second argument.
    pub fn defined_off_grid(&self) -> bool {
        match self.h {
            Bivariate::Table(_) => false,
            Bivariate::Separable => !self.f1.is_table() && !self.f2.is_table(),
            _ => true,
        }
    }
}
