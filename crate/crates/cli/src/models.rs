//! Model blocks of a run config. The `name` field selects the constructor;
//! the remaining fields are its parameters.
//!
//! | name                   | parameters                                             |
//! |------------------------|--------------------------------------------------------|
//! | `reflected-walk`       | `p` or `increments = [[k, prob], ...]`, `max_state`    |
//! | `two-sided-walk`       | `p` or `increments`, `b` (reflected at `0` and `b`)    |
//! | `state-dependent-walk` | `p`, `q` per state, optional `r`                       |
//! | `birth-death`          | `lambdas`, `mus`, optional `t` (default `0.05 / Λ`)    |
//! | `shot-noise`           | `r`, `jumps = [[size, prob], ...]`, `jump_rate`, `dt`, `grid = {lo, hi, n}`, optional `rounding` |
//! | `dam`                  | `release_linear`, `release_sqrt` plus the shot-noise fields except `r` |
//! | `absorbed-poisson`     | `k`, `m`, `lambda`, `dt`                               |
//! | `constant-xi`          | `values`, `probs`                                      |
//! | `kernel`               | `states`, `rows` (explicit matrix)                     |

use monotone_markov::zoo::{
    self, BirthDeathSpec, GridRounding, IncrementDistribution, JumpDistribution, Prediction, WalkSpec,
    ZooModel, DEFAULT_TRUNC_TOL,
};
use monotone_markov::{FiniteKernel, OrderedStateSpace};
use serde::{Deserialize, Serialize};

use crate::config::ConfigError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelConfig {
    ReflectedWalk {
        p: Option<f64>,
        increments: Option<Vec<(i64, f64)>>,
        max_state: usize,
    },
    TwoSidedWalk {
        p: Option<f64>,
        increments: Option<Vec<(i64, f64)>>,
        b: usize,
    },
    StateDependentWalk {
        p: Vec<f64>,
        q: Vec<f64>,
        r: Option<Vec<f64>>,
    },
    BirthDeath {
        lambdas: Vec<f64>,
        mus: Vec<f64>,
        t: Option<f64>,
    },
    ShotNoise {
        r: f64,
        jumps: Vec<(f64, f64)>,
        jump_rate: f64,
        dt: f64,
        grid: Grid,
        #[serde(default)]
        rounding: GridRounding,
    },
    Dam {
        #[serde(default)]
        release_linear: f64,
        #[serde(default)]
        release_sqrt: f64,
        jumps: Vec<(f64, f64)>,
        jump_rate: f64,
        dt: f64,
        grid: Grid,
        #[serde(default)]
        rounding: GridRounding,
    },
    AbsorbedPoisson {
        #[serde(default)]
        k: u32,
        m: u32,
        lambda: f64,
        dt: f64,
    },
    ConstantXi {
        values: Vec<f64>,
        probs: Vec<f64>,
    },
    Kernel {
        states: Vec<f64>,
        rows: Vec<Vec<f64>>,
    },
}

impl ModelConfig {
    /// The absorbed Poisson process `min(N_t, 2)` observed every 0.25.
    pub fn default_counterexample() -> Self {
        ModelConfig::AbsorbedPoisson {
            k: 0,
            m: 2,
            lambda: 1.0,
            dt: 0.25,
        }
    }

    /// Physical time of one kernel step, when the model has one.
    pub fn time_step(&self) -> Option<f64> {
        match self {
            ModelConfig::ShotNoise { dt, .. }
            | ModelConfig::Dam { dt, .. }
            | ModelConfig::AbsorbedPoisson { dt, .. } => Some(*dt),
            ModelConfig::BirthDeath { lambdas, mus, t } => match t {
                Some(t) => Some(*t),
                None => BirthDeathSpec::new(lambdas.clone(), mus.clone())
                    .ok()
                    .map(|s| zoo::default_skeleton_step(&s)),
            },
            _ => None,
        }
    }

    pub fn build(&self) -> Result<ZooModel, ConfigError> {
        let model = match self {
            ModelConfig::ReflectedWalk {
                p,
                increments,
                max_state,
            } => zoo::reflected_walk(&increments_of(*p, increments)?, *max_state)?,
            ModelConfig::TwoSidedWalk { p, increments, b } => {
                zoo::two_sided_reflected_walk(&increments_of(*p, increments)?, *b)?
            }
            ModelConfig::StateDependentWalk { p, q, r } => {
                let spec = match r {
                    Some(r) => WalkSpec::new(p.clone(), q.clone(), r.clone())?,
                    None => WalkSpec::from_up_down(p.clone(), q.clone())?,
                };
                zoo::state_dependent_walk(&spec)?
            }
            ModelConfig::BirthDeath { lambdas, mus, t } => {
                let spec = BirthDeathSpec::new(lambdas.clone(), mus.clone())?;
                let t = t.unwrap_or_else(|| zoo::default_skeleton_step(&spec));
                zoo::birth_death_skeleton(&spec, t, DEFAULT_TRUNC_TOL)?
            }
            ModelConfig::ShotNoise {
                r,
                jumps,
                jump_rate,
                dt,
                grid,
                rounding,
            } => zoo::shot_noise_skeleton(
                *r,
                &JumpDistribution::new(jumps.clone())?,
                *jump_rate,
                *dt,
                &grid_of(grid)?,
                *rounding,
            )?,
            ModelConfig::Dam {
                release_linear,
                release_sqrt,
                jumps,
                jump_rate,
                dt,
                grid,
                rounding,
            } => {
                let (a, b) = (*release_linear, *release_sqrt);
                zoo::dam_skeleton(
                    move |x| a * x + b * x.max(0.0).sqrt(),
                    &JumpDistribution::new(jumps.clone())?,
                    *jump_rate,
                    *dt,
                    &grid_of(grid)?,
                    *rounding,
                )?
            }
            ModelConfig::AbsorbedPoisson { k, m, lambda, dt } => zoo::absorbed_poisson(*k, *m, *lambda, *dt)?,
            ModelConfig::ConstantXi { values, probs } => zoo::constant_xi(values.clone(), probs.clone())?,
            ModelConfig::Kernel { states, rows } => {
                let kernel = FiniteKernel::new(OrderedStateSpace::new(states.clone())?, rows.clone())?;
                ZooModel {
                    name: "kernel".into(),
                    kernel,
                    predicted: Prediction {
                        monotone: None,
                        condition1: None,
                    },
                    truncation_mass: 0.0,
                    init: None,
                    notes: Vec::new(),
                }
            }
        };
        Ok(model)
    }
}

fn increments_of(p: Option<f64>, atoms: &Option<Vec<(i64, f64)>>) -> Result<IncrementDistribution, ConfigError> {
    match (p, atoms) {
        (Some(p), None) => Ok(IncrementDistribution::simple(p)?),
        (None, Some(a)) => Ok(IncrementDistribution::new(a.clone())?),
        _ => Err(ConfigError("give exactly one of `p` and `increments`".into())),
    }
}

fn grid_of(g: &Grid) -> Result<OrderedStateSpace, ConfigError> {
    Ok(OrderedStateSpace::uniform(g.lo, g.hi, g.n)?)
}
