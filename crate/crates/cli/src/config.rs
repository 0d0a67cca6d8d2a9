//! Run configuration, read from TOML or JSON.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::functions::{FnSpec, HSpec};
use crate::models::ModelConfig;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_HORIZON: usize = 32;
pub const DEFAULT_PATHS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Analysis {
    Check,
    Curve,
    Simulate,
    Counterexample,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveKind {
    /// `Cov(f1(X_0), f2(X_t))` under the initial law.
    #[default]
    Covariance,
    /// `Cov(X_0, X_t) / Var(X_0)`.
    Autocorrelation,
    /// `E h(X_0, X_t)`.
    Supermod,
    /// `E h(X_0, X_t − X_{t+lag})`.
    Difference,
    /// `E X_t` from `x0`.
    Mean,
    /// `Var X_t` from `x0`.
    Variance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Functions {
    #[serde(default = "FnSpec::identity")]
    pub f1: FnSpec,
    #[serde(default = "FnSpec::identity")]
    pub f2: FnSpec,
    #[serde(default = "HSpec::product")]
    pub h: HSpec,
}

impl Default for Functions {
    fn default() -> Self {
        Functions {
            f1: FnSpec::identity(),
            f2: FnSpec::identity(),
            h: HSpec::product(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    pub path: Option<String>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Required except for `counterexample`, which defaults to the
    /// absorbed Poisson process capped at 2.
    pub model: Option<ModelConfig>,
    /// Used by `battery`; a subcommand overrides it.
    pub analysis: Option<Analysis>,
    #[serde(default)]
    pub curve: CurveKind,
    #[serde(default)]
    pub functions: Functions,
    #[serde(default = "default_horizon")]
    pub horizon: usize,
    /// Lag `s` of difference curves.
    #[serde(default = "default_lag")]
    pub lag: u32,
    /// Starting state of transient curves; defaults to the smallest state.
    pub x0: Option<f64>,
    /// Physical time per step, used only to label curve times.
    pub time_step: Option<f64>,
    pub paths: Option<usize>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    /// Shape flags the curve must carry; overrides the theory defaults.
    pub expect: Option<Vec<String>>,
    #[serde(default)]
    pub output: Output,
}

fn default_horizon() -> usize {
    DEFAULT_HORIZON
}

fn default_lag() -> u32 {
    1
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

impl From<monotone_markov::Error> for ConfigError {
    fn from(e: monotone_markov::Error) -> Self {
        ConfigError(e.to_string())
    }
}

pub const SHAPE_FLAGS: [&str; 5] = ["nonnegative", "nonincreasing", "nondecreasing", "convex", "concave"];

impl RunConfig {
    /// Parses TOML or JSON, chosen by file extension.
    pub fn parse(text: &str, path: &Path) -> Result<Self, ConfigError> {
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
        let cfg: RunConfig = match ext {
            "toml" => toml::from_str(text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?,
            "json" => serde_json::from_str(text)
                .map_err(|e| ConfigError(format!("{}: {e}", path.display())))?,
            _ => {
                return Err(ConfigError(format!(
                    "{}: config must end in .toml or .json",
                    path.display()
                )))
            }
        };
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        Self::parse(&text, path)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.horizon < 1 {
            return Err(ConfigError("horizon must be at least 1".into()));
        }
        if self.lag < 1 {
            return Err(ConfigError("lag must be at least 1".into()));
        }
        if let Some(t) = self.tol {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(ConfigError(format!("tol {t} must be finite and nonnegative")));
            }
        }
        if let Some(dt) = self.time_step {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(ConfigError(format!("time_step {dt} must be positive")));
            }
        }
        if self.paths == Some(0) || self.paths == Some(1) {
            return Err(ConfigError("paths must be at least 2".into()));
        }
        for flag in self.expect.iter().flatten() {
            if !SHAPE_FLAGS.contains(&flag.as_str()) {
                return Err(ConfigError(format!(
                    "unknown shape flag {flag:?}; expected one of {SHAPE_FLAGS:?}"
                )));
            }
        }
        self.functions.f1.resolve()?;
        self.functions.f2.resolve()?;
        self.functions.h.resolve()?;
        Ok(())
    }

    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_TOL)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }
}
