//! Config-driven front end for `monotone-markov`: builds models from TOML or
//! JSON, runs checks and curve computations, and writes CSV/JSON artifacts.
//!
//! Exit status: 0 when every verdict passes, 1 when a check or shape
//! certificate fails, 2 on a configuration error.

pub mod battery;
pub mod config;
pub mod functions;
pub mod models;
pub mod output;
pub mod run;

pub use config::{Analysis, ConfigError, CurveKind, Format, RunConfig};
pub use run::{run, Outcome, Row, Verdict};
