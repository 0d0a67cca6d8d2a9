//! Runs every config in a directory and tabulates model × property × verdict.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use crate::config::{Analysis, ConfigError, Format, RunConfig};
use crate::output::{render, Header};
use crate::run::{run, Verdict};

#[derive(Debug, Clone, Serialize)]
pub struct SummaryRow {
    pub config: String,
    pub model: String,
    pub property: String,
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct Summary {
    pub rows: Vec<SummaryRow>,
    /// Hash input: every member's file name and contents, in run order.
    pub fingerprint: Vec<u8>,
}

impl Summary {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.verdict == Verdict::Pass)
    }

    pub fn render(&self, format: Format, seed: u64) -> String {
        let header = Header::new(&self.fingerprint, seed);
        let mut csv = vec![["config", "model", "property", "verdict", "detail"].map(String::from).to_vec()];
        csv.extend(self.rows.iter().map(|r| {
            vec![
                r.config.clone(),
                r.model.clone(),
                r.property.clone(),
                r.verdict.to_string(),
                r.detail.clone(),
            ]
        }));
        render(format, &header, &csv, json!({ "rows": self.rows }))
    }
}

/// Config files in `dir` (`.toml`, `.json`), sorted by file name.
pub fn member_configs(dir: &Path) -> Result<Vec<PathBuf>, ConfigError> {
    let entries = std::fs::read_dir(dir).map_err(|e| ConfigError(format!("{}: {e}", dir.display())))?;
    let mut out: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file() && matches!(p.extension().and_then(|e| e.to_str()), Some("toml") | Some("json"))
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Runs each member with its own `analysis` (default `check`). A member that
/// fails to load or run becomes one `error` row; the others proceed.
pub fn run_battery(dir: &Path, seed: Option<u64>, tol: Option<f64>) -> Result<Summary, ConfigError> {
    let mut rows = Vec::new();
    let mut fingerprint = Vec::new();
    for path in member_configs(dir)? {
        let name = path.file_name().unwrap_or_default().to_string_lossy().into_owned();
        fingerprint.extend_from_slice(name.as_bytes());
        fingerprint.push(0);
        if let Ok(bytes) = std::fs::read(&path) {
            fingerprint.extend_from_slice(&bytes);
        }
        fingerprint.push(0);

        let outcome = RunConfig::load(&path).and_then(|mut cfg| {
            cfg.seed = seed.or(cfg.seed);
            cfg.tol = tol.or(cfg.tol);
            run(&cfg, cfg.analysis.unwrap_or(Analysis::Check))
        });
        match outcome {
            Ok(o) => rows.extend(o.rows.into_iter().map(|r| SummaryRow {
                config: name.clone(),
                model: o.model.clone(),
                property: r.property,
                verdict: r.verdict,
                detail: r.detail,
            })),
            Err(e) => rows.push(SummaryRow {
                config: name.clone(),
                model: String::new(),
                property: "config".into(),
                verdict: Verdict::Error,
                detail: e.to_string(),
            }),
        }
    }
    Ok(Summary { rows, fingerprint })
}
