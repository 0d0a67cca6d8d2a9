//! Artifact rendering. Every artifact starts with the tool version, a hash of
//! the effective configuration, and the seed.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::config::Format;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Header {
    pub tool: &'static str,
    pub version: &'static str,
    pub config_sha256: String,
    pub seed: u64,
}

impl Header {
    pub fn new(config_bytes: &[u8], seed: u64) -> Self {
        let digest = Sha256::digest(config_bytes);
        Header {
            tool: "mmk",
            version: env!("CARGO_PKG_VERSION"),
            config_sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
            seed,
        }
    }
}

/// Renders records as CSV behind `#` comment lines carrying the header.
pub fn render_csv(header: &Header, records: &[Vec<String>]) -> String {
    let mut out = format!(
        "# {} {}\n# config-sha256 {}\n# seed {}\n",
        header.tool, header.version, header.config_sha256, header.seed
    );
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    for r in records {
        w.write_record(r).expect("writing to memory");
    }
    out.push_str(&String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 csv"));
    out
}

/// Renders `body` as pretty JSON with the header under `"header"`.
pub fn render_json(header: &Header, body: Value) -> String {
    let mut doc = serde_json::Map::new();
    doc.insert("header".into(), serde_json::to_value(header).expect("header serializes"));
    match body {
        Value::Object(map) => doc.extend(map),
        other => {
            doc.insert("body".into(), other);
        }
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("json renders");
    s.push('\n');
    s
}

pub fn render(format: Format, header: &Header, csv: &[Vec<String>], json: Value) -> String {
    match format {
        Format::Csv => render_csv(header, csv),
        Format::Json => render_json(header, json),
    }
}
