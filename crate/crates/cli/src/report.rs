//! Machine-readable run reports. One JSON document per run, printed to the
//! success stream only on success; identical inputs and seed produce
//! byte-identical documents (no wall-clock fields, fixed key order).

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub argv: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub inputs_sha256: BTreeMap<String, String>,
    pub status: String,
    pub results: Value,
}

impl Report {
    pub fn new(command: &str, argv: Vec<String>, seed: Option<u64>) -> Self {
        Self {
            schema_version: 1,
            tool: "toposq",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            argv,
            seed,
            inputs_sha256: BTreeMap::new(),
            status: String::new(),
            results: Value::Null,
        }
    }

    pub fn record_input(&mut self, name: &str, bytes: &[u8]) {
        let mut hasher = Sha256::new();
        hasher.update(bytes);
        self.inputs_sha256.insert(name.to_string(), format!("{:x}", hasher.finalize()));
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
