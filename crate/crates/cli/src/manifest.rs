use std::time::Duration;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::Command;

/// Everything needed to rerun a command and check its output.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub params: serde_json::Value,
    pub version: &'static str,
    pub budget: String,
    pub threads: Option<usize>,
    pub wall_time_seconds: f64,
    /// SHA-256 of the primary output bytes.
    pub output_sha256: String,
}

impl RunManifest {
    pub fn new(
        command: &Command,
        threads: Option<usize>,
        budget: u128,
        wall: Duration,
        output: &str,
    ) -> Self {
        let digest = Sha256::digest(output.as_bytes());
        RunManifest {
            command_line: std::env::args().collect(),
            params: serde_json::to_value(command).unwrap_or(serde_json::Value::Null),
            version: env!("CARGO_PKG_VERSION"),
            budget: budget.to_string(),
            threads,
            wall_time_seconds: wall.as_secs_f64(),
            output_sha256: format!("{digest:x}"),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }
}
