//! Machine-readable record of one run.

use std::path::Path;
use std::time::Duration;

use serde::Serialize;
use sha2::{Digest, Sha256};

use sleecgo_core::checker::Diagnosis;

#[derive(Debug, Clone, Serialize)]
pub struct Input {
    pub path: String,
    pub sha256: String,
}

impl Input {
    pub fn new(path: &Path, content: &str) -> Self {
        let digest = Sha256::digest(content.as_bytes());
        Input { path: path.display().to_string(), sha256: digest.iter().map(|b| format!("{b:02x}")).collect() }
    }
}

/// Everything needed to compare two runs: what was read (by content hash),
/// what was found. Timing is recorded only in report files, so that
/// standard output stays byte-stable.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport<'a> {
    pub command: &'static str,
    pub inputs: Vec<Input>,
    pub outcome: &'static str,
    pub diagnoses: &'a [Diagnosis],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl<'a> RunReport<'a> {
    pub fn new(command: &'static str, inputs: Vec<Input>, diagnoses: &'a [Diagnosis]) -> Self {
        let outcome = if diagnoses.is_empty() { "clean" } else { "findings" };
        RunReport { command, inputs, outcome, diagnoses, elapsed_ms: None }
    }

    pub fn to_json(&self, elapsed: Option<Duration>) -> String {
        let report = RunReport { elapsed_ms: elapsed.map(|d| d.as_millis() as u64), ..self.clone() };
        serde_json::to_string_pretty(&report).expect("report serialisation cannot fail")
    }
}
