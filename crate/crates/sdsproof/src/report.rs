//! Machine-readable summary of one command run.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub wall_seconds: f64,
    pub status: String,
    pub exit_code: i32,
    pub result: Value,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
