//! Self-describing experiment reports.
//!
//! A report embeds the tool version, the full configuration, and the master
//! seed, so rerunning with the same inputs regenerates identical numbers.
//! Serialization is deterministic (sorted keys, no timestamps); wall-clock
//! runtime is kept in memory only.

use serde::Serialize;

use crate::Result;

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empirical: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<String>,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, passed: bool) -> Self {
        CheckResult {
            name: name.into(),
            passed,
            empirical: None,
            bound: None,
            details: None,
        }
    }

    pub fn with_values(mut self, empirical: f64, bound: f64) -> Self {
        self.empirical = Some(empirical);
        self.bound = Some(bound);
        self
    }

    pub fn with_details(mut self, details: impl Into<String>) -> Self {
        self.details = Some(details.into());
        self
    }
}

#[derive(Debug, Serialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub experiment: String,
    pub master_seed: u64,
    pub config: serde_json::Value,
    pub data: serde_json::Value,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
    #[serde(skip)]
    pub runtime: std::time::Duration,
}

impl ExperimentReport {
    pub fn new(
        experiment: impl Into<String>,
        master_seed: u64,
        config: impl Serialize,
        data: impl Serialize,
        checks: Vec<CheckResult>,
    ) -> Result<Self> {
        let passed = checks.iter().all(|c| c.passed);
        Ok(ExperimentReport {
            schema_version: 1,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            experiment: experiment.into(),
            master_seed,
            config: serde_json::to_value(config)?,
            data: serde_json::to_value(data)?,
            checks,
            passed,
            runtime: std::time::Duration::ZERO,
        })
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
