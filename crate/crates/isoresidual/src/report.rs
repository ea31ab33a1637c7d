//! Machine- and human-readable command reports.

use std::time::Duration;

use serde_json::{json, Value};

/// Outcome of one named check inside a report.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// A command report: echo of the invocation, inputs, outputs, per-check
/// results and wall-clock duration. The JSON and table renderings carry the
/// same values.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub outputs: Value,
    pub checks: Vec<Check>,
    pub duration: Duration,
    pub seed: u64,
    pub threads: usize,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            command: command.to_string(),
            inputs: Value::Null,
            outputs: Value::Null,
            checks: Vec::new(),
            duration: Duration::ZERO,
            seed: 0,
            threads: 1,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "pass": c.pass,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
            "duration_ms": self.duration.as_millis() as u64,
            "seed": self.seed,
            "threads": self.threads,
        })
    }

    /// Plain-text rendering; values agree with the JSON form.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        if !self.inputs.is_null() {
            out.push_str(&format!("inputs: {}\n", self.inputs));
        }
        if !self.outputs.is_null() {
            out.push_str(&format!("outputs: {}\n", self.outputs));
        }
        for c in &self.checks {
            out.push_str(&format!(
                "[{}] {}{}\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                if c.detail.is_empty() { String::new() } else { format!(" — {}", c.detail) },
            ));
        }
        out.push_str(&format!(
            "duration_ms: {} seed: {} threads: {}\n",
            self.duration.as_millis(),
            self.seed,
            self.threads
        ));
        out
    }
}
