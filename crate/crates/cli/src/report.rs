use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;

/// Exit codes shared by every subcommand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    /// The property holds or the object was found.
    Ok,
    /// Refuted or not found; the report carries the certificate.
    Refuted,
    Usage,
    ResourceLimit,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Refuted => 1,
            Status::Usage => 2,
            Status::ResourceLimit => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Refuted => "refuted",
            Status::Usage => "usage-error",
            Status::ResourceLimit => "resource-limit",
        }
    }

    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Ok
        } else {
            Status::Refuted
        }
    }
}

/// A finished command: the JSON result plus a few human-readable lines.
pub struct Report {
    pub command: &'static str,
    pub status: Status,
    pub config: Value,
    pub result: Value,
    pub summary: Vec<String>,
}

impl Report {
    pub fn new(command: &'static str, config: &RunConfig, extra: Value) -> Report {
        let mut cfg = serde_json::to_value(config).expect("config serializes");
        if let (Value::Object(base), Value::Object(more)) = (&mut cfg, extra) {
            base.extend(more);
        }
        Report { command, status: Status::Ok, config: cfg, result: Value::Null, summary: Vec::new() }
    }

    pub fn result(mut self, status: Status, result: impl Serialize) -> Report {
        self.status = status;
        self.result = serde_json::to_value(result).expect("results serialize");
        self
    }

    pub fn line(mut self, text: impl Into<String>) -> Report {
        self.summary.push(text.into());
        self
    }

    pub fn to_json(&self) -> String {
        let envelope = json!({
            "command": self.command,
            "status": self.status.label(),
            "exit_code": self.status.code(),
            "config": self.config,
            "result": self.result,
        });
        serde_json::to_string_pretty(&envelope).expect("report serializes")
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "rwb {}: {}", self.command, self.status.label());
        for line in &self.summary {
            let _ = writeln!(out, "  {line}");
        }
        out
    }
}

/// Report for a run stopped by a search limit.
pub fn resource_limit(command: &'static str, config: Value, what: &str, limit: u64) -> Report {
    Report {
        command,
        status: Status::ResourceLimit,
        config,
        result: json!({ "limit": what, "value": limit }),
        summary: vec![format!("{what} exceeded {limit}")],
    }
}
