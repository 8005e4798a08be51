//! Machine-readable verification reports.

use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    Inconclusive,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
            Status::Inconclusive => "INCONCLUSIVE",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status, detail: Value) -> Self {
        Check { name: name.into(), status, detail }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub config: Value,
    pub checks: Vec<Check>,
    pub assumptions: Vec<String>,
    pub wall_time_ms: u128,
}

impl Report {
    pub fn new(command: impl Into<String>, config: Value) -> Self {
        Report { command: command.into(), config, checks: Vec::new(), assumptions: Vec::new(), wall_time_ms: 0 }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.checks.extend(checks);
    }

    /// FAIL if any check failed, otherwise PASS.
    pub fn status(&self) -> Status {
        if self.checks.iter().any(|c| c.status == Status::Fail) {
            Status::Fail
        } else {
            Status::Pass
        }
    }

    pub fn passed(&self) -> bool {
        self.status() != Status::Fail
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    /// JSON without the wall-time field; identical configs give identical bytes.
    pub fn to_stable_json(&self) -> Value {
        json!({
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "config": self.config,
            "status": self.status(),
            "summary": {
                "pass": self.count(Status::Pass),
                "fail": self.count(Status::Fail),
                "skipped": self.count(Status::Skipped),
                "inconclusive": self.count(Status::Inconclusive),
            },
            "checks": self.checks,
            "assumptions": self.assumptions,
        })
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.to_stable_json();
        v["wall_time_ms"] = json!(self.wall_time_ms as u64);
        v
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("report serializes")
    }

    /// One line per check.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} [{}]\n", self.command, self.status());
        for c in &self.checks {
            out.push_str(&format!("  {:<12} {}\n", c.status.as_str(), c.name));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn any_fail_fails_the_report() {
        let mut r = Report::new("t", json!({}));
        r.push(Check::new("a", Status::Pass, Value::Null));
        r.push(Check::new("b", Status::Skipped, Value::Null));
        assert!(r.passed());
        r.push(Check::new("c", Status::Fail, Value::Null));
        assert_eq!(r.status(), Status::Fail);
        assert_eq!(r.to_json()["status"], "FAIL");
    }

    #[test]
    fn stable_json_omits_wall_time() {
        let mut r = Report::new("t", json!({"window": 3}));
        r.wall_time_ms = 17;
        assert!(r.to_stable_json().get("wall_time_ms").is_none());
        assert_eq!(r.to_json()["wall_time_ms"], 17);
        assert_eq!(r.to_json()["schema"], 1);
    }
}
