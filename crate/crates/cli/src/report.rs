use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Exact,
    Numeric,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub status: Status,
    pub kind: Kind,
    pub detail: String,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub payload: Value,
}

/// Named checks, kept sorted by name so output order never depends on
/// evaluation order.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub title: String,
    pub checks: BTreeMap<String, Check>,
    /// Documents produced alongside the checks (operators, curves, ...).
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub artifacts: BTreeMap<String, Value>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), ..Default::default() }
    }

    pub fn exact(&mut self, name: &str, ok: bool, detail: impl Into<String>, payload: Value) {
        self.push(name, Status::from_bool(ok), Kind::Exact, detail, payload);
    }

    pub fn numeric(&mut self, name: &str, ok: bool, detail: impl Into<String>, payload: Value) {
        self.push(name, Status::from_bool(ok), Kind::Numeric, detail, payload);
    }

    pub fn skip(&mut self, name: &str, detail: impl Into<String>) {
        self.push(name, Status::Skip, Kind::Exact, detail, Value::Null);
    }

    pub fn push(&mut self, name: &str, status: Status, kind: Kind, detail: impl Into<String>, payload: Value) {
        let prev = self.checks.insert(name.to_string(), Check { status, kind, detail: detail.into(), payload });
        debug_assert!(prev.is_none(), "duplicate check {name}");
    }

    pub fn artifact(&mut self, name: &str, value: Value) {
        self.artifacts.insert(name.to_string(), value);
    }

    pub fn passed(&self) -> bool {
        self.checks.values().all(|c| c.status != Status::Fail)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {}", self.title);
        let width = self.checks.keys().map(String::len).max().unwrap_or(0);
        for (name, c) in &self.checks {
            let _ = writeln!(out, "{} {name:<width$}  {}", c.status.label(), clip(&c.detail));
        }
        for (name, v) in &self.artifacts {
            let _ = writeln!(out, "\n[{name}]");
            match v {
                Value::String(s) => out.push_str(s),
                other => out.push_str(&serde_json::to_string_pretty(other).unwrap_or_default()),
            }
            out.push('\n');
        }
        let passed = self.checks.values().filter(|c| c.status == Status::Pass).count();
        let failed = self.checks.values().filter(|c| c.status == Status::Fail).count();
        let _ = writeln!(out, "\n{passed} passed, {failed} failed, {} skipped", self.checks.len() - passed - failed);
        out
    }

    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["passed"] = Value::Bool(self.passed());
        v
    }
}

/// Long exact values make text reports unreadable; JSON keeps them whole.
fn clip(s: &str) -> String {
    const MAX: usize = 160;
    if s.chars().count() <= MAX {
        return s.to_string();
    }
    let head: String = s.chars().take(MAX).collect();
    format!("{head}... ({} chars, see --format json)", s.chars().count())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checks_are_sorted_and_failures_count() {
        let mut r = Report::new("t");
        r.exact("zeta", true, "", Value::Null);
        r.exact("alpha", false, "broken", Value::Null);
        r.skip("mid", "n/a");
        assert!(!r.passed());
        let text = r.to_text();
        assert!(text.find("alpha").unwrap() < text.find("zeta").unwrap());
        assert!(text.contains("FAIL alpha"));
        assert_eq!(r.to_json()["checks"]["alpha"]["status"], "FAIL");
    }
}
