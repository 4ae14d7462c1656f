//! Structured verdicts and the canonical audit document.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Skipped => "skipped",
        }
    }
}

/// Outcome of one verification: a verdict, named details and an optional
/// witness explaining a failure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub verdict: Verdict,
    #[serde(default)]
    pub details: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn pass(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            verdict: Verdict::Pass,
            details: BTreeMap::new(),
            witness: None,
            notes: Vec::new(),
        }
    }

    pub fn with_verdict(name: impl Into<String>, ok: bool) -> Self {
        let mut r = Self::pass(name);
        r.verdict = Verdict::from_bool(ok);
        r
    }

    pub fn detail(mut self, key: &str, value: impl Serialize) -> Self {
        self.details.insert(
            key.to_string(),
            serde_json::to_value(value).expect("serializable detail"),
        );
        self
    }

    pub fn note(mut self, text: impl Into<String>) -> Self {
        self.notes.push(text.into());
        self
    }

    /// Mark the report failed with `witness`.
    pub fn fail(mut self, witness: impl Serialize) -> Self {
        self.verdict = Verdict::Fail;
        self.witness = Some(serde_json::to_value(witness).expect("serializable witness"));
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("serializable report")
    }
}

/// SHA-256 of the canonical (sorted-key, compact) encoding of `inputs`.
pub fn inputs_digest(inputs: &Value) -> String {
    let canonical = serde_json::to_string(inputs).expect("serializable");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub inputs_digest: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
}

/// A sequence of checks; the overall status is `fail` iff a check failed.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AuditReport {
    pub checks: Vec<CheckRecord>,
    /// Wall-clock seconds per check, kept out of the canonical document.
    pub timings: Vec<(String, f64)>,
}

impl AuditReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, inputs: &Value, report: Report, elapsed: f64) {
        self.timings.push((report.name.clone(), elapsed));
        let mut details = report.details;
        if !report.notes.is_empty() {
            details.insert("notes".into(), json!(report.notes));
        }
        self.checks.push(CheckRecord {
            name: report.name,
            inputs_digest: inputs_digest(inputs),
            verdict: report.verdict,
            witness: report.witness,
            details,
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict != Verdict::Fail)
    }

    pub fn status(&self) -> &'static str {
        if self.passed() {
            "pass"
        } else {
            "fail"
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "checks": self.checks, "status": self.status() })
    }

    /// Byte-stable encoding: sorted keys, two-space indent, trailing newline.
    pub fn canonical_json(&self) -> String {
        canonical_string(&self.to_json())
    }

    pub fn timings_json(&self) -> String {
        let entries: Vec<Value> = self
            .timings
            .iter()
            .map(|(n, t)| json!({ "name": n, "seconds": t }))
            .collect();
        canonical_string(&json!({ "timings": entries }))
    }

    pub fn to_markdown(&self) -> String {
        render_markdown("Audit", &self.to_json())
    }
}

pub fn canonical_string(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Render a report document as Markdown. Only the JSON is consulted, so the
/// Markdown never says anything the canonical file does not.
pub fn render_markdown(title: &str, doc: &Value) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {title}\n");
    if let Some(status) = doc.get("status").and_then(Value::as_str) {
        let _ = writeln!(out, "Overall status: **{status}**\n");
    }
    if let Some(checks) = doc.get("checks").and_then(Value::as_array) {
        if checks.is_empty() {
            let _ = writeln!(out, "No checks were run.");
            return out;
        }
        let _ = writeln!(out, "| check | verdict | inputs digest |");
        let _ = writeln!(out, "|---|---|---|");
        for c in checks {
            let name = c.get("name").and_then(Value::as_str).unwrap_or("?");
            let verdict = c.get("verdict").and_then(Value::as_str).unwrap_or("?");
            let digest = c.get("inputs_digest").and_then(Value::as_str).unwrap_or("");
            let short = &digest[..digest.len().min(12)];
            let _ = writeln!(out, "| {name} | {verdict} | `{short}` |");
        }
        for c in checks {
            if let Some(w) = c.get("witness") {
                let name = c.get("name").and_then(Value::as_str).unwrap_or("?");
                let _ = writeln!(out, "\n## Witness for {name}\n\n```json\n{w}\n```");
            }
        }
        return out;
    }
    let _ = writeln!(out, "```json\n{}```", canonical_string(doc));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_audit_document() {
        let a = AuditReport::new();
        let v: Value = serde_json::from_str(&a.canonical_json()).unwrap();
        assert_eq!(v, json!({"checks": [], "status": "pass"}));
    }

    #[test]
    fn failing_check_fails_audit() {
        let mut a = AuditReport::new();
        a.push(&json!({"x": 1}), Report::pass("ok"), 0.0);
        a.push(&json!({"x": 2}), Report::pass("bad").fail(json!({"why": 1})), 0.0);
        assert_eq!(a.status(), "fail");
        assert!(a.to_markdown().contains("| bad | fail |"));
    }

    #[test]
    fn digest_ignores_key_order() {
        let a: Value = serde_json::from_str(r#"{"a":1,"b":2}"#).unwrap();
        let b: Value = serde_json::from_str(r#"{"b":2,"a":1}"#).unwrap();
        assert_eq!(inputs_digest(&a), inputs_digest(&b));
        assert_eq!(inputs_digest(&a).len(), 64);
    }
}
