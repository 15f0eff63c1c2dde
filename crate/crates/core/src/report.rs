//! Suite reports: per-check status with attached certificates, rendered as
//! JSON or Markdown.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::SCHEMA;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    /// The statement this check exercises, for the traceability column.
    pub lemma: String,
    pub status: Status,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Value>,
}

impl CheckRecord {
    pub fn new(id: impl Into<String>, lemma: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        CheckRecord {
            id: id.into(),
            lemma: lemma.into(),
            status: Status::from_bool(ok),
            detail: detail.into(),
            certificate: None,
        }
    }

    pub fn with_certificate<T: Serialize>(mut self, cert: &T) -> Self {
        self.certificate = serde_json::to_value(cert).ok();
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: String,
    pub suite: String,
    pub verdict: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub config: Value,
    /// Scope statements: corpus relativization, finite-stage caveats, depth bounds.
    #[serde(default)]
    pub notes: Vec<String>,
    #[serde(default)]
    pub metrics: BTreeMap<String, u64>,
    pub checks: Vec<CheckRecord>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>) -> Self {
        SuiteReport {
            schema: SCHEMA.to_string(),
            suite: suite.into(),
            verdict: Status::Pass,
            seed: None,
            config: Value::Null,
            notes: Vec::new(),
            metrics: BTreeMap::new(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: CheckRecord) {
        self.checks.push(check);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn metric(&mut self, key: &str, value: u64) {
        self.metrics.insert(key.to_string(), value);
    }

    /// Absorb another report's checks, notes and metrics (metrics are summed).
    pub fn merge(&mut self, other: SuiteReport) {
        self.checks.extend(other.checks);
        for n in other.notes {
            if !self.notes.contains(&n) {
                self.notes.push(n);
            }
        }
        for (k, v) in other.metrics {
            *self.metrics.entry(k).or_insert(0) += v;
        }
    }

    /// Stable-sorts checks by identifier and recomputes the verdict.
    pub fn finish(mut self) -> Self {
        self.checks.sort_by(|a, b| a.id.cmp(&b.id));
        self.verdict = Status::from_bool(self.checks.iter().all(|c| c.status.is_pass()));
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict.is_pass()
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.status.is_pass())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# seqwit suite `{}`: {}", self.suite, verdict_word(self.verdict));
        let _ = writeln!(out);
        let _ = writeln!(out, "- schema: `{}`", self.schema);
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "- seed: `{seed}`");
        }
        if !self.config.is_null() {
            let _ = writeln!(out, "- config: `{}`", self.config);
        }
        for (k, v) in &self.metrics {
            let _ = writeln!(out, "- {k}: {v}");
        }
        if !self.notes.is_empty() {
            let _ = writeln!(out, "\n## Scope\n");
            for n in &self.notes {
                let _ = writeln!(out, "- {n}");
            }
        }
        let _ = writeln!(out, "\n## Checks\n");
        let _ = writeln!(out, "| check | statement | status | detail |");
        let _ = writeln!(out, "|---|---|---|---|");
        for c in &self.checks {
            let _ = writeln!(
                out,
                "| `{}` | {} | {} | {} |",
                c.id,
                escape_cell(&c.lemma),
                verdict_word(c.status),
                escape_cell(&c.detail)
            );
        }
        out
    }
}

fn verdict_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
    }
}

fn escape_cell(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', " ")
}
