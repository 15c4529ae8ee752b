use std::fmt::Write;

use serde::Serialize;

use super::Suite;
use crate::hverify::{AxiomEntry, CheckReport};

/// Everything one suite run produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<CheckReport>,
    /// Named values shown alongside the verdicts, in insertion order.
    pub data: Vec<(String, String)>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    schema: u32,
    suite: &'a str,
    passed: bool,
    exit_code: i32,
    reports: Vec<JsonCheck<'a>>,
    data: Vec<JsonDatum<'a>>,
}

#[derive(Serialize)]
struct JsonCheck<'a> {
    structure: &'a str,
    passed: bool,
    axioms: Vec<JsonEntry<'a>>,
    derived: Vec<JsonEntry<'a>>,
}

#[derive(Serialize)]
struct JsonEntry<'a> {
    label: &'a str,
    passed: bool,
    witness: Option<JsonWitness<'a>>,
}

#[derive(Serialize)]
struct JsonWitness<'a> {
    indices: &'a [usize],
    expr: String,
}

#[derive(Serialize)]
struct JsonDatum<'a> {
    name: &'a str,
    value: &'a str,
}

fn json_entry(a: &AxiomEntry) -> JsonEntry<'_> {
    JsonEntry {
        label: &a.label,
        passed: a.passed(),
        witness: a.witness.as_ref().map(|w| JsonWitness {
            indices: &w.indices,
            expr: w.expr.to_string(),
        }),
    }
}

impl SuiteReport {
    pub fn new(suite: Suite) -> Self {
        SuiteReport {
            suite,
            checks: Vec::new(),
            data: Vec::new(),
        }
    }

    pub(crate) fn data(&mut self, name: &str, value: String) {
        self.data.push((name.to_string(), value));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckReport::passed)
    }

    /// 0 when every axiom passes, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "suite {}", self.suite.name());
        for (k, v) in &self.data {
            let _ = writeln!(s, "  {k} = {v}");
        }
        for c in &self.checks {
            let _ = write!(s, "{c}");
        }
        let _ = writeln!(s, "{}", if self.passed() { "PASS" } else { "FAIL" });
        s
    }

    pub fn to_json(&self) -> String {
        let report = JsonReport {
            schema: 1,
            suite: self.suite.name(),
            passed: self.passed(),
            exit_code: self.exit_code(),
            reports: self
                .checks
                .iter()
                .map(|c| JsonCheck {
                    structure: &c.structure,
                    passed: c.passed(),
                    axioms: c.axioms.iter().map(json_entry).collect(),
                    derived: c.derived.iter().map(json_entry).collect(),
                })
                .collect(),
            data: self
                .data
                .iter()
                .map(|(name, value)| JsonDatum { name, value })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&report).expect("plain data serializes");
        s.push('\n');
        s
    }
}
