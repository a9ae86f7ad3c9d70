/*! The JSON report schema. Reports are deterministic for a fixed input and
configuration: maps are ordered, witnesses use canonical ids, and timing
data is only attached on request since it would break byte-stability. */

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub property: String,
    pub verdict: Value,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub theorem_crosschecks: Vec<Crosscheck>,
    /// wall time in milliseconds; absent unless explicitly requested
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Crosscheck {
    pub name: String,
    pub left: Value,
    pub right: Value,
    pub agree: bool,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Report {
        Report { schema_version: SCHEMA_VERSION, command: command.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("# {}\n", self.command);
        for c in &self.checks {
            out.push_str(&format!("{}: {}\n", c.property, c.verdict));
            if let Some(ce) = &c.counterexample {
                out.push_str(&format!("  counterexample: {ce}\n"));
            }
            for x in &c.theorem_crosschecks {
                out.push_str(&format!(
                    "  crosscheck {}: {} vs {} ({})\n",
                    x.name,
                    x.left,
                    x.right,
                    if x.agree { "agree" } else { "DIVERGENT" }
                ));
            }
        }
        out
    }

    pub fn any_divergence(&self) -> bool {
        self.checks.iter().any(|c| c.theorem_crosschecks.iter().any(|x| !x.agree))
    }
}

impl Check {
    pub fn new(property: impl Into<String>, verdict: impl Serialize) -> Check {
        Check {
            property: property.into(),
            verdict: serde_json::to_value(verdict).expect("verdicts serialize"),
            witnesses: Vec::new(),
            counterexample: None,
            theorem_crosschecks: Vec::new(),
            timing_ms: None,
        }
    }

    pub fn witness(mut self, w: impl Serialize) -> Check {
        self.witnesses.push(serde_json::to_value(w).expect("witnesses serialize"));
        self
    }

    pub fn counterexample(mut self, w: impl Serialize) -> Check {
        self.counterexample = Some(serde_json::to_value(w).expect("counterexamples serialize"));
        self
    }

    pub fn crosscheck(mut self, name: &str, left: impl Serialize, right: impl Serialize) -> Check {
        let left = serde_json::to_value(left).expect("serializes");
        let right = serde_json::to_value(right).expect("serializes");
        let agree = left == right;
        self.theorem_crosschecks.push(Crosscheck { name: name.into(), left, right, agree });
        self
    }
}
