//! Violation reports shared by the verification routines.

use serde::Serialize;
use serde_json::Value;

/// Witness lists are truncated to this many entries; totals stay exact.
pub const MAX_WITNESSES: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub kind: String,
    pub witness: Value,
}

/// Outcome of one named check over a finite box of configurations.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub configurations: u64,
    pub violations_total: u64,
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        CheckReport { name: name.into(), configurations: 0, violations_total: 0, violations: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.violations_total == 0
    }

    pub fn count(&mut self, n: u64) {
        self.configurations += n;
    }

    /// Counts one configuration and records a violation if `ok` is false.
    pub fn check(&mut self, ok: bool, kind: &str, witness: impl FnOnce() -> Value) {
        self.configurations += 1;
        if !ok {
            self.violation(kind, witness());
        }
    }

    pub fn violation(&mut self, kind: &str, witness: Value) {
        self.violations_total += 1;
        if self.violations.len() < MAX_WITNESSES {
            self.violations.push(Violation { kind: kind.to_string(), witness });
        }
    }

    /// Folds another report's counts and witnesses into this one.
    pub fn absorb(&mut self, other: CheckReport) {
        self.configurations += other.configurations;
        self.violations_total += other.violations_total;
        for v in other.violations {
            if self.violations.len() < MAX_WITNESSES {
                self.violations.push(v);
            }
        }
    }
}
