//! Named verification suites over finite boxes of the building.
//!
//! Each suite sweeps an explicit finite configuration space and compares the
//! library against brute-force recomputation. Reports are deterministic for a
//! fixed graph, radius and seed.

mod atlases;
mod building;
mod fuchsian;
mod groupoids;
mod hyperplanes;
mod words;

use crate::building::Building;
use crate::parallel;
use crate::report::CheckReport;
use serde::Serialize;
use serde_json::{json, Value};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Words,
    Building,
    Hyperplanes,
    Special,
    Groupoids,
    Hierarchy,
    Atlases,
    Fuchsian,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Words,
        Suite::Building,
        Suite::Hyperplanes,
        Suite::Special,
        Suite::Groupoids,
        Suite::Hierarchy,
        Suite::Atlases,
        Suite::Fuchsian,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Words => "words",
            Suite::Building => "building",
            Suite::Hyperplanes => "hyperplanes",
            Suite::Special => "special",
            Suite::Groupoids => "groupoids",
            Suite::Hierarchy => "hierarchy",
            Suite::Atlases => "atlases",
            Suite::Fuchsian => "fuchsian",
        }
    }

    /// The suites selected by a name, with `all` selecting every suite.
    pub fn select(name: &str) -> Option<Vec<Suite>> {
        if name == "all" {
            return Some(Suite::ALL.to_vec());
        }
        name.parse().ok().map(|s| vec![s])
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyConfig {
    pub radius: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { radius: 2, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
    /// Derived quantities worth reading without the witnesses.
    pub info: Value,
}

impl SuiteReport {
    fn new(suite: Suite, checks: Vec<CheckReport>, info: Value) -> Self {
        let passed = checks.iter().all(CheckReport::passed);
        SuiteReport { suite: suite.name().into(), passed, checks, info }
    }

    pub fn check(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub graph: Value,
    pub config: VerifyConfig,
    pub passed: bool,
    pub configurations: u64,
    pub violations: u64,
    pub suites: Vec<SuiteReport>,
}

pub fn run_suite(b: &Building, suite: Suite, cfg: &VerifyConfig) -> SuiteReport {
    let (checks, info) = match suite {
        Suite::Words => words::run(b, cfg),
        Suite::Building => building::run(b, cfg),
        Suite::Hyperplanes => hyperplanes::run(b, cfg),
        Suite::Special => hyperplanes::run_special(b, cfg),
        Suite::Groupoids => groupoids::run(b, cfg),
        Suite::Hierarchy => groupoids::run_hierarchy(b, cfg),
        Suite::Atlases => atlases::run(b, cfg),
        Suite::Fuchsian => fuchsian::run(b, cfg),
    };
    SuiteReport::new(suite, checks, info)
}

/// Runs the suites in the given order.
pub fn run(b: &Building, suites: &[Suite], cfg: &VerifyConfig) -> VerifyReport {
    let reports: Vec<SuiteReport> = suites.iter().map(|&s| run_suite(b, s, cfg)).collect();
    let configurations = reports.iter().flat_map(|r| &r.checks).map(|c| c.configurations).sum();
    let violations = reports.iter().flat_map(|r| &r.checks).map(|c| c.violations_total).sum();
    let graph: Value = serde_json::from_str(&b.graph().to_json()).unwrap_or(Value::Null);
    VerifyReport {
        graph,
        config: *cfg,
        passed: reports.iter().all(|r| r.passed),
        configurations,
        violations,
        suites: reports,
    }
}

/// One named check over `items`, evaluated in parallel and merged in order.
fn sweep<T, F>(name: &str, items: &[T], f: F) -> CheckReport
where
    T: Sync,
    F: Fn(&T, &mut CheckReport) + Sync + Send,
{
    let parts = parallel::map(items, |x| {
        let mut r = CheckReport::new(name);
        f(x, &mut r);
        r
    });
    let mut out = CheckReport::new(name);
    for p in parts {
        out.absorb(p);
    }
    out
}

/// A check consisting of one outcome.
fn single(name: &str, ok: bool, witness: impl FnOnce() -> Value) -> CheckReport {
    let mut r = CheckReport::new(name);
    r.check(ok, name, witness);
    r
}

fn error_check(name: &str, e: impl fmt::Display) -> CheckReport {
    let mut r = CheckReport::new(name);
    r.count(1);
    r.violation("error", json!(e.to_string()));
    r
}
