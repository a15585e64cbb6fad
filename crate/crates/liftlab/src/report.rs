//! Check outcomes and their text and JSON renderings.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub status: Status,
    /// `None` only for `Status::Error`.
    pub residual: Option<f64>,
    pub tolerance: f64,
    /// Coordinates of the worst sample point.
    pub witness: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub details: Map<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Engine {
    pub version: &'static str,
    pub seed: u64,
    pub points: usize,
    #[serde(rename = "box")]
    pub bbox: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub scenario: String,
    pub n: usize,
    pub q: usize,
    pub engine: Engine,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn check(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "scenario: {} (n={}, q={})",
            self.scenario, self.n, self.q
        );
        let _ = writeln!(
            out,
            "engine:   liftlab {}, seed {}, {} points",
            self.engine.version, self.engine.seed, self.engine.points
        );
        let width = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
        for c in &self.checks {
            let _ = write!(out, "  {:<width$}  {:<5}", c.id, c.status.as_str());
            if let Some(r) = c.residual {
                let _ = write!(out, "  residual {r:.3e}  tol {:.1e}", c.tolerance);
            }
            if let Some(w) = &c.witness {
                if c.status == Status::Fail {
                    let coords: Vec<String> = w.iter().map(|x| format!("{x:.6}")).collect();
                    let _ = write!(out, "  at ({})", coords.join(", "));
                }
            }
            if let Some(e) = &c.error {
                let _ = write!(out, "  {e}");
            }
            out.push('\n');
        }
        let passed = self
            .checks
            .iter()
            .filter(|c| c.status == Status::Pass)
            .count();
        let _ = writeln!(
            out,
            "result:   {} ({passed}/{} checks passed)",
            if self.passed { "PASS" } else { "FAIL" },
            self.checks.len()
        );
        out
    }
}
