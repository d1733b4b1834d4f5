use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Feasible,
    Infeasible,
    Verified,
    Refuted,
}

impl Verdict {
    /// Exit code of a command that produced this verdict.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Feasible | Verdict::Verified => 0,
            Verdict::Infeasible | Verdict::Refuted => 1,
        }
    }
}

/// Limits a command ran under, echoed for reproducibility.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub max_vertices: usize,
    pub parallel: usize,
    pub debug_recheck: bool,
}

/// Machine-readable result of one command. Field order is fixed, and
/// objects inside `detail` serialize with sorted keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub verdict: Verdict,
    pub detail: Value,
    pub seed: Option<u64>,
    pub caps: Caps,
    pub elapsed_us: u64,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
