use std::fmt::Write as _;

use serde::Serialize;

use crate::harness::config::SuiteConfig;

/// Version tag of the JSON report layout.
pub const SCHEMA: &str = "hkr-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    /// The identity or construction this check exercises, or `plumbing`.
    pub anchor: String,
    pub status: Status,
    /// Whether a failure makes the run fail.
    pub gating: bool,
    /// Number of instances evaluated.
    pub cases: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub gating_failures: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub config: SuiteConfig,
    pub summary: Summary,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub(crate) fn new(config: SuiteConfig, mut checks: Vec<CheckRecord>) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        let mut summary = Summary::default();
        for c in &checks {
            match c.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Skipped => summary.skipped += 1,
            }
            if c.status == Status::Fail && c.gating {
                summary.gating_failures += 1;
            }
        }
        Report { schema: SCHEMA, config, summary, checks }
    }

    pub fn ok(&self) -> bool {
        self.summary.gating_failures == 0
    }

    pub fn check(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One line per check, then a summary line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let tag = if c.gating { "" } else { " (non-gating)" };
            let _ = write!(s, "{} {}{} [{} cases] {}", c.status.label(), c.id, tag, c.cases, c.anchor);
            if let Some(ms) = c.wall_ms {
                let _ = write!(s, " {ms}ms");
            }
            s.push('\n');
            if let Some(d) = &c.detail {
                let _ = writeln!(s, "    {d}");
            }
            if let Some(w) = &c.witness {
                let _ = writeln!(s, "    witness: {w}");
            }
        }
        let _ = writeln!(
            s,
            "{} passed, {} failed ({} gating), {} skipped",
            self.summary.pass, self.summary.fail, self.summary.gating_failures, self.summary.skipped
        );
        s
    }
}
