use lflab_core::identity_suite::CheckReport;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub created_utc: String,
    pub seed: u64,
    pub checks: Vec<CheckReport>,
    pub all_pass: bool,
}

impl SuiteReport {
    pub fn new(suite: String, seed: u64, checks: Vec<CheckReport>) -> Self {
        let all_pass = checks.iter().all(|c| c.pass);
        Self {
            suite,
            created_utc: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            seed,
            checks,
            all_pass,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report fields are always serializable")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// The report with timing and timestamp fields cleared, for comparing runs.
    pub fn body(&self) -> Self {
        let mut b = self.clone();
        b.created_utc.clear();
        b.checks.iter_mut().for_each(|c| c.runtime_ms = 0);
        b
    }
}
