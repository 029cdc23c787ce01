use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: u32 = 1;

/// What a subcommand hands back to the dispatcher.
pub struct Outcome {
    pub results: Value,
    /// Set when the run completed but the answer is a domain failure, such
    /// as a cycle in the point set or a violated class condition.
    pub failure: Option<String>,
    /// Tabular rendering for `--csv`.
    pub csv: Option<String>,
}

impl Outcome {
    pub fn ok(results: Value) -> Self {
        Outcome { results, failure: None, csv: None }
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    pub inputs_digest: String,
    pub threads: Option<usize>,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub results: Value,
    /// Wall time in milliseconds; the only field that varies between
    /// identical runs.
    pub timing_ms: f64,
}
