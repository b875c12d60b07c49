use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub max_residual: f64,
    pub trials: usize,
    pub pass: bool,
    pub tolerance: f64,
}

/// A deterministic JSON report: keys are sorted and no timings are kept.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub checks: BTreeMap<String, Check>,
    pub pass: bool,
    #[serde(flatten)]
    pub data: BTreeMap<String, Value>,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Self {
        Report {
            command: command.to_string(),
            seed,
            checks: BTreeMap::new(),
            pass: true,
            data: BTreeMap::new(),
        }
    }

    /// Records `residual ≤ tolerance`; NaN never passes.
    pub fn check(&mut self, name: &str, residual: f64, trials: usize, tolerance: f64) -> bool {
        self.record(name, residual, trials, tolerance, residual <= tolerance)
    }

    /// Records a check whose residual must exceed `threshold`.
    pub fn check_above(&mut self, name: &str, value: f64, trials: usize, threshold: f64) -> bool {
        self.record(name, value, trials, threshold, value > threshold)
    }

    fn record(
        &mut self,
        name: &str,
        residual: f64,
        trials: usize,
        tolerance: f64,
        pass: bool,
    ) -> bool {
        self.checks.insert(
            name.to_string(),
            Check {
                max_residual: residual,
                trials,
                pass,
                tolerance,
            },
        );
        self.pass = self.checks.values().all(|c| c.pass);
        pass
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report values serialize");
        self.data.insert(key.to_string(), v);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
