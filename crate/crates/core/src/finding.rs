//! Findings: places where a printed formula and the engine disagree.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Finding {
    /// Short machine-readable kind, e.g. `closed-form-mismatch`.
    pub kind: String,
    /// Source label of the printed formula.
    pub anchor: String,
    /// What the finding is about, e.g. `E2@n=4` or `T31:XNYN`.
    pub subject: String,
    pub message: String,
    pub values: BTreeMap<String, String>,
}

impl Finding {
    pub fn new(kind: &str, anchor: &str, subject: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            kind: kind.to_string(),
            anchor: anchor.to_string(),
            subject: subject.into(),
            message: message.into(),
            values: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.values.insert(key.to_string(), value.to_string());
        self
    }
}
