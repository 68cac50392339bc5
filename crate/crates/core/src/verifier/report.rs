use std::fmt;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// One named check with an optional counterexample.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl CheckResult {
    pub fn pass(check: &str) -> Self {
        Self {
            check: check.into(),
            status: Status::Pass,
            witness: None,
        }
    }

    pub fn fail(check: &str, witness: Value) -> Self {
        Self {
            check: check.into(),
            status: Status::Fail,
            witness: Some(witness),
        }
    }

    pub fn skipped(check: &str) -> Self {
        Self {
            check: check.into(),
            status: Status::Skipped,
            witness: None,
        }
    }

    pub fn from_outcome(check: &str, outcome: Result<(), Value>) -> Self {
        match outcome {
            Ok(()) => Self::pass(check),
            Err(w) => Self::fail(check, w),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skipped",
        };
        write!(f, "{:<16} {status}", self.check)?;
        if let Some(w) = &self.witness {
            write!(f, "  {w}")?;
        }
        Ok(())
    }
}
