use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Outcome of a single check with both sides of the comparison.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub inputs: Value,
    pub expected: Value,
    pub got: Value,
    /// `None` for exact comparisons.
    pub tol: Option<f64>,
    pub status: Status,
}

impl VerificationReport {
    pub fn new(
        check: impl Into<String>,
        inputs: Value,
        expected: Value,
        got: Value,
        tol: Option<f64>,
        ok: bool,
    ) -> Self {
        VerificationReport {
            check: check.into(),
            inputs,
            expected,
            got,
            tol,
            status: if ok { Status::Pass } else { Status::Fail },
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}
