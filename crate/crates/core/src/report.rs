//! Machine-readable verification reports.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// How strong a passing check is: an exact computation, sampled evidence
/// for a Zariski-open statement, or an observation without a theorem
/// behind it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Evidence {
    Exact,
    PropertyBased,
    Observed,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub check: String,
    #[serde(rename = "type")]
    pub type_name: String,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub status: Status,
    pub evidence: Evidence,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl CheckResult {
    pub fn exact(check: &str, type_name: &str, witness: Option<Value>) -> Self {
        CheckResult {
            check: check.to_string(),
            type_name: type_name.to_string(),
            seed: None,
            samples: None,
            status: if witness.is_none() {
                Status::Pass
            } else {
                Status::Fail
            },
            evidence: Evidence::Exact,
            detail: None,
            witness,
        }
    }

    pub fn sampled(check: &str, type_name: &str, seed: u64, samples: usize, witness: Option<Value>) -> Self {
        CheckResult {
            seed: Some(seed),
            samples: Some(samples),
            evidence: Evidence::PropertyBased,
            ..Self::exact(check, type_name, witness)
        }
    }

    pub fn with_detail(mut self, detail: Value) -> Self {
        self.detail = Some(detail);
        self
    }

    pub fn with_evidence(mut self, evidence: Evidence) -> Self {
        self.evidence = evidence;
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, c: CheckResult) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn get(&self, check: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.check == check)
    }
}

/// Collects the first failure of a check as a witness.
#[derive(Default)]
pub struct Witness(Option<Value>);

impl Witness {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fail(&mut self, v: Value) {
        if self.0.is_none() {
            self.0 = Some(v);
        }
    }

    pub fn ensure(&mut self, ok: bool, v: impl FnOnce() -> Value) {
        if !ok {
            self.fail(v());
        }
    }

    pub fn is_clean(&self) -> bool {
        self.0.is_none()
    }

    pub fn into_inner(self) -> Option<Value> {
        self.0
    }
}
