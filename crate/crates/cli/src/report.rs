use std::collections::BTreeMap;
use std::time::Instant;

use rees_core::groebner::Ideal;
use rees_core::pencil::PencilInvariants;
use rees_core::rees::{CaseLabel, SettingReport};
use rees_core::ring::{MatrixJson, PolyMatrix};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Passed,
    Failed,
    Skipped,
    /// Evaluated for information; never affects the verdict.
    Noted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Kind of failure, used for the exit code.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<FailureKind>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    Validation,
    Mismatch,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub instance: String,
    pub command: String,
    pub n: usize,
    pub field: String,
    pub order: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub setting: Option<SettingReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<CaseLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pencil: Option<PencilInvariants>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub normalization: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub matrices: BTreeMap<String, MatrixJson>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub ideals: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub saturation_exponent: Option<usize>,
    pub checks: Vec<CheckResult>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

impl RunReport {
    pub fn new(instance: &str, command: &str, n: usize, field: String, order: String) -> Self {
        RunReport {
            instance: instance.to_string(),
            command: command.to_string(),
            n,
            field,
            order,
            verdict: Verdict::Pass,
            setting: None,
            case: None,
            branch: None,
            pencil: None,
            normalization: Vec::new(),
            matrices: BTreeMap::new(),
            ideals: BTreeMap::new(),
            saturation_exponent: None,
            checks: Vec::new(),
            notes: Vec::new(),
            error: None,
            timings_ms: Some(BTreeMap::new()),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, status: Status, detail: Option<String>) {
        self.checks.push(CheckResult {
            name: name.into(),
            status,
            detail,
            failure: None,
        });
    }

    pub fn fail(&mut self, name: impl Into<String>, kind: FailureKind, detail: Option<String>) {
        self.checks.push(CheckResult {
            name: name.into(),
            status: Status::Failed,
            detail,
            failure: Some(kind),
        });
    }

    pub fn ideal(&mut self, name: &str, ideal: &Ideal) {
        self.ideals.insert(name.to_string(), ideal_strings(ideal));
    }

    pub fn matrix(&mut self, name: &str, m: &PolyMatrix) {
        self.matrices.insert(name.to_string(), m.to_json());
    }

    /// Runs `f` and records its wall-clock time under `stage`.
    pub fn timed<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        if let Some(tm) = self.timings_ms.as_mut() {
            *tm.entry(stage.to_string()).or_default() += t.elapsed().as_secs_f64() * 1e3;
        }
        out
    }

    /// Sets the verdict from the checks: `FAIL` on any failed check or an
    /// error.
    pub fn finish(&mut self) {
        let failed = self.error.is_some() || self.checks.iter().any(|c| c.status == Status::Failed);
        self.verdict = if failed { Verdict::Fail } else { Verdict::Pass };
    }

    pub fn worst_failure(&self) -> Option<FailureKind> {
        self.checks.iter().filter_map(|c| c.failure).max()
    }
}

/// Reduced Gröbner basis, descending by leading monomial, monic.
pub fn ideal_strings(ideal: &Ideal) -> Vec<String> {
    let ctx = ideal.ctx();
    let mut gb: Vec<_> = ideal.gb().elements().to_vec();
    gb.sort_by(|a, b| ctx.order().cmp(b.lm(), a.lm()));
    gb.iter().map(|g| g.to_string()).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub random: usize,
    pub passed: usize,
    pub failed: usize,
    pub verdict: Verdict,
    pub reports: Vec<RunReport>,
}
