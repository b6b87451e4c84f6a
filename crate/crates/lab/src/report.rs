use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::json::{CertificateJson, CycJson};
use crate::ledger::Calibration;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub index: usize,
    pub detail: String,
    /// Serialized inputs; `--only <index>` with the same seed replays them.
    pub witness: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: String,
    pub statement: String,
    pub p: Vec<u64>,
    pub seed: u64,
    pub ledger: String,
    pub instances: usize,
    pub passed: usize,
    pub failures: Vec<Failure>,
    pub calibration: Option<CycJson>,
    pub runtime_ms: u128,
    pub certificates: Vec<CertificateJson>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.passed == self.instances
    }

    pub fn summary(&self) -> String {
        let cal = match &self.calibration {
            Some(c) => format!(", constant {}", c.to_scalar().map(|s| s.to_string()).unwrap_or_default()),
            None => String::new(),
        };
        format!(
            "{}: {} {}/{} instances{}",
            self.identity,
            if self.ok() { "PASS" } else { "FAIL" },
            self.passed,
            self.instances,
            cal
        )
    }
}

/// Collects instance outcomes for one identity.
pub struct ReportBuilder {
    report: VerificationReport,
    start: Instant,
    max_certificates: usize,
}

impl ReportBuilder {
    pub fn new(identity: &str, statement: &str, p: &[u64], seed: u64) -> Self {
        ReportBuilder {
            report: VerificationReport {
                identity: identity.into(),
                statement: statement.into(),
                p: p.to_vec(),
                seed,
                ledger: orbit_core::LEDGER_ID.into(),
                instances: 0,
                passed: 0,
                failures: Vec::new(),
                calibration: None,
                runtime_ms: 0,
                certificates: Vec::new(),
                notes: Vec::new(),
            },
            start: Instant::now(),
            max_certificates: 32,
        }
    }

    pub fn pass(&mut self) {
        self.report.instances += 1;
        self.report.passed += 1;
    }

    pub fn fail(&mut self, index: usize, detail: impl Into<String>, witness: serde_json::Value) {
        self.report.instances += 1;
        self.report.failures.push(Failure { index, detail: detail.into(), witness });
    }

    pub fn record(&mut self, index: usize, ok: bool, detail: impl FnOnce() -> String, witness: impl FnOnce() -> serde_json::Value) {
        if ok {
            self.pass();
        } else {
            self.fail(index, detail(), witness());
        }
    }

    pub fn certificate(&mut self, c: &orbit_core::integrals::Certificate) {
        if self.report.certificates.len() < self.max_certificates {
            self.report.certificates.push(CertificateJson { cells: c.cells, level: c.level, radius: c.radius });
        }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.report.notes.push(s.into());
    }

    pub fn calibration(&mut self, c: &Calibration) {
        self.report.calibration = c.constant.as_ref().map(CycJson::from);
    }

    pub fn finish(mut self) -> VerificationReport {
        self.report.runtime_ms = self.start.elapsed().as_millis();
        self.report
    }
}
