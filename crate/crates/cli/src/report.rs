//! Verification report records: {kind, mode, samples, max_residual,
//! failures}, serialized deterministically.

use std::path::Path;

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub kind: String,
    pub mode: String,
    pub samples: usize,
    pub max_residual: f64,
    pub failures: Vec<String>,
    pub pass: bool,
}

impl CheckReport {
    pub fn new(kind: impl Into<String>, mode: &str, samples: usize) -> Self {
        CheckReport {
            kind: kind.into(),
            mode: mode.to_string(),
            samples,
            max_residual: 0.0,
            failures: Vec::new(),
            pass: true,
        }
    }

    pub fn residual(mut self, r: f64, tol: f64) -> Self {
        self.max_residual = r;
        if !(r <= tol) {
            self.pass = false;
            self.failures.push(format!("max residual {r:.3e} exceeds {tol:.1e}"));
        }
        self
    }

    pub fn fail(mut self, msg: impl Into<String>) -> Self {
        self.pass = false;
        self.failures.push(msg.into());
        self
    }

    pub fn require(mut self, ok: bool, msg: &str) -> Self {
        if !ok {
            self.pass = false;
            self.failures.push(msg.to_string());
        }
        self
    }

    pub fn line(&self) -> String {
        format!(
            "{} {} [{}] samples={} max_residual={:.3e}{}",
            if self.pass { "PASS" } else { "FAIL" },
            self.kind,
            self.mode,
            self.samples,
            self.max_residual,
            if self.failures.is_empty() {
                String::new()
            } else {
                format!(" ({})", self.failures.join("; "))
            }
        )
    }
}

pub fn write_json(path: &Path, reports: &[CheckReport]) -> std::io::Result<()> {
    let body = serde_json::to_string_pretty(reports).expect("serializable");
    std::fs::write(path, body)
}
