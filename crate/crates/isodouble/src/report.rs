//! Machine-readable verification reports.

use serde::{Deserialize, Serialize};

/// Outcome of one verification check.
///
/// Serialized field order is fixed by the struct declaration, so identical
/// runs produce byte-identical JSON.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    /// Stable identifier of the check, e.g. `"clifford.verify_system"`.
    pub check_name: String,
    pub pass: bool,
    /// Largest residual observed across all samples/sub-checks.
    pub worst_residual: f64,
    /// Threshold the residuals were compared against.
    pub tolerance: f64,
    /// Number of samples or sub-checks evaluated.
    pub samples: u64,
    /// Master seed the sampling was keyed by (0 when no sampling occurred).
    pub seed: u64,
    /// Human-readable per-aspect lines, stable across runs.
    pub details: Vec<String>,
}

impl VerificationReport {
    pub fn new(check_name: impl Into<String>, tolerance: f64, seed: u64) -> Self {
        VerificationReport {
            check_name: check_name.into(),
            pass: true,
            worst_residual: 0.0,
            tolerance,
            samples: 0,
            seed,
            details: Vec::new(),
        }
    }

    /// Fold one residual into the report; the report fails if it exceeds
    /// the tolerance.
    pub fn record(&mut self, label: &str, residual: f64) {
        if residual > self.worst_residual || residual.is_nan() {
            self.worst_residual = residual;
        }
        let ok = residual.is_finite() && residual <= self.tolerance;
        if !ok {
            self.pass = false;
        }
        self.details
            .push(format!("{}: residual {:e} (tol {:e})", label, residual, self.tolerance));
    }

    /// Record a named boolean condition that does not carry a residual.
    pub fn require(&mut self, label: &str, ok: bool) {
        if !ok {
            self.pass = false;
        }
        self.details
            .push(format!("{}: {}", label, if ok { "ok" } else { "FAIL" }));
    }

    /// Add an informational line without affecting pass/fail.
    pub fn note(&mut self, line: impl Into<String>) {
        self.details.push(line.into());
    }
}
