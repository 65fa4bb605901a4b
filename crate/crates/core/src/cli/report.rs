//! Verification reports: one line per invariant, pass iff every line passes.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `max_residual ≤ tolerance`; NaN never passes.
    pub fn bounded(name: &str, max_residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            max_residual,
            tolerance,
            passed: max_residual <= tolerance,
        }
    }

    /// Passes when `min_value > 0`. The residual is the shortfall below zero.
    pub fn positive(name: &str, min_value: f64) -> Self {
        Self {
            name: name.to_string(),
            max_residual: (-min_value).max(0.0),
            tolerance: 0.0,
            passed: min_value > 0.0,
        }
    }

    pub fn failed(name: &str) -> Self {
        Self {
            name: name.to_string(),
            max_residual: f64::INFINITY,
            tolerance: 0.0,
            passed: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct VerificationReport {
    pub scenario: String,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
    /// Smallest `det ρ` seen and where.
    pub min_det: Option<f64>,
    pub min_det_t: Option<f64>,
}

impl VerificationReport {
    pub fn new(scenario: impl Into<String>) -> Self {
        Self {
            scenario: scenario.into(),
            ..Self::default()
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        self.warnings.push(message.into());
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scenario {}", self.scenario)?;
        for c in &self.checks {
            writeln!(
                f,
                "{} {:<24} max {:.3e}  tol {:.1e}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.max_residual,
                c.tolerance
            )?;
        }
        if let (Some(d), Some(t)) = (self.min_det, self.min_det_t) {
            writeln!(f, "min det rho {d:.6e} at t = {t:.6}")?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        write!(f, "overall {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}
