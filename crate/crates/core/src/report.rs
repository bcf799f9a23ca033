//! Named residuals with pass/fail verdicts.

use std::collections::BTreeMap;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

impl Check {
    /// `passed` is `residual <= tolerance`; a NaN residual never passes.
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tolerance,
            passed: residual <= tolerance,
            metadata: BTreeMap::new(),
        }
    }

    pub fn with_meta(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.metadata.insert(key.into(), value.into());
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CheckReport {
    checks: Vec<Check>,
    overall_passed: bool,
}

impl CheckReport {
    pub fn new() -> Self {
        Self {
            checks: Vec::new(),
            overall_passed: true,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.overall_passed &= check.passed;
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: CheckReport) {
        for c in other.checks {
            self.push(c);
        }
    }

    pub fn checks(&self) -> &[Check] {
        &self.checks
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// True when every check passed (vacuously true for an empty report).
    pub fn overall_passed(&self) -> bool {
        self.overall_passed
    }

    /// Largest residual in the report, 0 when empty.
    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }
}

impl FromIterator<Check> for CheckReport {
    fn from_iter<I: IntoIterator<Item = Check>>(iter: I) -> Self {
        let mut report = CheckReport::new();
        for c in iter {
            report.push(c);
        }
        report
    }
}
