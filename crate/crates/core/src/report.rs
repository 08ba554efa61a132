//! Pass/fail reports shared by the theorem harnesses.

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub subject: String,
    /// `false` when the hypotheses of the harness do not apply.
    pub applicable: bool,
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn new(subject: impl Into<String>) -> Self {
        CheckReport { subject: subject.into(), applicable: true, checks: Vec::new() }
    }

    pub fn not_applicable(subject: impl Into<String>, why: impl Into<String>) -> Self {
        let mut r = CheckReport { subject: subject.into(), applicable: false, checks: Vec::new() };
        r.checks.push(Check { name: "applicable".into(), passed: false, detail: why.into() });
        r
    }

    pub fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    pub fn extend(&mut self, prefix: &str, other: CheckReport) {
        for c in other.checks {
            self.checks.push(Check { name: format!("{prefix}{}", c.name), ..c });
        }
    }

    pub fn passed(&self) -> bool {
        self.applicable && self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl std::fmt::Display for CheckReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{}:{}", self.subject, if self.applicable { "" } else { " not applicable" })?;
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            if c.detail.is_empty() {
                writeln!(f, "  [{mark}] {}", c.name)?;
            } else {
                writeln!(f, "  [{mark}] {}: {}", c.name, c.detail)?;
            }
        }
        Ok(())
    }
}
