//! Named pass/fail items shared by the report types.

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// Exact witness or short diagnostic.
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }

    /// Check whose detail prints both sides of an equality.
    pub fn equal<T: PartialEq + std::fmt::Display>(
        name: impl Into<String>,
        lhs: &T,
        rhs: &T,
    ) -> Self {
        Self::new(name, lhs == rhs, format!("{lhs} vs {rhs}"))
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}
