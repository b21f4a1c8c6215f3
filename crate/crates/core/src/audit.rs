//! Pass/fail records for audited laws.

use serde::Serialize;

use crate::error::Result;

/// Outcome of one audited law.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub witness: Option<String>,
}

impl Check {
    pub fn pass(name: &str) -> Self {
        Check { name: name.into(), ok: true, witness: None }
    }
    pub fn fail(name: &str, witness: String) -> Self {
        Check { name: name.into(), ok: false, witness: Some(witness) }
    }
    pub(crate) fn from_result(name: &str, r: Result<()>) -> Self {
        match r {
            Ok(()) => Check::pass(name),
            Err(e) => Check::fail(name, e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.ok).collect()
    }
    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }
}
