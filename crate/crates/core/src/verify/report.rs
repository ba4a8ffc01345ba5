use std::fmt;

use crate::value::Value;

/// One falsified instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    /// Every variable of the instance, including indices.
    pub assignment: Vec<(String, Value)>,
    /// The two sides that should agree, rendered with their expressions.
    pub lhs: String,
    pub rhs: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bound: Vec<String> = self.assignment.iter().map(|(n, v)| format!("{n}={v}")).collect();
        write!(f, "[{}] {} vs {}", bound.join(" "), self.lhs, self.rhs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }
}

/// Result of one check on one function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub function: String,
    pub instances_checked: u64,
    pub failures: Vec<Failure>,
}

impl CheckOutcome {
    pub fn new(name: impl Into<String>, function: impl Into<String>) -> Self {
        CheckOutcome { name: name.into(), function: function.into(), instances_checked: 0, failures: Vec::new() }
    }

    pub fn status(&self) -> Status {
        if self.failures.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub(crate) fn fail(&mut self, assignment: Vec<(String, Value)>, lhs: String, rhs: String) {
        self.failures.push(Failure { assignment, lhs, rhs });
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub checks: Vec<CheckOutcome>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status() == Status::Pass)
    }

    pub fn failure_count(&self) -> usize {
        self.checks.iter().map(|c| c.failures.len()).sum()
    }

    pub fn get(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.checks.extend(other.checks);
    }
}

impl From<CheckOutcome> for CheckReport {
    fn from(c: CheckOutcome) -> Self {
        CheckReport { checks: vec![c] }
    }
}
