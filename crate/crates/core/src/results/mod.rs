//! Property decisions, counterexample traces and reports.

pub mod decide;
pub mod render;
pub mod report;
pub mod trace;

use std::fmt;
use std::sync::Arc;
use std::time::Duration;

use crate::symex::PropertyRef;

pub use decide::decide_properties;
pub use trace::{build_trace, Trace, TraceStep, TraceStepKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    Failure,
}

impl Status {
    pub fn text(self) -> &'static str {
        match self {
            Status::Success => "SUCCESS",
            Status::Failure => "FAILURE",
        }
    }
}

#[derive(Clone, Debug)]
pub struct PropertyResult {
    pub property: Arc<PropertyRef>,
    pub status: Status,
    pub trace: Option<Trace>,
}

#[derive(Clone, Debug)]
pub struct VerificationResult {
    pub results: Vec<PropertyResult>,
    /// Solver calls, including the final unsatisfiable one.
    pub iterations: usize,
    pub num_vars: u32,
    pub num_clauses: usize,
    pub solve_time: Duration,
    pub runtime: Duration,
}

impl VerificationResult {
    pub fn failed(&self) -> usize {
        self.results.iter().filter(|r| r.status == Status::Failure).count()
    }

    pub fn total(&self) -> usize {
        self.results.len()
    }

    pub fn successful(&self) -> bool {
        self.failed() == 0
    }

    pub fn status_of(&self, id: &str) -> Option<Status> {
        self.results.iter().find(|r| r.property.id == id).map(|r| r.status)
    }

    pub fn get(&self, id: &str) -> Option<&PropertyResult> {
        self.results.iter().find(|r| r.property.id == id)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecideError {
    /// The solver returned an assignment that violates the formula.
    InvalidModel,
    NoViolatingStep(String),
}

impl fmt::Display for DecideError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecideError::InvalidModel => f.write_str("solver model does not satisfy the formula"),
            DecideError::NoViolatingStep(id) => write!(f, "no violating step for property {id}"),
        }
    }
}

impl std::error::Error for DecideError {}

/// Function a property belongs to: the prefix of its id.
pub fn property_function(id: &str) -> &str {
    id.rsplitn(3, '.').nth(2).unwrap_or(id)
}

fn property_number(id: &str) -> u64 {
    id.rsplit('.').next().and_then(|n| n.parse().ok()).unwrap_or(0)
}

/// Orders by function, then source line, then class and number.
pub fn sort_results(results: &mut [PropertyResult]) {
    results.sort_by(|a, b| {
        let key = |r: &PropertyResult| {
            let p = &r.property;
            (
                property_function(&p.id).to_string(),
                p.loc.as_ref().map_or(0, |l| l.line),
                p.class,
                property_number(&p.id),
            )
        };
        key(a).cmp(&key(b))
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn id_parts() {
        assert_eq!(property_function("abs.overflow.1"), "abs");
        assert_eq!(property_function("main.array_bounds.12"), "main");
        assert_eq!(property_number("main.array_bounds.12"), 12);
    }
}
