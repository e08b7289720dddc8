//! The guarded SSA equation.

use std::sync::Arc;

use crate::frontend::expr::Expr;
use crate::frontend::types::SourceLocation;
use crate::goto::PropertyClass;

/// A proof obligation as it appears in the equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyRef {
    pub id: String,
    pub class: PropertyClass,
    pub description: String,
    pub loc: Option<Arc<SourceLocation>>,
    /// The asserted condition before renaming, for reports.
    pub condition: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepKind {
    Assignment {
        lhs: Expr,
        rhs: Expr,
        /// Source-level target such as `buffer[i]`, index already renamed.
        display: Expr,
        hidden: bool,
    },
    Assumption(Expr),
    Assertion {
        cond: Expr,
        property: Arc<PropertyRef>,
    },
    Input {
        name: Arc<str>,
        values: Vec<Expr>,
    },
    Output {
        name: Arc<str>,
        values: Vec<Expr>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub kind: StepKind,
    pub guard: Expr,
    pub loc: Option<Arc<SourceLocation>>,
}

impl Step {
    pub fn is_assignment(&self) -> bool {
        matches!(self.kind, StepKind::Assignment { .. })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Equation {
    pub steps: Vec<Step>,
    /// Every property the program can reach, in first-occurrence order.
    pub properties: Vec<Arc<PropertyRef>>,
    pub vccs_generated: usize,
    pub vccs_remaining: usize,
    pub steps_before_slicing: usize,
    pub sliced_assignments: usize,
    pub free_symbols: u32,
    /// Assertions on no feasible path (the property is trivially satisfied).
    pub unreachable_properties: Vec<Arc<PropertyRef>>,
}

impl Equation {
    pub fn assertion_steps(&self) -> impl Iterator<Item = (usize, &Step)> {
        self.steps
            .iter()
            .enumerate()
            .filter(|(_, s)| matches!(s.kind, StepKind::Assertion { .. }))
    }

    /// Steps that assert the property with the given id.
    pub fn steps_of(&self, id: &str) -> Vec<usize> {
        self.assertion_steps()
            .filter(|(_, s)| matches!(&s.kind, StepKind::Assertion { property, .. } if property.id == id))
            .map(|(i, _)| i)
            .collect()
    }
}
