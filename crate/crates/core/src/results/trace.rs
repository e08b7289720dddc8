//! Counterexample traces read off a satisfying assignment.

use std::sync::Arc;

use crate::encode::{read_bits, Encoding, Value as BitValue};
use crate::eval::Value;
use crate::frontend::display::pretty_name;
use crate::frontend::expr::{Expr, ExprKind};
use crate::frontend::types::{CType, SourceLocation};
use crate::symex::{Equation, PropertyRef, StepKind};

use super::render::index_text;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceStepKind {
    Input { name: String, values: Vec<(Value, CType)> },
    Output { name: String, values: Vec<(Value, CType)> },
    Assignment { lhs: String, value: Value, ty: CType },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    /// Position of the originating SSA step, counting from 1.
    pub state: usize,
    pub loc: Option<Arc<SourceLocation>>,
    pub kind: TraceStepKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub property: Arc<PropertyRef>,
    pub steps: Vec<TraceStep>,
    /// Location of the violated assertion instance.
    pub loc: Option<Arc<SourceLocation>>,
    /// Every nondeterministic choice on the path, in execution order.
    pub nondet: Vec<Value>,
}

impl Trace {
    /// Values of all INPUT steps, in order.
    pub fn inputs(&self) -> Vec<(&str, &[(Value, CType)])> {
        self.steps
            .iter()
            .filter_map(|s| match &s.kind {
                TraceStepKind::Input { name, values } => Some((name.as_str(), values.as_slice())),
                _ => None,
            })
            .collect()
    }
}

pub fn concrete(v: &BitValue, model: &[bool]) -> Value {
    match v {
        BitValue::Bits(bits) => Value::Scalar(read_bits(bits, model)),
        BitValue::Array(items) => Value::Array(items.iter().map(|i| concrete(i, model)).collect()),
    }
}

fn lvalue_text(display: &Expr, indexes: &[u64]) -> String {
    match &display.kind {
        ExprKind::Index(a, i) => {
            let (last, rest) = indexes.split_last().expect("index value");
            format!("{}[{}]", lvalue_text(a, rest), index_text(*last, &i.ty))
        }
        ExprKind::Symbol(n) => pretty_name(n).to_string(),
        _ => display.to_string(),
    }
}

fn element_at(v: &Value, indexes: &[u64]) -> Option<Value> {
    match indexes.split_first() {
        None => Some(v.clone()),
        Some((i, rest)) => match v {
            Value::Array(items) => element_at(items.get(*i as usize)?, rest),
            Value::Scalar(_) => None,
        },
    }
}

/// The first instance of the property that fails under the model.
pub fn violating_step(eq: &Equation, enc: &Encoding, id: &str, model: &[bool]) -> Option<usize> {
    eq.steps_of(id)
        .into_iter()
        .find(|&i| enc.steps[i].violated.is_some_and(|l| l.eval(model)))
}

pub fn build_trace(eq: &Equation, enc: &Encoding, id: &str, model: &[bool]) -> Option<Trace> {
    let last = violating_step(eq, enc, id, model)?;
    let StepKind::Assertion { property, .. } = &eq.steps[last].kind else {
        return None;
    };
    let mut steps = Vec::new();
    let mut nondet = Vec::new();
    for (i, (step, se)) in eq.steps[..=last].iter().zip(&enc.steps).enumerate() {
        if !se.guard.eval(model) {
            continue;
        }
        let kind = match &step.kind {
            StepKind::Assignment {
                lhs,
                rhs,
                display,
                hidden,
            } => {
                let value = se.lhs.as_ref().map(|v| concrete(v, model));
                if matches!(rhs.kind, ExprKind::FreeSymbol(_)) {
                    nondet.extend(value.clone());
                }
                if *hidden {
                    continue;
                }
                let Some(whole) = value else { continue };
                let indexes: Vec<u64> = se.values.iter().map(|v| read_bits(v.bits(), model)).collect();
                let value = match &se.element {
                    Some(e) => concrete(e, model),
                    None => match element_at(&whole, &indexes) {
                        Some(v) => v,
                        None => continue,
                    },
                };
                let ty = if indexes.is_empty() {
                    lhs.ty.clone()
                } else {
                    display.ty.clone()
                };
                TraceStepKind::Assignment {
                    lhs: lvalue_text(display, &indexes),
                    value,
                    ty,
                }
            }
            StepKind::Input { name, values } | StepKind::Output { name, values } => {
                let values = values
                    .iter()
                    .zip(&se.values)
                    .map(|(e, v)| (concrete(v, model), e.ty.clone()))
                    .collect();
                let name = name.to_string();
                if matches!(step.kind, StepKind::Input { .. }) {
                    TraceStepKind::Input { name, values }
                } else {
                    TraceStepKind::Output { name, values }
                }
            }
            StepKind::Assumption(_) | StepKind::Assertion { .. } => continue,
        };
        steps.push(TraceStep {
            state: i + 1,
            loc: step.loc.clone(),
            kind,
        });
    }
    Some(Trace {
        property: property.clone(),
        steps,
        loc: eq.steps[last].loc.clone(),
        nondet,
    })
}
