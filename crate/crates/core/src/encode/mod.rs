//! Propositional encoding of the SSA equation.

pub mod bitblast;

use indexmap::IndexMap;

use crate::frontend::expr::{Expr, ExprKind};
use crate::sat::{dimacs, CnfFormula, Lit};
use crate::symex::{Equation, StepKind};

pub use bitblast::{read_bits, BitBlaster, Bv, SymbolKey, Value};

#[derive(Clone, Debug)]
pub struct StepEncoding {
    pub guard: Lit,
    /// For assertions: the step is reached, all earlier assumptions hold and
    /// the condition fails.
    pub violated: Option<Lit>,
    /// The assigned value, for assignments.
    pub lhs: Option<Value>,
    /// Input or output values, or the renamed indexes of an assigned element.
    pub values: Vec<Value>,
    /// The written element when the target is an array element.
    pub element: Option<Value>,
    /// The condition of an assumption.
    pub condition: Option<Lit>,
}

pub struct Encoding {
    pub blaster: BitBlaster,
    /// Per property id, true iff the property is violated.
    pub indicators: IndexMap<String, Lit>,
    pub steps: Vec<StepEncoding>,
}

impl Encoding {
    pub fn cnf(&self) -> &CnfFormula {
        &self.blaster.cnf
    }

    /// Clause stating that at least one of the given properties fails.
    pub fn violation_clause(&self, ids: &[String]) -> Vec<Lit> {
        ids.iter().filter_map(|id| self.indicators.get(id).copied()).collect()
    }
}

/// Indexes of an assigned lvalue such as `a[i][j]`, outermost last.
pub fn display_indexes(display: &Expr) -> Vec<&Expr> {
    match &display.kind {
        ExprKind::Index(a, i) => {
            let mut v = display_indexes(a);
            v.push(i);
            v
        }
        _ => Vec::new(),
    }
}

/// The value stored by a chain of `depth` nested array updates.
fn written_element(rhs: &Expr, depth: usize) -> Option<&Expr> {
    let mut e = rhs;
    for _ in 0..depth {
        match &e.kind {
            ExprKind::With(_, _, v) => e = v,
            _ => return None,
        }
    }
    Some(e)
}

pub fn encode(eq: &Equation) -> Encoding {
    let mut bb = BitBlaster::new();
    let mut assumptions = bb.true_lit();
    let mut steps = Vec::with_capacity(eq.steps.len());
    let mut per_property: IndexMap<String, Vec<Lit>> = IndexMap::new();
    for p in &eq.properties {
        per_property.entry(p.id.clone()).or_default();
    }
    for step in &eq.steps {
        let guard = bb.convert_bool(&step.guard);
        let mut enc = StepEncoding {
            guard,
            violated: None,
            lhs: None,
            values: Vec::new(),
            element: None,
            condition: None,
        };
        match &step.kind {
            StepKind::Assignment { lhs, rhs, display, .. } => {
                let value = bb.convert(rhs);
                if let ExprKind::SsaSymbol { name, level, version } = &lhs.kind {
                    let key = SymbolKey::Ssa {
                        name: name.clone(),
                        level: *level,
                        version: *version,
                    };
                    bb.define(key, value.clone());
                }
                enc.values = display_indexes(display).into_iter().map(|i| bb.convert(i)).collect();
                if !enc.values.is_empty() {
                    enc.element = written_element(rhs, enc.values.len()).map(|e| bb.convert(e));
                }
                enc.lhs = Some(value);
            }
            StepKind::Assumption(c) => {
                let c = bb.convert_bool(c);
                enc.condition = Some(c);
                let holds = bb.or(!guard, c);
                assumptions = bb.and(assumptions, holds);
            }
            StepKind::Assertion { cond, property } => {
                let c = bb.convert_bool(cond);
                let reached = bb.and(assumptions, guard);
                let v = bb.and(reached, !c);
                enc.violated = Some(v);
                per_property.entry(property.id.clone()).or_default().push(v);
            }
            StepKind::Input { values, .. } | StepKind::Output { values, .. } => {
                enc.values = values.iter().map(|v| bb.convert(v)).collect();
            }
        }
        steps.push(enc);
    }
    let indicators = per_property
        .into_iter()
        .map(|(id, lits)| {
            let l = bb.or_all(&lits);
            (id, l)
        })
        .collect();
    Encoding {
        blaster: bb,
        indicators,
        steps,
    }
}

/// DIMACS text of the equation with the query that some property fails.
pub fn emit_dimacs(enc: &Encoding) -> String {
    let mut formula = enc.cnf().clone();
    let ids: Vec<String> = enc.indicators.keys().cloned().collect();
    if !ids.is_empty() {
        formula.add_clause(enc.violation_clause(&ids));
    }
    let mut comments = Vec::new();
    for key in &enc.blaster.order {
        let name = match key {
            SymbolKey::Ssa { name, level, version } => {
                if *level == 0 {
                    format!("{name}#{version}")
                } else {
                    format!("{name}@{level}#{version}")
                }
            }
            SymbolKey::Free(n) => format!("nondet#{n}"),
        };
        let lits: Vec<String> = enc.blaster.symbols[key]
            .lits()
            .iter()
            .map(|l| match l.var() {
                0 if l.is_negated() => "FALSE".to_string(),
                0 => "TRUE".to_string(),
                _ => l.to_dimacs().to_string(),
            })
            .collect();
        comments.push(format!("{name} {}", lits.join(" ")));
    }
    for (id, l) in &enc.indicators {
        comments.push(format!("property {id} {}", l.to_dimacs()));
    }
    dimacs::write(&formula, &comments)
}
