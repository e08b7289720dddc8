//! Textual rendering of verification conditions.

use std::fmt::Write;

use crate::frontend::expr::Expr;

use super::equation::{Equation, StepKind};

fn guarded(guard: &Expr, e: &Expr) -> String {
    if guard.is_true() {
        e.to_string()
    } else {
        format!("{guard} => {e}")
    }
}

pub fn show_vcc(eq: &Equation) -> String {
    let mut out = String::from("VERIFICATION CONDITIONS:\n");
    for (i, step) in eq.assertion_steps() {
        let StepKind::Assertion { cond, property } = &step.kind else {
            continue;
        };
        out.push('\n');
        if let Some(loc) = &property.loc {
            let _ = writeln!(out, "{loc}");
        }
        let _ = writeln!(out, "{}", property.description);
        let mut n = 0;
        for prior in &eq.steps[..i] {
            let line = match &prior.kind {
                StepKind::Assignment { lhs, rhs, .. } => format!("{lhs} == {rhs}"),
                StepKind::Assumption(c) => guarded(&prior.guard, c),
                _ => continue,
            };
            n += 1;
            let _ = writeln!(out, "{{-{n}}} {line}");
        }
        let _ = writeln!(out, "|--------------------------");
        let _ = writeln!(out, "{{1}} {}", guarded(&step.guard, cond));
    }
    out
}
