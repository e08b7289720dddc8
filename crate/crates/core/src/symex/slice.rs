//! Simple slicing: nothing after the last assertion can affect a property.

use super::equation::{Equation, StepKind};

/// Drops every step after the last assertion and returns how many
/// assignments were removed.
pub fn slice(eq: &mut Equation) -> usize {
    let Some(last) = eq
        .steps
        .iter()
        .rposition(|s| matches!(s.kind, StepKind::Assertion { .. }))
    else {
        return 0;
    };
    let removed = eq.steps[last + 1..].iter().filter(|s| s.is_assignment()).count();
    eq.steps.truncate(last + 1);
    removed
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::expr::Expr;
    use crate::symex::Step;

    fn assign() -> Step {
        let x = Expr::true_expr();
        Step {
            kind: StepKind::Assignment {
                lhs: x.clone(),
                rhs: x.clone(),
                display: x,
                hidden: false,
            },
            guard: Expr::true_expr(),
            loc: None,
        }
    }

    #[test]
    fn tail_is_removed() {
        let mut eq = Equation {
            steps: vec![assign(), assign()],
            ..Equation::default()
        };
        assert_eq!(slice(&mut eq), 0);
        assert_eq!(eq.steps.len(), 2);
        eq.steps.insert(
            1,
            Step {
                kind: StepKind::Assumption(Expr::true_expr()),
                guard: Expr::true_expr(),
                loc: None,
            },
        );
        let property = std::sync::Arc::new(crate::symex::PropertyRef {
            id: "f.assertion.1".into(),
            class: crate::goto::PropertyClass::Assertion,
            description: String::new(),
            loc: None,
            condition: Expr::true_expr(),
        });
        eq.steps.insert(
            1,
            Step {
                kind: StepKind::Assertion {
                    cond: Expr::false_expr(),
                    property,
                },
                guard: Expr::true_expr(),
                loc: None,
            },
        );
        assert_eq!(slice(&mut eq), 1);
        assert_eq!(eq.steps.len(), 2);
    }
}
