//! Replaces calls through function pointers by guarded direct calls.

use crate::frontend::expr::{BinaryOp, Expr, ExprKind};
use crate::frontend::types::{CType, Ident};

use super::{expand_body, GotoModel, InstrKind, Instruction, PropertyClass};

/// Functions whose type matches a pointer's target, in symbol-table order.
pub fn candidates(model: &GotoModel, pointer_ty: &CType) -> Vec<Ident> {
    let CType::Pointer { target, .. } = pointer_ty else {
        return Vec::new();
    };
    model
        .symtab
        .iter()
        .filter(|s| s.is_function && s.ty == **target)
        .map(|s| s.name.clone())
        .collect()
}

pub fn remove_function_pointers(model: &mut GotoModel) {
    let names: Vec<Ident> = model.functions.keys().cloned().collect();
    for name in names {
        let Some(body) = model.functions[&name].body.clone() else {
            continue;
        };
        let snapshot = &*model;
        let new_body = expand_body(body, |base, ins| {
            let InstrKind::Call { lhs, function, args } = &ins.kind else {
                return vec![(ins, false)];
            };
            if matches!(function.kind, ExprKind::FunctionAddress(_)) {
                return vec![(ins, false)];
            }
            let cands = candidates(snapshot, &function.ty);
            let loc = ins.loc.clone();
            // Layout per candidate: guard, call, jump to end.
            let end = base + cands.len() * 3 + 2;
            let mut out = Vec::new();
            for (k, g) in cands.iter().enumerate() {
                let next = base + (k + 1) * 3;
                let addr = Expr::new(ExprKind::FunctionAddress(g.clone()), function.ty.clone());
                let eq = Expr::binary(BinaryOp::Eq, function.clone(), addr.clone());
                let mut guard = Instruction::new(
                    InstrKind::Goto {
                        guard: Expr::not(eq),
                        target: next,
                    },
                    loc.clone(),
                );
                if k == 0 {
                    guard.labels = ins.labels.clone();
                }
                out.push((guard, true));
                out.push((
                    Instruction::new(
                        InstrKind::Call {
                            lhs: lhs.clone(),
                            function: addr,
                            args: args.clone(),
                        },
                        loc.clone(),
                    ),
                    false,
                ));
                out.push((
                    Instruction::new(
                        InstrKind::Goto {
                            guard: Expr::true_expr(),
                            target: end,
                        },
                        loc.clone(),
                    ),
                    true,
                ));
            }
            let description = format!("no candidate for function pointer call through {function}");
            let mut fail = Instruction::assertion(
                Expr::false_expr(),
                PropertyClass::PointerDispatch,
                description,
                loc.clone(),
            );
            if cands.is_empty() {
                fail.labels = ins.labels.clone();
            }
            out.push((fail, false));
            out.push((
                Instruction::new(InstrKind::Assume(Expr::false_expr()), loc.clone()),
                false,
            ));
            // Lands on whatever follows; the caller's next instruction.
            out.push((Instruction::new(InstrKind::Skip, loc), false));
            out
        });
        model.functions.get_mut(&name).unwrap().body = Some(new_body);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::types::PlatformConfig;
    use crate::frontend::{compile_source, PreprocessOptions};
    use crate::goto::convert::convert_program;

    fn model(src: &str) -> GotoModel {
        let p = compile_source("t.c", src, &PreprocessOptions::default(), &PlatformConfig::default()).unwrap();
        convert_program(&p)
    }

    #[test]
    fn dispatch_in_symbol_order() {
        let mut m = model(
            "int g(int a) { return a; } int h(int a) { return -a; } long k(int a) { return a; }\n\
             int f(int (*fp)(int)) { return fp(2); }",
        );
        remove_function_pointers(&mut m);
        m.check_well_formed().unwrap();
        let body = m.functions["f"].instructions();
        let called: Vec<String> = body
            .iter()
            .filter_map(|i| match &i.kind {
                InstrKind::Call { function, .. } => Some(function.to_string()),
                _ => None,
            })
            .collect();
        assert_eq!(called, ["&g", "&h"]);
        let asserts = body.iter().filter(|i| i.property.is_some()).count();
        assert_eq!(asserts, 1);
    }

    #[test]
    fn zero_candidates() {
        let mut m = model("void f(int (*fp)(char)) { fp(1); }");
        remove_function_pointers(&mut m);
        let body = m.functions["f"].instructions();
        assert!(matches!(&body[0].kind, InstrKind::Assert(c) if c.is_false()));
    }
}
